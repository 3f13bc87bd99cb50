"""
Exhaustive scans over profile grids.

For every society the S^|N| profiles are cut into slabs (see tables.Slab). Each registered GridCheck turns a slab
into a partial result, and merges partial results in slab order into the first hit. Hits are plain tuples of
integers whose first entry is always a global profile index; building the witness from a hit is left to the
replay module, which re-derives everything through the pure operator path.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field
from functools import cache
from itertools import batched
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from esfpy.checking.ids import PostulateId
from esfpy.checking.scope import CheckScope, ScopeSizes, check_cost, check_tables, scope_sizes
from esfpy.checking.tables import (
    ConstraintTables,
    SemanticTables,
    Slab,
    constraint_tables,
    semantic_tables,
    slab_starts,
)
from esfpy.preorders.space import StateSpace, state_space
from esfpy.societies.profile import Society, two_partitions
from esfpy.utils.registry import Associator

logger = logging.getLogger(__name__)

Hit = Tuple[int, ...]


@dataclass(frozen=True)
class GridContext:
    space: StateSpace
    constraints: ConstraintTables
    semantic: SemanticTables


@cache
def grid_context(world_count: int, mode: str, max_models: Optional[int]) -> GridContext:
    return GridContext(state_space(world_count), constraint_tables(world_count, mode, max_models),
                       semantic_tables(world_count))


def context_of(scope: CheckScope) -> GridContext:
    check_tables(scope)
    return grid_context(scope.world_count, scope.constraint_mode, scope.constraint_max_models)


def partition_count(size: int) -> int:
    return (1 << (size - 1)) - 1


def _earliest(candidates) -> Optional[Hit]:
    found = [c for c in candidates if c[0] is not None]
    return min(found) if found else None


associate_grid_checks = Associator[PostulateId, type["GridCheck"]]()


# One postulate as a slab scan. The default merge keeps the first non-empty partial, so scan must
# return the earliest hit of its slab.
class GridCheck:
    pid: PostulateId
    min_size: int = 1

    def __init__(self, pid: PostulateId):
        self.pid = pid

    def scan(self, slab: Slab, ctx: GridContext) -> Any:
        raise NotImplementedError

    def merge(self, state: Dict[str, Any], partial: Any, society: Society) -> Optional[Hit]:
        return partial

    # elementary comparisons per profile
    def factor(self, size: int, sizes: ScopeSizes) -> int:
        return sizes.constraints


# violations that only depend on the group image
@associate_grid_checks(PostulateId.ESF1, PostulateId.ESF3, PostulateId.ESF4)
class ImageCheck(GridCheck):
    def table(self, ctx: GridContext) -> np.ndarray:
        match self.pid:
            case PostulateId.ESF1:
                return ctx.constraints.esf1
            case PostulateId.ESF3:
                return ctx.constraints.esf3
            case PostulateId.ESF4:
                return ctx.constraints.esf4
        raise AssertionError(self.pid)

    def scan(self, slab: Slab, ctx: GridContext) -> Optional[Hit]:
        index = slab.first(self.table(ctx)[slab.image()])
        return None if index is None else (index,)


@associate_grid_checks(PostulateId.ESF6, PostulateId.P2)
class AgreementCheck(GridCheck):
    def scan(self, slab: Slab, ctx: GridContext) -> Optional[Hit]:
        tops = ctx.space.tops
        # worlds every member puts on top
        meet = tops[slab.states[0]]
        for states in slab.states[1:]:
            meet = meet & tops[states]
        table = ctx.constraints.esf6 if self.pid == PostulateId.ESF6 else ctx.semantic.p2
        index = slab.first(table[slab.image(), meet.astype(np.intp)])
        return None if index is None else (index,)

    def factor(self, size: int, sizes: ScopeSizes) -> int:
        return size + (sizes.constraints if self.pid == PostulateId.ESF6 else 1)


@associate_grid_checks(PostulateId.ESF7, PostulateId.ESF8, PostulateId.ESF8W,
                       PostulateId.P3, PostulateId.P4, PostulateId.P4W)
class PartitionCheck(GridCheck):
    # hit: (profile, partition index in two_partitions order)
    min_size = 2

    def table(self, ctx: GridContext) -> np.ndarray:
        return getattr(ctx.semantic if self.pid.is_semantic else ctx.constraints, self.pid.name.lower())

    def scan(self, slab: Slab, ctx: GridContext) -> Optional[Hit]:
        table = self.table(ctx)
        whole = slab.image()
        return _earliest((slab.first(table[whole, slab.image(left), slab.image(right)]), number)
                         for number, (left, right) in enumerate(two_partitions(slab.society)))

    def factor(self, size: int, sizes: ScopeSizes) -> int:
        per_partition = 1 if self.pid.is_semantic else sizes.constraints
        return partition_count(size) * per_partition


@associate_grid_checks(PostulateId.P)
class ParetoCheck(GridCheck):
    # The worst E' is the complement of the union of the members' results. Its premise holds exactly when the
    # results meet, and it fails exactly when the group result leaves the union. Hit: (profile, constraint).
    def scan(self, slab: Slab, ctx: GridContext) -> Optional[Hit]:
        results = ctx.constraints.results
        singles = [slab.single(pos) for pos in range(slab.society.size)]
        whole = slab.image()

        def first_for(c: int) -> Optional[int]:
            column = results[:, c]
            union = meet = column[singles[0]]
            for single in singles[1:]:
                union = union | column[single]
                meet = meet & column[single]
            return slab.first((meet != 0) & ((column[whole] & ~union) != 0))

        return _earliest((first_for(c), c) for c in range(ctx.constraints.count))

    def factor(self, size: int, sizes: ScopeSizes) -> int:
        return (size + 1) * sizes.constraints


@associate_grid_checks(PostulateId.SEM_P)
class StrictParetoCheck(GridCheck):
    def scan(self, slab: Slab, ctx: GridContext) -> Optional[Hit]:
        strict = ctx.space.strict_pairs
        agreed = strict[slab.single(0)]
        for pos in range(1, slab.society.size):
            agreed = agreed & strict[slab.single(pos)]
        index = slab.first((agreed & ~strict[slab.image()]) != 0)
        return None if index is None else (index,)

    def factor(self, size: int, sizes: ScopeSizes) -> int:
        return size + 1


@associate_grid_checks(PostulateId.D, PostulateId.SEM_D)
class DictatorCheck(GridCheck):
    # Every member is a candidate until some profile refutes it, and the society fails once none is left.
    # Hit: one refuting profile per member, in society order.
    def scan(self, slab: Slab, ctx: GridContext) -> Tuple[Optional[int], ...]:
        table = ctx.semantic.dictator if self.pid.is_semantic else ctx.constraints.dictator
        whole = slab.image()
        return tuple(slab.first(table[whole, slab.single(pos)]) for pos in range(slab.society.size))

    def merge(self, state: Dict[str, Any], partial: Tuple[Optional[int], ...], society: Society) -> Optional[Hit]:
        # member position -> first refuting profile
        refuted: Dict[int, int] = state.setdefault("refuted", {})
        for pos, index in enumerate(partial):
            if index is not None:
                refuted.setdefault(pos, index)
        if len(refuted) == society.size:
            return tuple(refuted[pos] for pos in range(society.size))
        return None

    def factor(self, size: int, sizes: ScopeSizes) -> int:
        return size * (1 if self.pid.is_semantic else sizes.constraints)


class SignatureCheck(GridCheck):
    """
    Independence: profiles with equal per-member signatures must give equal group values. Each slab reports the
    first profile of every (slot, signature, value) key; merging in slab order finds the earliest profile whose
    value differs from the one first seen for its (slot, signature).
    Hit: (second profile, slot, first profile).
    """

    def slots(self, ctx: GridContext) -> Sequence[int]:
        raise NotImplementedError

    # signature * base + value per profile, and the base
    def keys(self, slab: Slab, ctx: GridContext, slot: int) -> Tuple[np.ndarray, int]:
        raise NotImplementedError

    def scan(self, slab: Slab, ctx: GridContext) -> List[Tuple[int, int, np.ndarray, np.ndarray]]:
        found = []
        for slot in self.slots(ctx):
            keys, base = self.keys(slab, ctx, slot)
            unique, first = np.unique(slab.full(keys).ravel(), return_index=True)
            found.append((slot, base, unique, first + slab.offset))
        return found

    def merge(self, state: Dict[str, Any], partial, society: Society) -> Optional[Hit]:
        # (slot, signature) -> (value, profile) as first seen
        seen: Dict[Tuple[int, int], Tuple[int, int]] = state.setdefault("seen", {})
        rows = sorted((int(index), slot, int(key), base)
                      for slot, base, unique, first in partial for key, index in zip(unique, first))
        for index, slot, key, base in rows:
            signature, value = divmod(key, base)
            earlier = seen.setdefault((slot, signature), (value, index))
            if earlier[0] != value:
                return index, slot, earlier[1]
        return None


@associate_grid_checks(PostulateId.I)
class IndependenceCheck(SignatureCheck):
    # slots are the constraints with at most two models, signatures the members' singleton results
    def slots(self, ctx: GridContext) -> Sequence[int]:
        return [int(c) for c in ctx.constraints.two_model]

    def keys(self, slab: Slab, ctx: GridContext, slot: int) -> Tuple[np.ndarray, int]:
        column = ctx.constraints.results[:, slot].astype(np.int64)
        width = ctx.space.world_count
        signature = np.zeros((), dtype=np.int64)
        for pos in range(slab.society.size):
            signature = signature | (column[slab.single(pos)] << (width * pos))
        return (signature << width) | column[slab.image()], 1 << width

    def factor(self, size: int, sizes: ScopeSizes) -> int:
        return (size + 1) * sizes.two_model


@associate_grid_checks(PostulateId.SEM_IND)
class PairIndependenceCheck(SignatureCheck):
    # slots are world pairs, signatures the members' restrictions to the pair
    def slots(self, ctx: GridContext) -> Sequence[int]:
        return range(len(ctx.space.pairs))

    def keys(self, slab: Slab, ctx: GridContext, slot: int) -> Tuple[np.ndarray, int]:
        shapes = ctx.space.pair_shapes[:, slot].astype(np.int64)
        signature = np.zeros((), dtype=np.int64)
        for pos in range(slab.society.size):
            signature = signature + shapes[slab.single(pos)] * 3**pos  # three pair shapes
        return signature * 3 + shapes[slab.image()], 3

    def factor(self, size: int, sizes: ScopeSizes) -> int:
        return (size + 1) * sizes.pairs


GRID_POSTULATES: Tuple[PostulateId, ...] = tuple(associate_grid_checks.ids())


def make_grid_check(pid: PostulateId) -> GridCheck:
    return associate_grid_checks.get(pid)(pid)


def grid_cost(pid: PostulateId, scope: CheckScope, societies: Sequence[Society]) -> int:
    check = make_grid_check(pid)
    sizes = scope_sizes(scope)
    return sum(sizes.states ** n.size * check.factor(n.size, sizes) for n in societies if n.size >= check.min_size)


def check_grid_cost(op, pids: Sequence[PostulateId], scope: CheckScope, max_size: Optional[int] = None):
    societies = scope.societies(max_size)
    for pid in pids:
        check_cost(grid_cost(pid, scope, societies), scope, f"{op.name}/{pid.label}")


# runs in a worker process, which builds its own cached context
def _scan_slab(op, society: Society, first: Optional[int], pids: Tuple[PostulateId, ...], world_count: int,
               mode: str, max_models: Optional[int]) -> Dict[PostulateId, Any]:
    ctx = grid_context(world_count, mode, max_models)
    slab = Slab(op, ctx.space, society, first)
    return {pid: make_grid_check(pid).scan(slab, ctx) for pid in pids}


def _scan_task(task) -> Dict[PostulateId, Any]:
    return _scan_slab(*task)


# first hit per postulate, or every society's hit when scanning exhaustively
@dataclass
class GridOutcome:
    hits: Dict[PostulateId, List[Tuple[Society, Hit]]] = field(default_factory=dict)
    states: Dict[Tuple[PostulateId, Society], Dict[str, Any]] = field(default_factory=dict)
    scanned: Dict[PostulateId, List[Society]] = field(default_factory=dict)

    def first(self, pid: PostulateId) -> Optional[Tuple[Society, Hit]]:
        found = self.hits.get(pid)
        return found[0] if found else None


def run_grid(op, pids: Sequence[PostulateId], scope: CheckScope, max_size: Optional[int] = None,
             stop_at_first: bool = True) -> GridOutcome:
    # Societies in order until every postulate has a hit. Without stop_at_first a postulate goes on to later
    # societies, each of them still scanned only up to its own first hit.
    check_grid_cost(op, pids, scope, max_size)
    ctx = context_of(scope)
    societies = scope.societies(max_size)
    checks = {pid: make_grid_check(pid) for pid in pids}
    outcome = GridOutcome()
    remaining = set(pids)
    chunk = max(1, scope.jobs * 4)
    pool = ProcessPoolExecutor(max_workers=scope.jobs) if scope.jobs > 1 else nullcontext()
    with pool as executor:
        for society in societies:
            live = sorted(pid for pid in remaining if society.size >= checks[pid].min_size)
            if not live:
                continue
            for pid in live:
                outcome.scanned.setdefault(pid, []).append(society)
            starts = slab_starts(ctx.space, society)
            with tqdm(total=len(starts), desc=f"{op.name} {society}", unit="slab", disable=not scope.progress,
                      leave=False) as bar:
                for batch in batched(starts, chunk):
                    if not live:
                        break
                    tasks = [(op, society, first, tuple(live), scope.world_count, scope.constraint_mode,
                              scope.constraint_max_models) for first in batch]
                    # map keeps slab order, so the first merged hit is the earliest
                    results = executor.map(_scan_task, tasks) if executor is not None else map(_scan_task, tasks)
                    for partials in results:
                        bar.update()
                        for pid in list(live):
                            state = outcome.states.setdefault((pid, society), {})
                            hit = checks[pid].merge(state, partials[pid], society)
                            if hit is None:
                                continue
                            logger.debug("%s/%s: hit %s in %s", op.name, pid.label, hit, society)
                            outcome.hits.setdefault(pid, []).append((society, hit))
                            live.remove(pid)
                            if stop_at_first:
                                remaining.discard(pid)
            if not remaining:
                break
    return outcome
