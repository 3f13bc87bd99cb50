"""
Lookup tables for the vectorised checks.

A postulate instance only depends on a handful of state indices (the group image, the images of the two
halves of a partition, the singleton images of the members...). Each table below is indexed by those and
holds whether the instance violates the postulate for SOME constraint, so that checking a grid of
profiles is one gather per postulate. None of the tables depend on the operator.
"""

import logging
from functools import cache, cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np

from esfpy.logic.worlds import BeliefSet, nonempty_belief_sets
from esfpy.preorders.preorder import TotalPreorder
from esfpy.preorders.space import MASK_DTYPE, StateSpace, state_space
from esfpy.societies.profile import Society
from esfpy.types import AgentId

logger = logging.getLogger(__name__)


# Constraints are belief sets in `beliefs` mode and full epistemic states in `states` mode.
# results[img, c] is the belief set of lex(constraint c, img) as a mask.
class ConstraintTables:
    space: StateSpace
    mode: str
    masks: np.ndarray
    results: np.ndarray
    state_indices: Optional[np.ndarray]

    def __init__(self, world_count: int, mode: str = "beliefs", max_models: Optional[int] = None):
        self.space = space = state_space(world_count)
        self.mode = mode
        self.max_models = max_models
        match mode:
            case "beliefs":
                self.state_indices = None
                self.masks = np.array([b.mask for b in nonempty_belief_sets(world_count, max_models)], dtype=MASK_DTYPE)
                self.results = space.best[:, self.masks]
            case "states":
                tops = space.tops
                chosen = [s for s in range(space.size) if max_models is None or int(tops[s]).bit_count() <= max_models]
                chosen.sort(key=lambda s: (int(tops[s]).bit_count(), int(tops[s]), s))
                self.state_indices = np.array(chosen, dtype=np.int64)
                self.masks = tops[self.state_indices]
                self.results = tops[space.lex_table[self.state_indices]].T
            case _:
                raise ValueError(f"Unknown constraint mode '{mode}'")
        assert self.results.shape == (space.size, len(self.masks)), f"results table of shape {self.results.shape}"
        logger.debug("%s constraint tables over %d worlds: %d constraints", mode, world_count, self.count)

    @property
    def count(self) -> int:
        return len(self.masks)

    def beliefs(self, c: int) -> BeliefSet:
        return BeliefSet(int(self.masks[c]), self.space.world_count)

    def state(self, c: int) -> Optional[TotalPreorder]:
        if self.state_indices is None:
            return None
        return self.space[int(self.state_indices[c])]

    # constraints whose beliefs have at most two models
    @cached_property
    def two_model(self) -> np.ndarray:
        return np.array([c for c, m in enumerate(self.masks) if int(m).bit_count() <= 2], dtype=np.int64)

    @cached_property
    def esf1(self) -> np.ndarray:
        off = (self.results & ~self.masks[None, :]) != 0
        return (off | (self.results == 0)).any(axis=1)

    @cached_property
    def _esf34(self) -> Tuple[np.ndarray, np.ndarray]:
        by_mask: Dict[int, List[int]] = {}
        for c, m in enumerate(self.masks):
            by_mask.setdefault(int(m), []).append(c)
        esf3 = np.zeros(self.space.size, dtype=bool)
        esf4 = np.zeros(self.space.size, dtype=bool)
        for first in range(self.count):
            for second_mask in by_mask:
                meet = int(self.masks[first]) & second_mask
                if meet == 0:
                    continue
                narrowed = self.results[:, first] & MASK_DTYPE(second_mask)
                # lex(first & second) against lex(first) narrowed by second
                for target in by_mask.get(meet, ()):
                    direct = self.results[:, target]
                    esf3 |= (narrowed & ~direct) != 0
                    esf4 |= (narrowed != 0) & ((direct & ~narrowed) != 0)
        return esf3, esf4

    @property
    def esf3(self) -> np.ndarray:
        return self._esf34[0]

    @property
    def esf4(self) -> np.ndarray:
        return self._esf34[1]

    @cached_property
    def esf6(self) -> np.ndarray:
        # [img, meet], meet being the conjunction of the members' beliefs
        table = np.zeros((self.space.size, 1 << self.space.world_count), dtype=bool)
        for meet in range(1, table.shape[1]):
            narrowed = self.masks & MASK_DTYPE(meet)
            applicable = narrowed != 0
            table[:, meet] = (applicable[None, :] & (self.results != narrowed[None, :])).any(axis=1)
        return table

    @cached_property
    def _partitions(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        size = self.space.size
        esf7 = np.zeros((size, size, size), dtype=bool)
        esf8 = np.zeros_like(esf7)
        esf8w = np.zeros_like(esf7)
        left = self.results[:, None, :]
        right = self.results[None, :, :]
        both = left & right
        either = left | right
        consistent = both != 0
        for group in range(size):
            whole = self.results[group][None, None, :]
            esf7[group] = ((both & ~whole) != 0).any(axis=2)
            esf8[group] = (consistent & ((whole & ~both) != 0)).any(axis=2)
            esf8w[group] = (consistent & ((whole & ~either) != 0)).any(axis=2)
        return esf7, esf8, esf8w

    @property
    def esf7(self) -> np.ndarray:
        return self._partitions[0]

    @property
    def esf8(self) -> np.ndarray:
        return self._partitions[1]

    @property
    def esf8w(self) -> np.ndarray:
        return self._partitions[2]

    @cached_property
    def dictator(self) -> np.ndarray:
        # [img, single]: some group result is not within the candidate's
        group = self.results[:, None, :]
        single = self.results[None, :, :]
        return ((group & ~single) != 0).any(axis=2)


# assignment-property tables over state indices, from the strict/weak pair bitmasks
class SemanticTables:
    def __init__(self, world_count: int):
        self.space = state_space(world_count)

    @cached_property
    def p2(self) -> np.ndarray:
        tops = self.space.tops.astype(np.int64)
        meets = np.arange(1 << self.space.world_count)
        return (meets[None, :] != 0) & (tops[:, None] != meets[None, :])

    @cached_property
    def _partitions(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        weak = self.space.weak_pairs
        strict = self.space.strict_pairs
        w1, w2 = weak[:, None], weak[None, :]
        s1, s2 = strict[:, None], strict[None, :]
        size = self.space.size
        p3 = np.zeros((size, size, size), dtype=bool)
        p4 = np.zeros_like(p3)
        p4w = np.zeros_like(p3)
        for group in range(size):
            p3[group] = (w1 & w2 & ~weak[group]) != 0
            p4[group] = (((w1 & s2) | (s1 & w2)) & ~strict[group]) != 0
            p4w[group] = (s1 & s2 & ~strict[group]) != 0
        return p3, p4, p4w

    @property
    def p3(self) -> np.ndarray:
        return self._partitions[0]

    @property
    def p4(self) -> np.ndarray:
        return self._partitions[1]

    @property
    def p4w(self) -> np.ndarray:
        return self._partitions[2]

    @cached_property
    def dictator(self) -> np.ndarray:
        # [img, single]: the group drops one of the candidate's strict preferences
        strict = self.space.strict_pairs
        return (strict[None, :] & ~strict[:, None]) != 0


@cache
def constraint_tables(world_count: int, mode: str, max_models: Optional[int]) -> ConstraintTables:
    return ConstraintTables(world_count, mode, max_models)


@cache
def semantic_tables(world_count: int) -> SemanticTables:
    return SemanticTables(world_count)


class Slab:
    """
    One slice of the profile grid of a society: the first member's state is fixed, every other member
    ranges over all states along its own axis. Profile i of the slab has global index offset + i, which is
    its position in enumerate_profiles order.
    """

    def __init__(self, op, space: StateSpace, society: Society, first: Optional[int]):
        self.op = op
        self.space = space
        self.society = society
        size, k = space.size, society.size
        if k == 1:
            assert first is None, "a one-agent society is a single slab"
            self.states: List[np.ndarray] = [np.arange(size)]
            self.shape: Tuple[int, ...] = (size,)
            self.offset = 0
        else:
            assert first is not None, "slabs of larger societies fix the first member"
            self.states = [np.asarray(first)]
            for axis in range(k - 1):
                self.states.append(np.arange(size).reshape([size if a == axis else 1 for a in range(k - 1)]))
            self.shape = (size,) * (k - 1)
            self.offset = first * size ** (k - 1)
        self._images: Dict[Tuple[AgentId, ...], np.ndarray] = {}

    def image(self, block: Optional[Society] = None) -> np.ndarray:
        members = (block or self.society).members
        if members not in self._images:
            arrays = [self.states[self.society.position(a)] for a in members]
            self._images[members] = self.op.image_indices(self.space, arrays)
        return self._images[members]

    @cached_property
    def singles(self) -> np.ndarray:
        # singleton-profile image of every state
        return self.op.image_indices(self.space, [np.arange(self.space.size)])

    def single(self, position: int) -> np.ndarray:
        return self.singles[self.states[position]]

    def full(self, values: np.ndarray) -> np.ndarray:
        return np.broadcast_to(values, self.shape)

    def first(self, bad: np.ndarray) -> Optional[int]:
        # global index of the first violating profile
        bad = self.full(bad)
        if not bad.any():
            return None
        return self.offset + int(bad.argmax())


def slab_starts(space: StateSpace, society: Society) -> List[Optional[int]]:
    return [None] if society.size == 1 else list(range(space.size))
