"""
Decisive and locally decisive coalitions.

Constraints are belief sets; by B-Rep the group result under E only depends on B(E), so every scan below reads
results from StateSpace.best. Scans walk the same slabs as the postulate checker and stop at the first
violating profile.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np

from esfpy.checking.grid import GridContext, context_of
from esfpy.checking.ids import PostulateId
from esfpy.checking.checker import check_many
from esfpy.checking.scope import CheckScope, check_cost, scope_sizes
from esfpy.checking.tables import Slab, constraint_tables, slab_starts
from esfpy.logic.worlds import BeliefSet, conjunction_of
from esfpy.preorders.space import MASK_DTYPE
from esfpy.societies.profile import Profile, Society, profile_at
from esfpy.types import AgentId, WorldIndex
from esfpy.verdict import Status, Verdict, Witness

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Coalition:
    """A possibly empty set of agents, kept sorted."""

    members: Tuple[AgentId, ...] = ()

    def __post_init__(self):
        if tuple(sorted(set(self.members))) != self.members:
            raise ValueError(f"Coalition members must be sorted and distinct, got {self.members}")

    @classmethod
    def of(cls, *ids: AgentId) -> "Coalition":
        return cls(tuple(sorted(set(ids))))

    def within(self, society: Society) -> "Coalition":
        outside = [a for a in self.members if a not in society]
        if outside:
            raise ValueError(f"Coalition {self} has agents {outside} outside society {society}")
        return self

    def issubset(self, other: "Coalition") -> bool:
        return set(self.members) <= set(other.members)

    def __contains__(self, agent: AgentId) -> bool:
        return agent in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __str__(self):
        return "{" + ",".join(str(m) for m in self.members) + "}" if self.members else "∅"


def coalitions_of(society: Society, include_empty: bool = False) -> List[Coalition]:
    # smallest first, then lexicographic
    first = 0 if include_empty else 1
    return [Coalition(c) for size in range(first, society.size + 1) for c in combinations(society.members, size)]


@dataclass(frozen=True)
class DecisivenessRecord:
    coalition: Coalition
    society: Society
    mode: str  # "local" or "decisive"
    verdict: Verdict
    pair: Optional[Tuple[BeliefSet, BeliefSet]] = None


# slab, context -> (profiles meeting the premises, profiles violating the conclusion)
Premises = Callable[[Slab, GridContext], Tuple[np.ndarray, np.ndarray]]


@dataclass
class _Scan:
    first: Optional[int] = None
    qualifying: int = 0


def _scan(op, society: Society, scope: CheckScope, premises: Premises, what: str) -> _Scan:
    check_cost(scope_sizes(scope).states ** society.size * (society.size + 1), scope, what)
    ctx = context_of(scope)
    found = _Scan()
    for start in slab_starts(ctx.space, society):
        slab = Slab(op, ctx.space, society, start)
        qualifying, bad = premises(slab, ctx)
        found.qualifying += int(slab.full(qualifying).sum())
        first = slab.first(bad)
        if first is not None:
            found.first = first
            break
    return found


def _member_results(slab: Slab, ctx: GridContext, mask: int) -> List[np.ndarray]:
    return [ctx.space.best[slab.single(pos), mask] for pos in range(slab.society.size)]


def _belief_pair(e: BeliefSet, e2: BeliefSet):
    if not e.consistent or not e2.consistent:
        raise ValueError(f"Both constraints must be consistent, got {e.mask:#x} and {e2.mask:#x}")


def _local_premises(coalition: Coalition, e: BeliefSet, e2: BeliefSet) -> Premises:
    def premises(slab: Slab, ctx: GridContext):
        full = MASK_DTYPE((1 << ctx.space.world_count) - 1)
        qualifying = np.ones((), dtype=bool)
        meet = np.asarray(full)
        for agent, member in zip(slab.society, _member_results(slab, ctx, e.mask)):
            if agent in coalition:
                qualifying = qualifying & ((member & e2.mask) == 0)
                meet = meet & member
            else:
                # outsiders believe exactly E2
                qualifying = qualifying & (member == e2.mask)
        qualifying = qualifying & (meet != 0)
        group = ctx.space.best[slab.image(), e.mask]
        return qualifying, qualifying & ((group & e2.mask) != 0)

    return premises


def _decisive_for_premises(coalition: Coalition, e: BeliefSet, e2: BeliefSet) -> Premises:
    def premises(slab: Slab, ctx: GridContext):
        full = MASK_DTYPE((1 << ctx.space.world_count) - 1)
        qualifying = np.ones((), dtype=bool)
        meet = np.asarray(full)
        for agent, member in zip(slab.society, _member_results(slab, ctx, e.mask)):
            if agent in coalition:
                qualifying = qualifying & ((member & e2.mask) == 0)
                meet = meet & member
        qualifying = qualifying & (meet != 0)
        group = ctx.space.best[slab.image(), e.mask]
        return qualifying, qualifying & ((group & e2.mask) != 0)

    return premises


def _strict_premises(coalition: Coalition) -> Premises:
    def premises(slab: Slab, ctx: GridContext):
        strict = ctx.space.strict_pairs
        agreed = np.asarray(np.uint64(~np.uint64(0)))
        # pairs every coalition member ranks strictly
        for pos, agent in enumerate(slab.society):
            if agent in coalition:
                agreed = agreed & strict[slab.single(pos)]
        return agreed != 0, (agreed & ~strict[slab.image()]) != 0

    return premises


def _profile(scope: CheckScope, society: Society, index: int) -> Profile:
    return profile_at(society, context_of(scope).space.states, index)


def _results(op, profile: Profile, e: BeliefSet) -> Tuple[List[BeliefSet], BeliefSet]:
    members = [op.result_beliefs(Profile.single(a, s), e) for a, s in profile.items()]
    return members, op.result_beliefs(profile, e)


def replay_coalition(op, witness: Witness) -> bool:
    # pure-path re-check of a coalition witness
    coalition = Coalition(witness.values)
    profile = witness.profiles[0]
    match witness.postulate:
        case "LOCAL" | "DECISIVE_FOR":
            e, e2 = witness.constraints
            members, group = _results(op, profile, e)
            inside = [r for a, r in zip(profile.society, members) if a in coalition]
            premise = all(not r.consistent_with(e2) for r in inside)
            premise = premise and conjunction_of(inside, profile.world_count).consistent
            if witness.postulate == "LOCAL":
                premise = premise and all(r == e2 for a, r in zip(profile.society, members) if a not in coalition)
            return premise and group.consistent_with(e2)
        case "DECISIVE":
            w, w2 = witness.worlds
            singles = [op.assign(Profile.single(a, s)) for a, s in profile.items()]
            agreed = all(s.strictly(w, w2) for a, s in zip(profile.society, singles) if a in coalition)
            return agreed and not op.assign(profile).strictly(w, w2)
    raise ValueError(f"No coalition replay for '{witness.postulate}'")


def _confirmed(op, witness: Witness) -> Witness:
    assert replay_coalition(op, witness), f"coalition witness does not replay: {witness}"
    return witness


def is_locally_decisive(op, n: Society, d: Coalition, e: BeliefSet, e2: BeliefSet,
                        scope: CheckScope = CheckScope()) -> Verdict:
    _belief_pair(e, e2)
    d.within(n)
    subject = f"{op.name}/{d} locally decisive in {n}"
    pair = f"E={e.mask:#x} against E'={e2.mask:#x}"
    found = _scan(op, n, scope, _local_premises(d, e, e2), subject)
    if found.first is not None:
        profile = _profile(scope, n, found.first)
        witness = Witness("LOCAL", n, (profile,), constraints=(e, e2), values=d.members)
        return Verdict.fails(subject, pair, _confirmed(op, witness))
    if found.qualifying == 0:
        return Verdict.holds(subject, pair, "vacuously: no profile meets the premises")
    return Verdict.holds(subject, pair, f"{found.qualifying} profiles meet the premises")


def is_decisive_for(op, n: Society, d: Coalition, e: BeliefSet, e2: BeliefSet,
                    scope: CheckScope = CheckScope()) -> Verdict:
    _belief_pair(e, e2)
    d.within(n)
    subject = f"{op.name}/{d} decisive in {n}"
    pair = f"E={e.mask:#x} against E'={e2.mask:#x}"
    found = _scan(op, n, scope, _decisive_for_premises(d, e, e2), subject)
    if found.first is not None:
        profile = _profile(scope, n, found.first)
        witness = Witness("DECISIVE_FOR", n, (profile,), constraints=(e, e2), values=d.members)
        return Verdict.fails(subject, pair, _confirmed(op, witness))
    return Verdict.holds(subject, pair, f"{found.qualifying} profiles meet the premises")


def _reduced_agreement(op, n: Society, d: Coalition, scope: CheckScope) -> int:
    # the strict-preference form and the two-model constraint form must decide every sample alike
    ctx = context_of(scope)
    space = ctx.space
    rng = np.random.default_rng(scope.seed)
    rows = rng.integers(space.size, size=(scope.sample_budget, n.size))
    singles = op.image_indices(space, [np.arange(space.size)])
    images = op.image_indices(space, [rows[:, pos] for pos in range(n.size)])
    inside = [pos for pos, a in enumerate(n) if a in d]
    strict = space.strict_pairs
    agreed = np.full(len(rows), ~np.uint64(0), dtype=np.uint64)
    for pos in inside:
        agreed &= strict[singles[rows[:, pos]]]
    semantic_bad = (agreed & ~strict[images]) != 0  # a pair the coalition agrees on is dropped
    # some two-model constraint where the group keeps a world no member keeps
    syntactic_bad = np.zeros(len(rows), dtype=bool)
    for mask in (int(m) for m in constraint_tables(space.world_count, "beliefs", 2).masks):
        union = np.zeros(len(rows), dtype=MASK_DTYPE)
        for pos in inside:
            union |= space.best[singles[rows[:, pos]], mask]
        syntactic_bad |= (space.best[images, mask] & ~union) != 0
    disagreeing = np.flatnonzero(semantic_bad != syntactic_bad)
    assert len(disagreeing) == 0, f"{op.name}: decisiveness forms disagree for {d} in {n} on row {rows[disagreeing[0]]}"
    return len(rows)


def is_decisive(op, n: Society, d: Coalition, scope: CheckScope = CheckScope()) -> Verdict:
    """If w ≻ w' for every member of d, then w ≻ w' for the group, on every profile of n."""
    if not d.members:
        raise ValueError("The empty coalition cannot be decisive: with E = E' its premises always hold and ESF1 "
                         "keeps the result consistent with E")
    d.within(n)
    subject = f"{op.name}/{d} decisive in {n}"
    scope_text = f"all profiles of {n}"
    found = _scan(op, n, scope, _strict_premises(d), subject)
    samples = _reduced_agreement(op, n, d, scope)
    evidence = (("two-model form agreement", f"{samples} sampled profiles"),)
    if found.first is None:
        return Verdict(subject, Status.Satisfied, scope_text, evidence=evidence)
    profile = _profile(scope, n, found.first)
    witness = None
    singles = [op.assign(Profile.single(a, s)) for a, s in profile.items()]
    group = op.assign(profile)
    for w in range(profile.world_count):
        for w2 in range(profile.world_count):
            agreed = w != w2 and all(s.strictly(w, w2) for a, s in zip(n, singles) if a in d)
            if witness is None and agreed and not group.strictly(w, w2):
                witness = Witness("DECISIVE", n, (profile,), worlds=(w, w2), values=d.members)
    return Verdict(subject, Status.Violated, scope_text, _confirmed(op, witness), evidence=evidence)


@dataclass(frozen=True)
class MinimalDecisive:
    society: Society
    coalitions: Tuple[Coalition, ...]
    dictator: Optional[AgentId]
    records: Tuple[DecisivenessRecord, ...] = field(default=())


def minimal_decisive(op, n: Society, scope: CheckScope = CheckScope(),
                     local: Optional[Tuple[BeliefSet, BeliefSet]] = None) -> MinimalDecisive:
    """
    ⊆-minimal decisive coalitions, smallest first. A decisive singleton names the dictator. Given a pair
    (E, E2) the search is for coalitions locally decisive on that pair instead, which names no dictator.
    """
    mode = "decisive" if local is None else "local"
    minimal: List[Coalition] = []
    records: List[DecisivenessRecord] = []
    for coalition in coalitions_of(n):
        if any(m.issubset(coalition) for m in minimal):
            continue
        if local is None:
            verdict = is_decisive(op, n, coalition, scope)
        else:
            verdict = is_locally_decisive(op, n, coalition, *local, scope)
        records.append(DecisivenessRecord(coalition, n, mode, verdict, local))
        if verdict.satisfied:
            minimal.append(coalition)
    singles = [c.members[0] for c in minimal if len(c) == 1]
    dictator = singles[0] if singles and local is None else None
    if dictator is not None:
        logger.info("%s: agent %d is a dictator in %s", op.name, dictator, n)
    return MinimalDecisive(n, tuple(minimal), dictator, tuple(records))


def _world(w: WorldIndex, n: int) -> BeliefSet:
    return BeliefSet.from_worlds((w,), n)


def _pair(w: WorldIndex, w2: WorldIndex, n: int) -> BeliefSet:
    return BeliefSet.from_worlds((w, w2), n)


def _ordered_pairs(n: int) -> Iterable[Tuple[WorldIndex, WorldIndex]]:
    return ((w, w2) for w in range(n) for w2 in range(n) if w != w2)


def check_propagation(op, n: Society, scope: CheckScope = CheckScope()) -> Verdict:
    """
    For every coalition locally decisive for E_{w,w'} against E_{w'}: both propagation lemmas hold for every
    w'' outside {w, w'}, and the coalition is decisive.
    """
    subject = f"{op.name}/propagation in {n}"
    preconditions = check_many(op, (PostulateId.SD, PostulateId.P, PostulateId.I), scope)
    failing = [pid.label for pid, v in preconditions.items() if not v.satisfied]
    if failing:
        logger.warning("%s: skipped, %s do not hold", subject, ", ".join(failing))
        return Verdict.skipped(subject, scope.describe(), f"preconditions {', '.join(failing)} do not hold")
    worlds = context_of(scope).space.world_count
    checked = 0
    for coalition in coalitions_of(n):
        decisive = None
        for w, w2 in _ordered_pairs(worlds):
            local = is_locally_decisive(op, n, coalition, _pair(w, w2, worlds), _world(w2, worlds), scope)
            if not local.satisfied:
                continue
            for w3 in range(worlds):
                if w3 in (w, w2):
                    continue
                checked += 2
                first = is_decisive_for(op, n, coalition, _pair(w, w3, worlds), _world(w3, worlds), scope)
                second = is_decisive_for(op, n, coalition, _pair(w2, w3, worlds), _world(w2, worlds), scope)
                for lemma, verdict in (("first", first), ("second", second)):
                    if verdict.violated:
                        return Verdict.fails(subject, scope.describe(), verdict.witness,
                                             f"{lemma} propagation lemma fails for {coalition} from ({w}, {w2})")
            if decisive is None:
                decisive = is_decisive(op, n, coalition, scope)
            if decisive.violated:
                return Verdict.fails(subject, scope.describe(), decisive.witness,
                                     f"{coalition} is locally decisive for ({w}, {w2}) but not decisive")
    return Verdict.holds(subject, scope.describe(), f"{checked} lemma instances")


def check_observations(op, n: Society, scope: CheckScope = CheckScope()) -> Verdict:
    # instances of the elementary coalition facts, and monotonicity of decisiveness
    subject = f"{op.name}/coalition facts in {n}"
    worlds = context_of(scope).space.world_count
    failures: List[Tuple[str, str]] = []
    coalitions = coalitions_of(n)
    basics = check_many(op, (PostulateId.ESF1, PostulateId.P), scope)
    esf1, pareto = basics[PostulateId.ESF1].satisfied, basics[PostulateId.P].satisfied

    # a: decisive for a pair implies locally decisive for it
    for coalition in coalitions:
        for w, w2 in _ordered_pairs(worlds):
            e, e2 = _pair(w, w2, worlds), _world(w2, worlds)
            decisive = is_decisive_for(op, n, coalition, e, e2, scope)
            if decisive.satisfied and not is_locally_decisive(op, n, coalition, e, e2, scope).satisfied:
                failures.append(("a", f"{coalition} decisive but not locally decisive for ({w}, {w2})"))

    # b: equal or inconsistent constraint beliefs make every coalition decisive
    if esf1:
        for coalition in coalitions:
            for w, w2 in _ordered_pairs(worlds):
                e = _pair(w, w2, worlds)
                for e2 in (e, ~e):
                    if is_decisive_for(op, n, coalition, e, e2, scope).violated:
                        failures.append(("b", f"{coalition} not decisive for {e.mask:#x} against {e2.mask:#x}"))

    # c: the constraint only enters through its beliefs
    space = context_of(scope).space
    states = constraint_tables(worlds, "states", None)
    drift = np.flatnonzero((states.results != space.best[:, states.masks]).any(axis=0))
    if len(drift):
        failures.append(("c", f"constraint state {states.state(int(drift[0]))} is not decided by its beliefs"))

    # d: under ESF1 the empty coalition is never decisive
    if esf1:
        everything = BeliefSet.everything(worlds)
        if is_decisive_for(op, n, Coalition(), everything, everything, scope).satisfied:
            failures.append(("d", "the empty coalition is decisive"))

    # e: under Pareto the whole society is decisive
    decisive = {c: is_decisive(op, n, c, scope).satisfied for c in coalitions}
    if pareto and not decisive[Coalition(n.members)]:
        failures.append(("e", f"{n} is not decisive although ESF-P holds"))

    for smaller in coalitions:
        for larger in coalitions:
            if decisive[smaller] and smaller.issubset(larger) and not decisive[larger]:
                failures.append(("monotonicity", f"{smaller} decisive but {larger} is not"))

    if failures:
        return Verdict(subject, Status.Violated, scope.describe(), detail=f"{len(failures)} failures",
                       evidence=tuple(failures))
    return Verdict.holds(subject, scope.describe(), f"{len(coalitions)} coalitions")


def dictatorial_at(op, scope: CheckScope = CheckScope()) -> bool:
    # every society of scope has a decisive singleton
    return all(minimal_decisive(op, n, scope).dictator is not None for n in scope.societies())


