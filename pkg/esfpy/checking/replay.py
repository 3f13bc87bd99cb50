"""
Witnesses, built and re-checked through the pure operator path.

`explain` turns a grid hit into a Witness by searching, in the fixed constraint order, for the instance the hit
stands for. `replay` re-executes any witness through FusionOperator.apply / result_beliefs / assign and says
whether it still is a violation; every witness the checker reports has been replayed once.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from esfpy.checking.grid import GridContext, Hit, context_of
from esfpy.checking.ids import PostulateId
from esfpy.checking.scope import CheckScope
from esfpy.checking.tables import ConstraintTables
from esfpy.logic.worlds import BeliefSet, VarSet, conjunction_of, disjunction_of, nonempty_belief_sets
from esfpy.operators.fusion import canonical_state
from esfpy.preorders.preorder import TotalPreorder, beliefs, restrict, triple_shape
from esfpy.preorders.space import state_space
from esfpy.societies.profile import Profile, Society, equivalent, profile_at, two_partitions
from esfpy.societies.profile import restrict as restrict_profile
from esfpy.types import WorldIndex
from esfpy.verdict import Witness

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Constraint:
    """A constraint for a fusion: its beliefs, and in `states` mode the full state."""

    beliefs: BeliefSet
    state: Optional[TotalPreorder] = None


def constraint_list(tables: ConstraintTables) -> List[Constraint]:
    return [Constraint(tables.beliefs(c), tables.state(c)) for c in range(tables.count)]


def result(op, profile: Profile, constraint: Constraint) -> BeliefSet:
    if constraint.state is not None:
        return beliefs(op.apply(profile, constraint.state))
    return op.result_beliefs(profile, constraint.beliefs)


def member_results(op, profile: Profile, constraint: Constraint) -> List[BeliefSet]:
    return [result(op, Profile.single(agent, state), constraint) for agent, state in profile.items()]


def single_assignments(op, profile: Profile) -> List[TotalPreorder]:
    return [op.assign(Profile.single(agent, state)) for agent, state in profile.items()]


def _fields(*constraints: Constraint) -> Dict[str, tuple]:
    states = tuple(c.state for c in constraints)
    return {
        "constraints": tuple(c.beliefs for c in constraints),
        "constraint_states": states if all(s is not None for s in states) else (),
    }


def _constraint(witness: Witness, i: int) -> Constraint:
    state = witness.constraint_states[i] if i < len(witness.constraint_states) else None
    return Constraint(witness.constraints[i], state)


def ordered_pairs(world_count: int) -> Iterator[Tuple[WorldIndex, WorldIndex]]:
    for w in range(world_count):
        for w2 in range(world_count):
            if w != w2:
                yield w, w2


def _meet_of_beliefs(profile: Profile) -> BeliefSet:
    return conjunction_of([beliefs(s) for s in profile.states], profile.world_count)


def _partition(society: Society, number: int) -> Tuple[Society, Society]:
    for i, halves in enumerate(two_partitions(society)):
        if i == number:
            return halves
    raise ValueError(f"{society} has no partition number {number}")


# grid hit -> Witness for one operator at one scope
class Explainer:
    def __init__(self, op, scope: CheckScope):
        self.op = op
        self.scope = scope
        self.ctx: GridContext = context_of(scope)
        self.constraints = constraint_list(self.ctx.constraints)

    def profile(self, society: Society, index: int) -> Profile:
        return profile_at(society, self.ctx.space.states, index)

    def explain(self, pid: PostulateId, society: Society, hit: Hit) -> Witness:
        match pid:
            case PostulateId.D:
                witness = self._dictator(society, hit)
            case PostulateId.SEM_D:
                witness = self._strict_dictator(society, hit)
            case PostulateId.I:
                witness = self._independence(society, hit)
            case PostulateId.SEM_IND:
                witness = self._pair_independence(society, hit)
            case PostulateId.P:
                witness = self._pareto(society, hit)
            case _:
                # hits keep the profile, and the partition for partition postulates
                profile = self.profile(society, hit[0])
                partition = _partition(society, hit[1]) if len(hit) > 1 else None
                witness = self._first_violation(pid, profile, partition)
        if witness is None or not replay(self.op, witness):
            raise AssertionError(f"{self.op.name}/{pid.label}: hit {hit} in {society} does not replay as a violation")
        return witness

    def _first_violation(self, pid: PostulateId, profile: Profile,
                         partition: Optional[Tuple[Society, Society]]) -> Optional[Witness]:
        if pid.is_semantic:
            return self._semantic(pid, profile, partition)
        if pid in (PostulateId.ESF3, PostulateId.ESF4):
            return self._narrowing(pid, profile)
        # fixed constraint order, so the same hit always explains the same way
        for constraint in self.constraints:
            candidate = Witness(pid.name, profile.society, (profile,), partition, **_fields(constraint))
            if replay(self.op, candidate):
                return _annotated(self.op, candidate)
        return None

    def _narrowing(self, pid: PostulateId, profile: Profile) -> Optional[Witness]:
        # E' only enters through its beliefs
        first_of_mask: Dict[int, Constraint] = {}
        for c in self.constraints:
            first_of_mask.setdefault(c.beliefs.mask, c)
        for narrowed in self.constraints:
            for extra in first_of_mask.values():
                meet = narrowed.beliefs & extra.beliefs
                if not meet.consistent:
                    continue
                for target in self.constraints:
                    if target.beliefs != meet:
                        continue
                    candidate = Witness(pid.name, profile.society, (profile,), **_fields(target, narrowed, extra))
                    if replay(self.op, candidate):
                        return _annotated(self.op, candidate)
        return None

    def _semantic(self, pid: PostulateId, profile: Profile,
                  partition: Optional[Tuple[Society, Society]]) -> Optional[Witness]:
        if pid == PostulateId.P2:
            return _annotated(self.op, Witness(pid.name, profile.society, (profile,)))
        for pair in ordered_pairs(profile.world_count):
            candidate = Witness(pid.name, profile.society, (profile,), partition, worlds=pair)
            if replay(self.op, candidate):
                return candidate
        return None

    def _pareto(self, society: Society, hit: Hit) -> Witness:
        # E' is the first world the group keeps and no member does
        profile = self.profile(society, hit[0])
        constraint = self.constraints[hit[1]]
        union = disjunction_of(member_results(self.op, profile, constraint), profile.world_count)
        outside = result(self.op, profile, constraint) & ~union
        excluded = BeliefSet.from_worlds((min(outside.worlds()),), profile.world_count)
        states = (constraint.state,) if constraint.state is not None else ()
        return _annotated(self.op, Witness(PostulateId.P.name, society, (profile,),
                                           constraints=(constraint.beliefs, excluded), constraint_states=states))

    def _independence(self, society: Society, hit: Hit) -> Witness:
        # the first profile fixes the value the second one contradicts
        second, slot, first = hit
        constraint = self.constraints[slot]
        profiles = (self.profile(society, first), self.profile(society, second))
        return _annotated(self.op, Witness(PostulateId.I.name, society, profiles, **_fields(constraint)))

    def _pair_independence(self, society: Society, hit: Hit) -> Witness:
        second, slot, first = hit
        profiles = (self.profile(society, first), self.profile(society, second))
        return Witness(PostulateId.SEM_IND.name, society, profiles, worlds=self.ctx.space.pairs[slot])

    def _dictator(self, society: Society, hit: Hit) -> Witness:
        profiles, constraints = [], []
        for position, index in enumerate(hit):
            profile = self.profile(society, index)
            for constraint in self.constraints:
                group = result(self.op, profile, constraint)
                if not group.entails(member_results(self.op, profile, constraint)[position]):
                    profiles.append(profile)
                    constraints.append(constraint)
                    break
            else:
                raise AssertionError(f"no constraint refutes member {society.members[position]} on {profile}")
        return Witness(PostulateId.D.name, society, tuple(profiles), **_fields(*constraints), values=society.members)

    def _strict_dictator(self, society: Society, hit: Hit) -> Witness:
        profiles, worlds = [], []
        for position, index in enumerate(hit):
            profile = self.profile(society, index)
            group = self.op.assign(profile)
            single = single_assignments(self.op, profile)[position]
            # the pair this member ranks strictly and the group does not
            pair = next(p for p in ordered_pairs(profile.world_count)
                        if single.strictly(*p) and not group.strictly(*p))
            profiles.append(profile)
            worlds.extend(pair)
        return Witness(PostulateId.SEM_D.name, society, tuple(profiles), worlds=tuple(worlds), values=society.members)


def _annotated(op, witness: Witness) -> Witness:
    # adds the intermediate belief sets to a syntactic witness
    labelled: List[Tuple[str, BeliefSet]] = []
    constraint = _constraint(witness, 0)
    profile = witness.profiles[0]
    if witness.partition is not None:
        left, right = witness.partition
        labelled.append((f"R({left})", result(op, restrict_profile(profile, left), constraint)))
        labelled.append((f"R({right})", result(op, restrict_profile(profile, right), constraint)))
    if witness.postulate in (PostulateId.ESF3.name, PostulateId.ESF4.name):
        labelled.append(("R(E')", result(op, profile, _constraint(witness, 1))))
    if witness.postulate == PostulateId.P2.name:
        labelled.append(("B(E_i) meet", _meet_of_beliefs(profile)))
        labelled.append(("max", op.assign(profile).beliefs))
        return Witness(witness.postulate, witness.society, witness.profiles, beliefs=tuple(labelled))
    for agent, single in zip(profile.society, member_results(op, profile, constraint)):
        labelled.append((f"R({agent})", single))
    for i, p in enumerate(witness.profiles):
        labelled.append(("R(N)" if i == 0 else f"R'(N#{i})", result(op, p, _constraint(witness, 0))))
    return Witness(witness.postulate, witness.society, witness.profiles, witness.partition, witness.constraints,
                   witness.constraint_states, witness.worlds, tuple(labelled), witness.values, witness.note)


def replay(op, witness: Witness) -> bool:
    """True iff the witness still is a violation of its postulate."""
    name = witness.postulate
    profiles = witness.profiles
    match name:
        case "ESF1":
            r = result(op, profiles[0], _constraint(witness, 0))
            return not r.consistent or not r.entails(witness.constraints[0])
        case "ESF2":
            same_input = equivalent(profiles[0], profiles[1]) and witness.constraints[0] == witness.constraints[1]
            return same_input and (result(op, profiles[0], _constraint(witness, 0))
                                   != result(op, profiles[1], _constraint(witness, 1)))
        case "ESF3" | "ESF4":
            whole, narrowed, extra = witness.constraints
            if whole != narrowed & extra:
                return False
            direct = result(op, profiles[0], _constraint(witness, 0))
            combined = result(op, profiles[0], _constraint(witness, 1)) & extra
            if name == "ESF3":
                return not combined.entails(direct)
            return combined.consistent and not direct.entails(combined)
        case "ESF5":
            first, second = profiles
            if first.states[0] == second.states[0]:
                return False
            return all(op.result_beliefs(first, c) == op.result_beliefs(second, c)
                       for c in nonempty_belief_sets(first.world_count))
        case "P1":
            first, second = profiles
            return first.states[0] != second.states[0] and op.assign(first) == op.assign(second)
        case "ESF6":
            meet = _meet_of_beliefs(profiles[0]) & witness.constraints[0]
            return meet.consistent and result(op, profiles[0], _constraint(witness, 0)) != meet
        case "ESF7" | "ESF8" | "ESF8W":
            return _replay_partition(op, witness)
        case "U":
            profile = profiles[0]
            if len(set(profile.states)) != 1:
                return False
            constraint = _constraint(witness, 0)
            return result(op, profile, constraint) != member_results(op, profile, constraint)[0]
        case "SEM_U":
            profile = profiles[0]
            return len(set(profile.states)) == 1 and op.assign(profile) != single_assignments(op, profile)[0]
        case "P":
            profile = profiles[0]
            constraint = _constraint(witness, 0)
            excluded = witness.constraints[1]
            singles = member_results(op, profile, constraint)
            premise = (conjunction_of(singles, profile.world_count).consistent
                       and not any(r.consistent_with(excluded) for r in singles))
            return premise and result(op, profile, constraint).consistent_with(excluded)
        case "I":
            constraint = _constraint(witness, 0)
            first, second = profiles
            if first.society != second.society:
                return False
            if member_results(op, first, constraint) != member_results(op, second, constraint):
                return False
            return result(op, first, constraint) != result(op, second, constraint)
        case "D":
            if len(profiles) != witness.society.size:
                return False
            for j, profile in enumerate(profiles):
                constraint = _constraint(witness, j)
                if result(op, profile, constraint).entails(member_results(op, profile, constraint)[j]):
                    return False
            return True
        case "SD":
            agent, code, world_count = witness.values
            return not any(triple_shape(op.assign(Profile.single(agent, s)), *witness.worlds) == code
                           for s in state_space(world_count).states)
        case "PROP5":
            return not any(_richness_holds(op, profiles[0], s, witness.worlds, witness.values[0])
                           for s in state_space(profiles[0].world_count).states)
        case "MAX":
            state = profiles[0].states[0]
            return op.assign(profiles[0]).top != state.top
        case "P2":
            meet = _meet_of_beliefs(profiles[0])
            return meet.consistent and op.assign(profiles[0]).beliefs != meet
        case "P3" | "P4" | "P4W":
            return _replay_semantic_partition(op, witness)
        case "SEM_P":
            w, w2 = witness.worlds
            profile = profiles[0]
            singles = single_assignments(op, profile)
            return all(s.strictly(w, w2) for s in singles) and not op.assign(profile).strictly(w, w2)
        case "SEM_IND":
            a, b = witness.worlds
            first, second = profiles
            if first.society != second.society:
                return False
            same = all(restrict(s, (a, b)) == restrict(t, (a, b))
                       for s, t in zip(single_assignments(op, first), single_assignments(op, second)))
            return same and restrict(op.assign(first), (a, b)) != restrict(op.assign(second), (a, b))
        case "SEM_D":
            refuted = 0
            for j, profile in enumerate(profiles):
                w, w2 = witness.worlds[2 * j], witness.worlds[2 * j + 1]
                single = single_assignments(op, profile)[j]
                refuted += single.strictly(w, w2) and not op.assign(profile).strictly(w, w2)
            return refuted == witness.society.size == len(profiles)
    raise ValueError(f"No replay for witnesses of '{name}'")


def _richness_holds(op, given: Profile, candidate: TotalPreorder, worlds: Tuple[WorldIndex, ...], claim: int) -> bool:
    w, w1, w2 = worlds
    n = given.world_count
    agent = given.society.members[0]

    def kept(profile: Profile, *pair: WorldIndex) -> BeliefSet:
        return op.result_beliefs(profile, BeliefSet.from_worlds(pair, n))

    trial = Profile.single(agent, candidate)
    only_w = BeliefSet.from_worlds((w,), n)
    if kept(trial, w, w1) != only_w:
        return False
    if claim == 0:
        return kept(trial, w, w2) == only_w and kept(trial, w1, w2) == kept(given, w1, w2)
    return kept(trial, w1, w2) == BeliefSet.from_worlds((w2,), n) and kept(trial, w, w2) == kept(given, w, w2)


def _replay_partition(op, witness: Witness) -> bool:
    profile = witness.profiles[0]
    left, right = witness.partition
    constraint = _constraint(witness, 0)
    r1 = result(op, restrict_profile(profile, left), constraint)
    r2 = result(op, restrict_profile(profile, right), constraint)
    whole = result(op, profile, constraint)
    both = r1 & r2
    match witness.postulate:
        case "ESF7":
            return not both.entails(whole)
        case "ESF8":
            return both.consistent and not whole.entails(both)
        case "ESF8W":
            return both.consistent and not whole.entails(r1 | r2)
    raise AssertionError(witness.postulate)


def _replay_semantic_partition(op, witness: Witness) -> bool:
    profile = witness.profiles[0]
    left, right = witness.partition
    w, w2 = witness.worlds
    first = op.assign(restrict_profile(profile, left))
    second = op.assign(restrict_profile(profile, right))
    whole = op.assign(profile)
    match witness.postulate:
        case "P3":
            return first.at_least(w, w2) and second.at_least(w, w2) and not whole.at_least(w, w2)
        case "P4":
            mixed = ((first.at_least(w, w2) and second.strictly(w, w2))
                     or (first.strictly(w, w2) and second.at_least(w, w2)))
            return mixed and not whole.strictly(w, w2)
        case "P4W":
            return first.strictly(w, w2) and second.strictly(w, w2) and not whole.strictly(w, w2)
    raise AssertionError(witness.postulate)


def projective_esf6_instance() -> Witness:
    """
    Three agents believing {00}, {00} and {00,01} under the constraint ⊤. The beliefs meet in {00}, the projective
    group keeps the last agent's {00,01}, so ESF6 fails for ∇^π.
    """
    varset = VarSet()
    n = varset.world_count
    firm = canonical_state(BeliefSet.from_worlds((varset.world("00"),), n))
    loose = canonical_state(BeliefSet.from_worlds((varset.world("00"), varset.world("01")), n))
    profile = Profile(Society.of(1, 2, 3), (firm, firm, loose))
    return Witness(PostulateId.ESF6.name, profile.society, (profile,), constraints=(BeliefSet.everything(n),),
                   note="three-agent profile with beliefs {00}, {00}, {00,01}")
