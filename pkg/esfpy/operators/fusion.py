import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from esfpy.logic.worlds import BeliefSet
from esfpy.operators.assignments import Assignment, AssignmentKind, make_assignment
from esfpy.preorders.preorder import TotalPreorder, lex, max_over
from esfpy.preorders.space import StateSpace, state_space
from esfpy.societies.profile import Profile
from esfpy.verdict import Verdict, Witness

logger = logging.getLogger(__name__)

OPERATOR_KINDS: Dict[str, AssignmentKind] = {
    "sum": AssignmentKind.Sum,
    "max": AssignmentKind.Max,
    "proj": AssignmentKind.Projective,
    "linproj": AssignmentKind.LinProjective,
    "qlinproj": AssignmentKind.QuasiLinProjective,
    "sigmapproj": AssignmentKind.SigmaPseudoProjective,
}

OPERATOR_LABELS: Dict[str, str] = {
    "sum": "∇^Σ",
    "max": "∇^max",
    "proj": "∇^π",
    "linproj": "∇^π≥",
    "qlinproj": "∇^Qπ≥",
    "sigmapproj": "∇^Σ-Pπ",
}


@dataclass(frozen=True)
class FusionOperator:
    """∇(Φ, E) = lex(E, assignment(Φ))."""

    name: str
    assignment: Assignment

    @property
    def label(self) -> str:
        return OPERATOR_LABELS.get(self.name, self.name)

    def assign(self, profile: Profile) -> TotalPreorder:
        return self.assignment.assign(profile)

    def apply(self, profile: Profile, constraint: TotalPreorder) -> TotalPreorder:
        if constraint.world_count != profile.world_count:
            raise ValueError(f"Constraint over {constraint.world_count} worlds, profile over {profile.world_count}")
        return lex(constraint, self.assign(profile))

    def result_beliefs(self, profile: Profile, constraint_beliefs: BeliefSet) -> BeliefSet:
        # only B(E) matters, so lex(E, .) reduces to max over its models
        if not constraint_beliefs.consistent:
            raise ValueError("The constraint of a fusion must be consistent")
        return max_over(self.assign(profile), constraint_beliefs)

    def image_indices(self, space: StateSpace, states: Sequence[np.ndarray]) -> np.ndarray:
        return self.assignment.image_indices(space, states)

    def __str__(self):
        return self.name


def make_operator(name: str, tiebreak: Optional[TotalPreorder] = None) -> FusionOperator:
    if name not in OPERATOR_KINDS:
        raise ValueError(f"Unknown operator '{name}', known: {', '.join(OPERATOR_KINDS)}")
    return FusionOperator(name, make_assignment(OPERATOR_KINDS[name], tiebreak))


def all_operators(tiebreak: Optional[TotalPreorder] = None) -> List[FusionOperator]:
    return [make_operator(name, tiebreak) for name in OPERATOR_KINDS]


def canonical_state(beliefs: BeliefSet) -> TotalPreorder:
    # E_M: the models of M on top of everything else, a single level when M is everything
    if not beliefs.consistent:
        raise ValueError("E_M needs a consistent belief set")
    if beliefs.is_everything:
        return TotalPreorder.flat(beliefs.world_count)
    return TotalPreorder.from_levels([beliefs.worlds(), (~beliefs).worlds()], beliefs.world_count)


def is_structure_preserving(op: FusionOperator, world_count: int = 4) -> Verdict:
    # whether every singleton profile is mapped to its own state
    space = state_space(world_count)
    states = np.arange(space.size)
    images = op.image_indices(space, [states])
    scope = f"all {space.size} singleton profiles over {world_count} worlds"
    mismatched = np.flatnonzero(images != states)
    if len(mismatched) == 0:
        return Verdict.holds(f"{op.name}/structure", scope)
    first = int(mismatched[0])
    profile = Profile.single(1, space[first])
    return Verdict.fails(f"{op.name}/structure", scope,
                         Witness("structure", profiles=(profile,), note=f"image is {space[int(images[first])]}"))
