"""
Assignments: profile -> group total preorder.

Each kind has two evaluation paths. `assign` works on one Profile through the pure preorder algebra;
`image_indices` works on whole grids of profiles given as broadcastable arrays of state indices, one array
per agent in society order, and returns the state index of every image. The checker only uses the second
path and replays witnesses through the first.
"""

import logging
from enum import IntEnum
from typing import Optional, Sequence

import numpy as np

from esfpy.operators.aggregation import MAX, SUM, AggregationFunction
from esfpy.preorders.preorder import TotalPreorder, fixed_linear_order, lex
from esfpy.preorders.space import STATE_DTYPE, StateSpace
from esfpy.societies.profile import Profile
from esfpy.utils.registry import Associator

logger = logging.getLogger(__name__)


class AssignmentKind(IntEnum):
    Sum = 0
    Max = 1
    Projective = 2
    LinProjective = 3
    QuasiLinProjective = 4
    SigmaPseudoProjective = 5


associate_assignments = Associator[AssignmentKind, type["Assignment"]]()


class Assignment:
    kind: AssignmentKind
    tiebreak: Optional[TotalPreorder]
    structure_preserving: bool = True

    def __init__(self, kind: AssignmentKind, tiebreak: Optional[TotalPreorder] = None):
        self.kind = kind
        self.tiebreak = tiebreak
        if tiebreak is not None and not tiebreak.is_linear:
            raise ValueError(f"Tiebreak must be a linear order, got '{tiebreak}'")

    def assign(self, profile: Profile) -> TotalPreorder:
        raise NotImplementedError

    def image_indices(self, space: StateSpace, states: Sequence[np.ndarray]) -> np.ndarray:
        raise NotImplementedError

    def _tiebreak_for(self, world_count: int) -> TotalPreorder:
        tiebreak = self.tiebreak or fixed_linear_order(world_count)
        if tiebreak.world_count != world_count:
            raise ValueError(f"Tiebreak over {tiebreak.world_count} worlds, profile over {world_count}")
        return tiebreak

    def __repr__(self):
        return f"{type(self).__name__}({self.kind.name})"


def _broadcast(states: Sequence[np.ndarray]) -> np.ndarray:
    assert len(states) >= 1, "an assignment needs at least one agent"
    return np.broadcast_arrays(*[np.asarray(s) for s in states])[-1]


@associate_assignments(AssignmentKind.Sum, AssignmentKind.Max)
class AggregationAssignment(Assignment):
    """w >= w' iff F(distances of w) <= F(distances of w')."""

    @property
    def aggregation(self) -> AggregationFunction:
        return SUM if self.kind == AssignmentKind.Sum else MAX

    def assign(self, profile: Profile) -> TotalPreorder:
        costs = [self.aggregation([tp.distance_of(w) for tp in profile.states]) for w in range(profile.world_count)]
        return TotalPreorder.from_scores(costs, higher_is_better=False)

    def image_indices(self, space: StateSpace, states: Sequence[np.ndarray]) -> np.ndarray:
        arrays = np.broadcast_arrays(*[np.asarray(s) for s in states])
        stacked = np.stack([space.distances[a] for a in arrays]).astype(np.int64)
        return space.index_of_scores(-self.aggregation.over(stacked))


# the state of d_N
@associate_assignments(AssignmentKind.Projective)
class ProjectiveAssignment(Assignment):
    def assign(self, profile: Profile) -> TotalPreorder:
        return profile.states[-1]

    def image_indices(self, space: StateSpace, states: Sequence[np.ndarray]) -> np.ndarray:
        return _broadcast(states).astype(STATE_DTYPE)


# lex(state of d_N, tiebreak), on every profile including singletons
@associate_assignments(AssignmentKind.LinProjective)
class LinearizedProjectiveAssignment(Assignment):
    structure_preserving = False

    def assign(self, profile: Profile) -> TotalPreorder:
        return lex(profile.states[-1], self._tiebreak_for(profile.world_count))

    def image_indices(self, space: StateSpace, states: Sequence[np.ndarray]) -> np.ndarray:
        tiebreak = space.index_of(self._tiebreak_for(space.world_count))
        return space.lex_table[_broadcast(states), tiebreak]


# the state itself on singletons, lex(state of d_N, tiebreak) otherwise
@associate_assignments(AssignmentKind.QuasiLinProjective)
class QuasiLinearizedProjectiveAssignment(Assignment):
    def assign(self, profile: Profile) -> TotalPreorder:
        if len(profile) == 1:
            return profile.states[0]
        return lex(profile.states[-1], self._tiebreak_for(profile.world_count))

    def image_indices(self, space: StateSpace, states: Sequence[np.ndarray]) -> np.ndarray:
        if len(states) == 1:
            return np.asarray(states[0]).astype(STATE_DTYPE)
        tiebreak = space.index_of(self._tiebreak_for(space.world_count))
        return space.lex_table[_broadcast(states), tiebreak]


# lex(state of d_N, sum image of the whole profile)
@associate_assignments(AssignmentKind.SigmaPseudoProjective)
class SigmaPseudoProjectiveAssignment(Assignment):
    def assign(self, profile: Profile) -> TotalPreorder:
        summed = AggregationAssignment(AssignmentKind.Sum).assign(profile)
        return lex(profile.states[-1], summed)

    def image_indices(self, space: StateSpace, states: Sequence[np.ndarray]) -> np.ndarray:
        summed = AggregationAssignment(AssignmentKind.Sum).image_indices(space, states)
        return space.lex_table[_broadcast(states), summed]


def make_assignment(kind: AssignmentKind, tiebreak: Optional[TotalPreorder] = None) -> Assignment:
    return associate_assignments.get(kind)(kind, tiebreak)
