"""
Recovers the assignment behind a black-box belief-level fusion: w >= w' iff w is among the merged beliefs
under the two-model constraint {w, w'}.
"""

import logging
from itertools import permutations
from typing import Callable, List, Optional, Tuple

from esfpy.logic.worlds import BeliefSet, nonempty_belief_sets
from esfpy.preorders.preorder import TotalPreorder, max_over
from esfpy.societies.profile import Profile
from esfpy.types import WorldIndex

logger = logging.getLogger(__name__)

BlackBox = Callable[[Profile, BeliefSet], BeliefSet]


class RecoveryError(ValueError):
    def __init__(self, message: str, worlds: Tuple[WorldIndex, ...], constraint: Optional[BeliefSet] = None):
        self.worlds = worlds
        self.constraint = constraint
        super().__init__(message)


def recovered_relation(black_box: BlackBox, profile: Profile) -> List[List[bool]]:
    n = profile.world_count
    at_least = [[w == w2 for w2 in range(n)] for w in range(n)]
    for w in range(n):
        for w2 in range(w + 1, n):
            result = black_box(profile, BeliefSet.from_worlds((w, w2), n))
            at_least[w][w2] = w in result
            at_least[w2][w] = w2 in result
    return at_least


def _check_total_preorder(at_least: List[List[bool]]):
    n = len(at_least)
    for w in range(n):
        for w2 in range(w + 1, n):
            if not (at_least[w][w2] or at_least[w2][w]):
                raise RecoveryError(f"Recovered relation is not total on worlds ({w}, {w2})", (w, w2))
    for w, w2, w3 in permutations(range(n), 3):
        if at_least[w][w2] and at_least[w2][w3] and not at_least[w][w3]:
            raise RecoveryError(f"Recovered relation is not transitive on worlds ({w}, {w2}, {w3})", (w, w2, w3))


def verify_b_rep(black_box: BlackBox, profile: Profile, preorder: TotalPreorder) -> Optional[BeliefSet]:
    # the first consistent constraint whose black-box result differs from max_over(preorder, ·), if any
    for constraint in nonempty_belief_sets(profile.world_count):
        if black_box(profile, constraint) != max_over(preorder, constraint):
            return constraint
    return None


def recover_assignment(black_box: BlackBox, profile: Profile, verify: bool = True) -> TotalPreorder:
    at_least = recovered_relation(black_box, profile)
    _check_total_preorder(at_least)
    # Under a total preorder the number of worlds a world dominates is a score for it.
    scores = [sum(row) for row in at_least]
    recovered = TotalPreorder.from_scores(scores)
    if verify:
        mismatch = verify_b_rep(black_box, profile, recovered)
        if mismatch is not None:
            raise RecoveryError(f"Black box disagrees with the recovered preorder under constraint {mismatch.mask:#x}",
                                tuple(mismatch.worlds()), mismatch)
    logger.debug("recovered %s for %s", recovered, profile)
    return recovered
