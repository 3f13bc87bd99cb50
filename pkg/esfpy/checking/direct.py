"""
Checks that do not fit the slab grid: they look at singleton or unanimous profiles only, or compare profiles
across societies.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from esfpy.checking.grid import GridContext, context_of
from esfpy.checking.replay import Constraint, constraint_list, replay, result
from esfpy.checking.scope import CheckScope
from esfpy.preorders.preorder import TRIPLE_SHAPES
from esfpy.societies.profile import Profile, Society, subsocieties
from esfpy.verdict import Witness

logger = logging.getLogger(__name__)


def singleton_images(op, ctx: GridContext) -> np.ndarray:
    return op.image_indices(ctx.space, [np.arange(ctx.space.size)])


def _agents(scope: CheckScope) -> Tuple[int, int]:
    members = scope.universe.members
    return members[0], members[1 % len(members)]


def _first_differing(op, first: Profile, second: Profile, constraints: List[Constraint]) -> Optional[Constraint]:
    for constraint in constraints:
        if result(op, first, constraint) != result(op, second, constraint):
            return constraint
    return None


def find_label_dependence(op, scope: CheckScope) -> Tuple[Optional[Witness], str]:
    """
    ESF2. Equal-belief constraints must give equal results on every reachable image, and equivalent profiles
    over differently labelled societies must give equal results. Labels are compared exhaustively up to two
    agents and on seeded samples beyond.
    """
    ctx = context_of(scope)
    constraints = constraint_list(ctx.constraints)
    witness = _constraint_dependence(op, scope, ctx, constraints)
    if witness is not None:
        return witness, ""
    rng = np.random.default_rng(scope.seed)
    notes = []
    for size in range(1, scope.verify_society_max + 1):
        societies = subsocieties(scope.universe, size)
        if len(societies) < 2:
            continue
        total = ctx.space.size ** size
        if size <= 2 or total <= scope.sample_budget:
            # every profile, one base-S digit per agent
            rows = (np.arange(total)[:, None] // ctx.space.size ** np.arange(size - 1, -1, -1)) % ctx.space.size
            notes.append(f"all {total} profiles of {size} agents")
        else:
            rows = rng.integers(0, ctx.space.size, size=(scope.sample_budget, size))
            notes.append(f"{scope.sample_budget} sampled profiles of {size} agents")
        reference = societies[0]
        for row in rows:
            states = tuple(ctx.space[int(s)] for s in row)
            base = Profile(reference, states)
            expected = op.assign(base)
            for other in societies[1:]:
                moved = Profile(other, states)
                if op.assign(moved) == expected:
                    continue
                # different assignments can still agree under every constraint
                constraint = _first_differing(op, base, moved, constraints)
                if constraint is None:
                    continue
                found = Witness("ESF2", other, (base, moved), constraints=(constraint.beliefs,) * 2,
                                constraint_states=(constraint.state,) * 2 if constraint.state is not None else ())
                assert replay(op, found), f"label dependence witness does not replay: {found}"
                return found, ""
    return None, "relabelling checked on " + ", ".join(notes)


def _constraint_dependence(op, scope: CheckScope, ctx: GridContext,
                           constraints: List[Constraint]) -> Optional[Witness]:
    by_mask: Dict[int, List[int]] = {}
    for c, constraint in enumerate(constraints):
        by_mask.setdefault(constraint.beliefs.mask, []).append(c)
    results = ctx.constraints.results
    # images on which two constraints with equal beliefs give different results
    bad = np.zeros(ctx.space.size, dtype=bool)
    for group in by_mask.values():
        for c in group[1:]:
            bad |= results[:, c] != results[:, group[0]]
    if not bad.any():
        return None
    for society in scope.societies():
        images = op.image_indices(ctx.space, _grid(ctx, society.size)).ravel()
        hits = np.flatnonzero(bad[images])
        if len(hits) == 0:
            continue
        profile = _profile_of_row(ctx, society, int(hits[0]))
        for members in by_mask.values():
            for c in members[1:]:
                first, second = constraints[members[0]], constraints[c]
                if result(op, profile, first) != result(op, profile, second):
                    found = Witness("ESF2", society, (profile, profile), constraints=(first.beliefs, second.beliefs),
                                    constraint_states=(first.state, second.state))
                    assert replay(op, found), f"constraint dependence witness does not replay: {found}"
                    return found
    return None


def _grid(ctx: GridContext, size: int) -> List[np.ndarray]:
    count = ctx.space.size
    return [np.arange(count).reshape([count if a == axis else 1 for a in range(size)]) for axis in range(size)]


def _profile_of_row(ctx: GridContext, society: Society, index: int) -> Profile:
    digits = np.unravel_index(index, (ctx.space.size,) * society.size)
    return Profile(society, tuple(ctx.space[int(d)] for d in digits))


def find_collision(op, scope: CheckScope, semantic: bool) -> Optional[Witness]:
    # two states with the same singleton behaviour: results under every constraint, or the images themselves
    ctx = context_of(scope)
    singles = singleton_images(op, ctx)
    keys = singles if semantic else [ctx.constraints.results[img].tobytes() for img in singles]
    seen: Dict[object, int] = {}
    first_agent, second_agent = _agents(scope)
    for s, key in enumerate(keys):
        key = int(key) if semantic else key
        if key in seen:
            profiles = (Profile.single(first_agent, ctx.space[seen[key]]), Profile.single(second_agent, ctx.space[s]))
            found = Witness("P1" if semantic else "ESF5", profiles=profiles,
                            note=f"both states map to {ctx.space[int(singles[s])]}")
            assert replay(op, found), f"collision witness does not replay: {found}"
            return found
        seen[key] = s
    return None


def find_maximality_failure(op, scope: CheckScope) -> Optional[Witness]:
    ctx = context_of(scope)
    singles = singleton_images(op, ctx)
    off = np.flatnonzero(ctx.space.tops[singles] != ctx.space.tops)
    if len(off) == 0:
        return None
    state = ctx.space[int(off[0])]
    found = Witness("MAX", profiles=(Profile.single(scope.universe.members[0], state),),
                    beliefs=(("B(E_i)", state.beliefs), ("max", ctx.space[int(singles[off[0]])].beliefs)))
    assert replay(op, found), f"maximality witness does not replay: {found}"
    return found


def find_missing_shape(op, scope: CheckScope) -> Optional[Witness]:
    # every triple restriction shape is reached by some singleton image; one agent stands for all
    ctx = context_of(scope)
    shapes = ctx.space.triple_shapes[singleton_images(op, ctx)]
    agent = scope.universe.members[0]
    for t, triple in enumerate(ctx.space.triples):
        reached = set(int(code) for code in np.unique(shapes[:, t]))
        for code in range(len(TRIPLE_SHAPES)):
            if code not in reached:
                found = Witness("SD", worlds=triple, values=(agent, code, ctx.space.world_count),
                                note=f"{len(reached)} of {len(TRIPLE_SHAPES)} shapes reached")
                assert replay(op, found), f"standard domain witness does not replay: {found}"
                return found
    return None


def find_unanimity_failure(op, scope: CheckScope, semantic: bool) -> Optional[Witness]:
    ctx = context_of(scope)
    singles = singleton_images(op, ctx)
    states = np.arange(ctx.space.size)
    constraints = constraint_list(ctx.constraints)
    results = ctx.constraints.results
    for society in scope.societies():
        images = op.image_indices(ctx.space, [states] * society.size)
        if semantic:
            off = images != singles
        else:
            off = (results[images] != results[singles]).any(axis=1)
        hits = np.flatnonzero(off)
        if len(hits) == 0:
            continue
        state = ctx.space[int(hits[0])]
        profile = Profile(society, (state,) * society.size)
        if semantic:
            found = Witness("SEM_U", society, (profile,))
        else:
            alone = Profile.single(society.members[0], state)
            constraint = _first_differing(op, profile, alone, constraints)
            found = Witness("U", society, (profile,), constraints=(constraint.beliefs,),
                            constraint_states=(constraint.state,) if constraint.state is not None else (),
                            beliefs=(("R(N)", result(op, profile, constraint)),
                                     (f"R({society.members[0]})", result(op, alone, constraint))))
        assert replay(op, found), f"unanimity witness does not replay: {found}"
        return found
    return None


def _pair_mask(*worlds: int) -> int:
    return sum(1 << w for w in worlds)


def find_richness_failure(op, scope: CheckScope) -> Tuple[Optional[Witness], int]:
    """
    The two existence claims standard domain entails, for every singleton state E_i and distinct ordered
    triple (w, w', w''):
      (i)  some E_j keeps {w} from {w,w'} and from {w,w''}, and agrees with E_i on {w',w''};
      (ii) some E_k keeps {w} from {w,w'}, {w''} from {w',w''}, and agrees with E_i on {w,w''}.
    Returns the first failure, or None and the number of instances checked.
    """
    ctx = context_of(scope)
    best = ctx.space.best[singleton_images(op, ctx)]
    n = ctx.space.world_count
    checked = 0
    agent = scope.universe.members[0]
    for w in range(n):
        for w1 in range(n):
            for w2 in range(n):
                if len({w, w1, w2}) < 3:
                    continue
                a, b, c = _pair_mask(w, w1), _pair_mask(w, w2), _pair_mask(w1, w2)
                first_ok = (best[:, a] == 1 << w) & (best[:, b] == 1 << w)
                second_ok = (best[:, a] == 1 << w) & (best[:, c] == 1 << w2)
                # claim (i) needs some state with first_ok and a matching {w',w''} result, per E_i
                reach_first = set(int(v) for v in np.unique(best[first_ok, c]))
                reach_second = set(int(v) for v in np.unique(best[second_ok, b]))
                for s in range(ctx.space.size):
                    checked += 1
                    for claim, reached, mask in (("i", reach_first, c), ("ii", reach_second, b)):
                        if int(best[s, mask]) not in reached:
                            found = Witness("PROP5", profiles=(Profile.single(agent, ctx.space[s]),),
                                            worlds=(w, w1, w2), values=(0 if claim == "i" else 1,),
                                            note=f"claim ({claim}) has no witness state")
                            assert replay(op, found), f"richness witness does not replay: {found}"
                            return found, checked
    return None, checked


def richness_example(op, scope: CheckScope, state_index: int, worlds: Tuple[int, int, int]) -> Tuple[int, int]:
    # the first singleton states witnessing claims (i) and (ii) for one instance
    ctx = context_of(scope)
    best = ctx.space.best[singleton_images(op, ctx)]
    w, w1, w2 = worlds
    a, b, c = _pair_mask(w, w1), _pair_mask(w, w2), _pair_mask(w1, w2)
    first = np.flatnonzero((best[:, a] == 1 << w) & (best[:, b] == 1 << w) & (best[:, c] == best[state_index, c]))
    second = np.flatnonzero((best[:, a] == 1 << w) & (best[:, c] == 1 << w2) & (best[:, b] == best[state_index, b]))
    return int(first[0]), int(second[0])

