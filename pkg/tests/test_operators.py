from itertools import islice

import numpy as np
import pytest

from esfpy.logic import BeliefSet, VarSet, parse_formula
from esfpy.operators import (
    FIRST_PROJECTION,
    MAX,
    SUM,
    OPERATOR_KINDS,
    FusionOperator,
    RecoveryError,
    aggregation_axioms,
    all_operators,
    canonical_state,
    is_structure_preserving,
    make_operator,
    recover_assignment,
    verify_b_rep,
)
from esfpy.preorders import TotalPreorder, fixed_linear_order, parse_preorder, state_space
from esfpy.societies import Profile, Society, enumerate_profiles, parse_profile


@pytest.fixture
def setup_varset() -> VarSet:
    return VarSet()


@pytest.fixture
def setup_trip(setup_varset: VarSet) -> Profile:
    return parse_profile("1: 11 > 10 > 01 > 00\n2: 00 > 11 10 01", setup_varset)


def test_operator_registry():
    assert [op.name for op in all_operators()] == list(OPERATOR_KINDS)
    assert make_operator("sigmapproj").label == "∇^Σ-Pπ"
    with pytest.raises(ValueError):
        make_operator("borda")
    with pytest.raises(ValueError):
        make_operator("linproj", TotalPreorder.flat(4))


def test_sum_and_max_on_trip(setup_trip: Profile, setup_varset: VarSet):
    sum_op, max_op = make_operator("sum"), make_operator("max")
    everything = BeliefSet.everything(4)
    assert sum_op.assign(setup_trip).render(setup_varset) == "11 > 10 > 00 01"
    assert sum_op.result_beliefs(setup_trip, everything) == BeliefSet.from_worlds([3], 4)
    assert max_op.result_beliefs(setup_trip, everything) == BeliefSet.from_worlds([2, 3], 4)
    by_train = parse_formula("q", setup_varset)
    assert sum_op.result_beliefs(setup_trip, by_train) == BeliefSet.from_worlds([3], 4)


def test_sum_under_constraint(setup_varset: VarSet):
    profile = Profile(Society.of(1, 2), (fixed_linear_order(4), TotalPreorder.flat(4)))
    constraint = parse_formula("{00,11}", setup_varset)
    assert make_operator("sum").result_beliefs(profile, constraint) == parse_formula("{11}", setup_varset)


def test_projective_family(setup_trip: Profile, setup_varset: VarSet):
    bob = setup_trip[2]
    assert make_operator("proj").assign(setup_trip) == bob
    assert make_operator("linproj").assign(setup_trip).render(setup_varset) == "00 > 11 > 10 > 01"
    assert make_operator("qlinproj").assign(setup_trip) == make_operator("linproj").assign(setup_trip)
    # Bob's tie broken by the sum ranking
    assert make_operator("sigmapproj").assign(setup_trip).render(setup_varset) == "00 > 11 > 10 > 01"


def test_singletons():
    flat = Profile.single(1, TotalPreorder.flat(4))
    assert make_operator("linproj").assign(flat) == fixed_linear_order(4)
    for name in ("sum", "max", "proj", "qlinproj", "sigmapproj"):
        assert make_operator(name).assign(flat) == TotalPreorder.flat(4)


def test_custom_tiebreak(setup_varset: VarSet):
    tiebreak = parse_preorder("00 > 01 > 10 > 11", setup_varset)
    op = make_operator("linproj", tiebreak)
    assert op.assign(Profile.single(1, TotalPreorder.flat(4))) == tiebreak


def test_apply_is_lex_over_constraint(setup_trip: Profile, setup_varset: VarSet):
    for op in all_operators():
        for mask in range(1, 16):
            constraint = BeliefSet(mask, 4)
            applied = op.apply(setup_trip, canonical_state(constraint))
            assert applied.beliefs == op.result_beliefs(setup_trip, constraint)
    with pytest.raises(ValueError):
        make_operator("sum").result_beliefs(setup_trip, BeliefSet.nothing(4))


def test_structure_preservation():
    for op in all_operators():
        verdict = is_structure_preserving(op)
        assert verdict.satisfied == (op.name != "linproj"), op.name
    witness = is_structure_preserving(make_operator("linproj")).witness
    assert witness.profiles[0].states[0] == TotalPreorder.flat(4)


def test_aggregation_axioms():
    assert aggregation_axioms(SUM).satisfied
    assert aggregation_axioms(MAX).satisfied
    verdict = aggregation_axioms(FIRST_PROJECTION)
    assert verdict.violated
    assert verdict.witness.postulate == "Symmetry"
    assert verdict.detail == "Symmetry, Minimality"


def test_vectorised_images_match_assign():
    space = state_space(4)
    rng = np.random.default_rng(7)
    first, second = rng.integers(space.size, size=200), rng.integers(space.size, size=200)
    for op in all_operators():
        images = op.image_indices(space, [first, second])
        for a, b, img in zip(first, second, images):
            profile = Profile(Society.of(1, 2), (space[int(a)], space[int(b)]))
            assert space[int(img)] == op.assign(profile), op.name


def test_canonical_state():
    assert canonical_state(BeliefSet.from_worlds([0], 4)).levels == (1, 0, 0, 0)
    assert canonical_state(BeliefSet.everything(4)) == TotalPreorder.flat(4)
    with pytest.raises(ValueError):
        canonical_state(BeliefSet.nothing(4))


def recover_all(op: FusionOperator, profiles):
    for profile in profiles:
        assert recover_assignment(op.result_beliefs, profile) == op.assign(profile)


def test_recover_sampled():
    states = state_space(4).states
    for op in all_operators():
        recover_all(op, islice(enumerate_profiles(Society.of(1, 2), states), 0, None, 53))


@pytest.mark.slow
def test_recover_exhaustive():
    states = state_space(4).states
    for op in all_operators():
        recover_all(op, enumerate_profiles(Society.of(1), states))
        recover_all(op, enumerate_profiles(Society.of(1, 2), states))


def test_recover_rejects_non_preorders(setup_trip: Profile):
    with pytest.raises(RecoveryError) as e:
        recover_assignment(lambda p, c: BeliefSet.nothing(4), setup_trip)
    assert e.value.worlds == (0, 1)

    def always_all(profile: Profile, constraint: BeliefSet) -> BeliefSet:
        return BeliefSet.everything(4)

    with pytest.raises(RecoveryError) as e:
        recover_assignment(always_all, setup_trip)
    assert e.value.constraint is not None
    assert recover_assignment(always_all, setup_trip, verify=False) == TotalPreorder.flat(4)


def test_verify_b_rep(setup_trip: Profile):
    op = make_operator("max")
    assert verify_b_rep(op.result_beliefs, setup_trip, op.assign(setup_trip)) is None
    assert verify_b_rep(op.result_beliefs, setup_trip, TotalPreorder.flat(4)) is not None
