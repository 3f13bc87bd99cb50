from functools import cache
from itertools import islice

import pytest

from esfpy.logic import VarSet
from esfpy.preorders import TotalPreorder, fixed_linear_order, state_space
from esfpy.societies import (
    Profile,
    ProfileFormatError,
    Society,
    count_profiles,
    enumerate_profiles,
    equivalent,
    format_profile,
    join,
    parse_profile,
    profile_at,
    restrict,
    societies_up_to,
    two_partitions,
)


@cache
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@pytest.fixture
def setup_states() -> list[TotalPreorder]:
    return state_space(4).states


@pytest.fixture
def setup_profile() -> Profile:
    flat = TotalPreorder.flat(4)
    chain = fixed_linear_order(4)
    two = TotalPreorder.from_levels([{0}, {1, 2, 3}], 4)
    return Profile.from_mapping({1: chain, 4: flat, 7: two})


def test_society_construction():
    assert Society.of(3, 1, 3).members == (1, 3)
    assert Society.universe(3).members == (1, 2, 3)
    assert Society.of(2, 5).dictator_slot == 5
    for bad in ((), (0,), (2, 1), (1, 1)):
        with pytest.raises(ValueError):
            Society(bad)


def test_societies_up_to():
    found = societies_up_to(Society.universe(4), 2)
    assert len(found) == 4 + 6
    assert found[0] == Society.of(1) and found[-1] == Society.of(3, 4)


def test_profile_access(setup_profile: Profile):
    assert setup_profile.society == Society.of(1, 4, 7)
    assert setup_profile[4] == TotalPreorder.flat(4)
    assert [a for a, _ in setup_profile.items()] == [1, 4, 7]
    with pytest.raises(ValueError):
        Profile(Society.of(1, 2), (TotalPreorder.flat(4),))
    with pytest.raises(ValueError):
        Profile(Society.of(1, 2), (TotalPreorder.flat(4), TotalPreorder.flat(8)))


def test_join_restrict_reassemble(setup_states: list[TotalPreorder]):
    universe = Society.universe(3)
    for p in islice(enumerate_profiles(universe, setup_states), 0, None, 997):
        for left, right in two_partitions(universe):
            assert join(restrict(p, left), restrict(p, right)) == p


def test_join_rejects_overlap(setup_profile: Profile):
    with pytest.raises(ValueError):
        join(setup_profile, Profile.single(4, TotalPreorder.flat(4)))
    with pytest.raises(ValueError):
        restrict(setup_profile, Society.of(2))


def test_equivalent(setup_profile: Profile):
    relabelled = Profile(Society.of(2, 3, 9), setup_profile.states)
    assert equivalent(setup_profile, relabelled)
    swapped = Profile(Society.of(1, 4, 7), (setup_profile[4], setup_profile[1], setup_profile[7]))
    assert not equivalent(setup_profile, swapped)
    assert not equivalent(setup_profile, restrict(setup_profile, Society.of(1, 4)))


@pytest.mark.parametrize("size", [2, 3, 4, 5])
def test_two_partitions(size: int):
    society = Society.universe(size)
    found = list(two_partitions(society))
    assert len(found) == stirling2(size, 2) == 2 ** (size - 1) - 1
    assert len({frozenset((a, b)) for a, b in found}) == len(found)
    for left, right in found:
        assert 1 in left
        assert sorted(left.members + right.members) == list(society.members)


def test_two_partitions_needs_two():
    with pytest.raises(ValueError):
        list(two_partitions(Society.of(1)))


def test_profile_counts(setup_states: list[TotalPreorder]):
    assert [count_profiles(Society.universe(k), len(setup_states)) for k in (1, 2, 3)] == [75, 5625, 421875]
    assert sum(1 for _ in enumerate_profiles(Society.universe(2), setup_states)) == 5625


def test_profile_at(setup_states: list[TotalPreorder]):
    society = Society.of(2, 5)
    for index, p in enumerate(enumerate_profiles(society, setup_states)):
        if index % 41 == 0:
            assert profile_at(society, setup_states, index) == p
    resumed = next(enumerate_profiles(society, setup_states, offset=300))
    assert resumed == profile_at(society, setup_states, 300)
    with pytest.raises(ValueError):
        profile_at(society, setup_states, 5625)


def test_parse_profile():
    text = """
    # two agents
    1: 11 > 10 > 01 > 00
    3: 00 > 11 10 01   # second
    """
    p = parse_profile(text)
    assert p.society == Society.of(1, 3)
    assert p[1] == fixed_linear_order(4)
    assert p[3].levels == (1, 0, 0, 0)
    assert parse_profile(format_profile(p, VarSet()), VarSet()) == p


@pytest.mark.parametrize("text, line", [
    ("1 11 > 10 01 00", 1),
    ("x: 11 > 10 01 00", 1),
    ("0: 11 > 10 01 00", 1),
    ("1: 11 > 10 01 00\n1: 00 01 10 11", 2),
    ("\n1: 11 > 10 01", 2),
    ("# nothing", 0),
])
def test_parse_profile_errors(text: str, line: int):
    with pytest.raises(ProfileFormatError) as e:
        parse_profile(text)
    assert e.value.line == line
