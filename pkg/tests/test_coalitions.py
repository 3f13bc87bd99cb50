import pytest

from esfpy.checking import CheckScope, ScopeRefused, grid
from esfpy.coalitions import (
    Coalition,
    check_observations,
    check_propagation,
    coalitions_of,
    dictatorial_at,
    is_decisive,
    is_decisive_for,
    is_locally_decisive,
    minimal_decisive,
    replay_coalition,
)
from esfpy.logic import VarSet, parse_formula
from esfpy.operators import make_operator
from esfpy.societies import Society
from esfpy.verdict import Status


@pytest.fixture
def setup_scope() -> CheckScope:
    return CheckScope(agents=(1, 2), verify_society_max=2, refute_society_max=2)


@pytest.fixture
def setup_varset() -> VarSet:
    return VarSet()


def test_coalitions_of():
    found = coalitions_of(Society.of(1, 2, 3))
    assert len(found) == 7
    assert found[0] == Coalition.of(1) and found[-1] == Coalition.of(1, 2, 3)
    assert coalitions_of(Society.of(1, 2), include_empty=True)[0] == Coalition()
    assert str(Coalition()) == "∅"
    with pytest.raises(ValueError):
        Coalition((2, 1))


def test_local_decisiveness(setup_scope: CheckScope, setup_varset: VarSet):
    op = make_operator("proj")
    n = Society.of(1, 2)
    e, e2 = parse_formula("{00,01}", setup_varset), parse_formula("{01}", setup_varset)
    verdict = is_locally_decisive(op, n, Coalition.of(2), e, e2, setup_scope)
    assert verdict.satisfied and "profiles meet the premises" in verdict.detail
    against = is_locally_decisive(op, n, Coalition.of(1), e, e2, setup_scope)
    assert against.violated
    assert replay_coalition(op, against.witness)


def test_local_decisiveness_rejects_bad_input(setup_scope: CheckScope, setup_varset: VarSet):
    op = make_operator("proj")
    e = parse_formula("{00,01}", setup_varset)
    with pytest.raises(ValueError):
        is_locally_decisive(op, Society.of(1, 2), Coalition.of(3), e, e, setup_scope)
    with pytest.raises(ValueError):
        is_locally_decisive(op, Society.of(1, 2), Coalition.of(1), e, parse_formula("F", setup_varset), setup_scope)


def test_decisive_for(setup_scope: CheckScope, setup_varset: VarSet):
    op = make_operator("sigmapproj")
    n = Society.of(1, 2)
    e, e2 = parse_formula("{10,11}", setup_varset), parse_formula("{11}", setup_varset)
    assert is_decisive_for(op, n, Coalition.of(2), e, e2, setup_scope).satisfied
    verdict = is_decisive_for(op, n, Coalition.of(1), e, e2, setup_scope)
    assert verdict.violated and replay_coalition(op, verdict.witness)


def test_empty_coalition_is_never_decisive():
    with pytest.raises(ValueError):
        is_decisive(make_operator("sum"), Society.of(1, 2), Coalition())


def test_is_decisive():
    op = make_operator("sum")
    n = Society.of(1, 2)
    single = is_decisive(op, n, Coalition.of(1))
    assert single.violated and replay_coalition(op, single.witness)
    whole = is_decisive(op, n, Coalition.of(1, 2))
    assert whole.status == Status.Satisfied and whole.evidence


@pytest.mark.parametrize("name, members, expected", [
    ("proj", (1, 2, 3), [(3,)]),
    ("sum", (1, 2), [(1, 2)]),
    ("sigmapproj", (1, 2), [(2,)]),
    ("max", (1, 2), [(1, 2)]),
])
def test_minimal_decisive(name: str, members: tuple, expected: list):
    found = minimal_decisive(make_operator(name), Society.of(*members))
    assert [c.members for c in found.coalitions] == expected
    singles = [c[0] for c in expected if len(c) == 1]
    assert found.dictator == (singles[0] if singles else None)
    assert all(record.mode == "decisive" for record in found.records)


def test_dictatorial_at(setup_scope: CheckScope):
    assert dictatorial_at(make_operator("proj"), setup_scope)
    assert not dictatorial_at(make_operator("sum"), setup_scope)


def test_propagation(setup_scope: CheckScope):
    verdict = check_propagation(make_operator("proj"), Society.of(1, 2), setup_scope)
    assert verdict.satisfied and "lemma instances" in verdict.detail
    skipped = check_propagation(make_operator("sum"), Society.of(1, 2), setup_scope)
    assert skipped.status == Status.Skipped and "ESF-I" in skipped.detail


def test_observations(setup_scope: CheckScope):
    for name in ("proj", "sum"):
        verdict = check_observations(make_operator(name), Society.of(1, 2), setup_scope)
        assert verdict.satisfied, verdict.evidence


def test_minimal_locally_decisive(setup_scope: CheckScope, setup_varset: VarSet):
    pair = (parse_formula("{00,01}", setup_varset), parse_formula("{01}", setup_varset))
    found = minimal_decisive(make_operator("proj"), Society.of(1, 2), setup_scope, local=pair)
    assert [c.members for c in found.coalitions] == [(2,)]
    assert found.dictator is None
    assert [r.coalition.members for r in found.records] == [(1,), (2,)]
    assert all(r.mode == "local" and r.pair == pair for r in found.records)
    assert found.records[0].verdict.violated and found.records[1].verdict.satisfied


def test_wide_scope_is_refused_before_any_table(monkeypatch):
    def unreachable(*args):
        raise AssertionError("state tables built before the cost estimate")

    monkeypatch.setattr(grid, "grid_context", unreachable)
    scope = CheckScope(var_count=3, agents=(1, 2), verify_society_max=2, refute_society_max=2)
    with pytest.raises(ScopeRefused):
        is_decisive(make_operator("proj"), Society.of(1, 2), Coalition.of(1), scope)
