import pytest

from esfpy.checking import (
    EXPECTED_TABLE1,
    CheckScope,
    PostulateId,
    ScopeRefused,
    check,
    check_dictator,
    check_many,
    check_metatheorems,
    check_prop5_consequences,
    check_reduction,
    classify_assignment,
    cross_validate,
    default_jobs,
    grid,
    metatheorem_defects,
    parse_postulate_id,
    projective_esf6_instance,
    replay,
)
from esfpy.checking.scope import ScopeSizes, scope_sizes
from esfpy.operators import make_operator
from esfpy.societies import Society
from esfpy.verdict import Status, Verdict


@pytest.fixture
def setup_scope() -> CheckScope:
    return CheckScope(agents=(1, 2, 3), verify_society_max=2, refute_society_max=3)


@pytest.fixture
def setup_pair_scope() -> CheckScope:
    return CheckScope(agents=(1, 2), verify_society_max=2, refute_society_max=2)


def published_matrix() -> dict[str, dict[PostulateId, Verdict]]:
    return {
        name: {pid: Verdict(f"{name}/{pid.label}", Status.Satisfied if holds else Status.Violated, "published")
               for pid, holds in row.items()}
        for name, row in EXPECTED_TABLE1.items()
    }


def test_parse_postulate_id():
    assert parse_postulate_id("ESF-D") == PostulateId.D
    assert parse_postulate_id("d") == PostulateId.SEM_D
    assert parse_postulate_id("esf8w") == PostulateId.ESF8W
    assert parse_postulate_id("SEM_P4W") == PostulateId.P4W
    with pytest.raises(ValueError):
        parse_postulate_id("ESF9")


def test_scope_validation():
    with pytest.raises(ValueError):
        CheckScope(verify_society_max=3, refute_society_max=2)
    with pytest.raises(ValueError):
        CheckScope(agents=(1, 2), refute_society_max=3, verify_society_max=2)
    with pytest.raises(ValueError):
        CheckScope(constraint_mode="formulas")
    with pytest.raises(ValueError):
        CheckScope(agents=(0, 1, 2, 3))


def test_default_jobs(monkeypatch):
    monkeypatch.setenv("ESFPY_JOBS", "3")
    assert default_jobs() == 3
    monkeypatch.setenv("ESFPY_JOBS", "many")
    assert default_jobs() == 1
    monkeypatch.delenv("ESFPY_JOBS")
    assert default_jobs() == 1


def test_sum_satisfies_esf8(setup_scope: CheckScope):
    verdict = check(make_operator("sum"), PostulateId.ESF8, setup_scope)
    assert verdict.satisfied and verdict.witness is None


def test_max_violates_esf8(setup_scope: CheckScope):
    op = make_operator("max")
    verdict = check(op, PostulateId.ESF8, setup_scope)
    assert verdict.violated
    witness = verdict.witness
    assert witness.society.size == 2 and witness.partition is not None
    assert replay(op, witness)
    assert not replay(make_operator("sum"), witness)
    assert witness.belief("R(N)").consistent


def test_projective_violates_esf6(setup_scope: CheckScope):
    op = make_operator("proj")
    verdict = check(op, PostulateId.ESF6, setup_scope)
    assert verdict.violated and replay(op, verdict.witness)
    instance = projective_esf6_instance()
    assert instance.society.size == 3
    assert replay(op, instance)
    assert not replay(make_operator("sum"), instance)


def test_check_many_shares_a_pass(setup_scope: CheckScope):
    op = make_operator("qlinproj")
    verdicts = check_many(op, [PostulateId.U, PostulateId.SD, PostulateId.ESF7, PostulateId.P], setup_scope)
    assert list(verdicts) == [PostulateId.U, PostulateId.SD, PostulateId.ESF7, PostulateId.P]
    assert verdicts[PostulateId.U].violated and verdicts[PostulateId.ESF7].violated
    assert verdicts[PostulateId.SD].satisfied and verdicts[PostulateId.P].satisfied
    for verdict in verdicts.values():
        if verdict.violated:
            assert replay(op, verdict.witness)


def test_standard_domain(setup_scope: CheckScope):
    assert check(make_operator("proj"), PostulateId.SD, setup_scope).satisfied
    verdict = check(make_operator("linproj"), PostulateId.SD, setup_scope)
    assert verdict.violated and replay(make_operator("linproj"), verdict.witness)


def test_states_mode_agrees(setup_pair_scope: CheckScope):
    states = setup_pair_scope.with_(constraint_mode="states")
    for name in ("sum", "max"):
        op = make_operator(name)
        assert check(op, PostulateId.ESF8, states).status == check(op, PostulateId.ESF8, setup_pair_scope).status


def test_check_dictator(setup_scope: CheckScope):
    dictators, verdict = check_dictator(make_operator("proj"), setup_scope)
    assert verdict.satisfied
    assert dictators[Society.of(1, 3)] == (3,)
    assert dictators[Society.of(1, 2, 3)] == (3,)

    dictators, verdict = check_dictator(make_operator("sigmapproj"), setup_scope)
    assert verdict.satisfied and dictators[Society.of(1, 2)] == (2,)

    op = make_operator("sum")
    dictators, verdict = check_dictator(op, setup_scope)
    assert verdict.violated and dictators[Society.of(1, 2)] == ()
    assert replay(op, verdict.witness)


def test_cross_validate(setup_scope: CheckScope):
    verdict = cross_validate(make_operator("max"), (PostulateId.ESF8, PostulateId.P4), setup_scope)
    assert verdict.satisfied and verdict.detail == "both Violated"
    assert cross_validate(make_operator("sum"), (PostulateId.ESF5, PostulateId.P1), setup_scope).satisfied
    with pytest.raises(ValueError):
        cross_validate(make_operator("sum"), (PostulateId.ESF5, PostulateId.P2), setup_scope)


def test_published_table_is_consistent():
    assert metatheorem_defects(published_matrix()) == []
    assert check_metatheorems(published_matrix()).satisfied


def test_broken_table_is_caught():
    matrix = published_matrix()
    matrix["proj"][PostulateId.D] = Verdict("proj/ESF-D", Status.Violated, "mutated")
    defects = metatheorem_defects(matrix)
    assert defects and all(name == "proj" for name, _ in defects)
    assert check_metatheorems(matrix).violated


def test_check_reduction(setup_scope: CheckScope):
    assert check_reduction(make_operator("proj"), PostulateId.D, setup_scope).satisfied
    assert check_reduction(make_operator("qlinproj"), PostulateId.U, setup_scope).satisfied
    with pytest.raises(ValueError):
        check_reduction(make_operator("sum"), PostulateId.ESF5, setup_scope)


def test_classify_assignment(setup_pair_scope: CheckScope):
    found = classify_assignment(make_operator("sum"), setup_pair_scope)
    assert (found.assignment, found.operator) == ("faithful", "ES fusion operator")
    assert found.consistent
    found = classify_assignment(make_operator("max"), setup_pair_scope)
    assert (found.assignment, found.operator) == ("quasifaithful", "ES quasifusion operator")


def test_richness_consequences(setup_pair_scope: CheckScope):
    assert check_prop5_consequences(make_operator("sum"), setup_pair_scope).satisfied
    skipped = check_prop5_consequences(make_operator("linproj"), setup_pair_scope)
    assert skipped.status == Status.Skipped


def test_scope_refused(setup_scope: CheckScope):
    with pytest.raises(ScopeRefused) as e:
        check(make_operator("sum"), PostulateId.ESF8, setup_scope.with_(cost_ceiling=1000))
    assert e.value.ceiling == 1000 and e.value.estimate > 1000


def test_scope_sizes_are_counted_not_built():
    assert scope_sizes(CheckScope()) == ScopeSizes(75, 15, 10, 6)
    states = scope_sizes(CheckScope(constraint_mode="states"))
    assert (states.constraints, states.two_model) == (75, 70)
    assert scope_sizes(CheckScope(var_count=3)).states == 545_835


@pytest.mark.parametrize("var_count, pid", [
    (3, PostulateId.ESF1),
    (4, PostulateId.ESF1),
    (4, PostulateId.SD),
])
def test_wide_scopes_are_refused_before_any_table(monkeypatch, var_count: int, pid: PostulateId):
    def unreachable(*args):
        raise AssertionError("state tables built before the cost estimate")

    monkeypatch.setattr(grid, "grid_context", unreachable)
    scope = CheckScope(var_count=var_count, agents=(1, 2), verify_society_max=2, refute_society_max=2)
    with pytest.raises(ScopeRefused) as e:
        check(make_operator("sum"), pid, scope)
    assert e.value.estimate > e.value.ceiling == scope.cost_ceiling


def test_parallel_check_matches_serial(setup_scope: CheckScope):
    op = make_operator("max")
    pids = [PostulateId.ESF6, PostulateId.ESF8]
    serial = check_many(op, pids, setup_scope)
    parallel = check_many(op, pids, setup_scope.with_(jobs=2))
    assert [v.status for v in parallel.values()] == [v.status for v in serial.values()]
    assert serial[PostulateId.ESF8].violated
    first, other = serial[PostulateId.ESF8].witness, parallel[PostulateId.ESF8].witness
    assert (other.society, other.profiles, other.partition) == (first.society, first.profiles, first.partition)
    assert other.constraints == first.constraints
    assert replay(op, other)


def test_parallel_dictators_match_serial(setup_scope: CheckScope):
    op = make_operator("proj")
    dictators, verdict = check_dictator(op, setup_scope)
    parallel, parallel_verdict = check_dictator(op, setup_scope.with_(jobs=2))
    assert parallel == dictators and parallel_verdict.status == verdict.status
