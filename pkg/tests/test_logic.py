from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from esfpy.logic import (
    BeliefSet,
    FormulaSyntaxError,
    UnknownVariableError,
    VarSet,
    belief_algebra,
    conjunction_of,
    disjunction_of,
    format_belief_set,
    nonempty_belief_sets,
    parse_formula,
)

WORLDS = 4
belief_sets = st.integers(min_value=0, max_value=(1 << WORLDS) - 1).map(lambda m: BeliefSet(m, WORLDS))


@pytest.fixture
def setup_varset() -> VarSet:
    return VarSet(("p", "q"))


def worlds(varset: VarSet, *names: str) -> BeliefSet:
    return BeliefSet.from_worlds([varset.world(n) for n in names], varset.world_count)


def test_world_rendering(setup_varset: VarSet):
    assert setup_varset.world_count == 4
    assert setup_varset.render(2) == "10"
    assert setup_varset.holds(2, "p") and not setup_varset.holds(2, "q")
    for w in setup_varset.worlds():
        assert setup_varset.world(setup_varset.render(w)) == w


def test_varset_bounds():
    with pytest.raises(ValueError):
        VarSet(("p",))
    with pytest.raises(ValueError):
        VarSet(("p", "p"))
    with pytest.raises(ValueError):
        VarSet.of_size(5)
    assert VarSet.of_size(3).names == ("p", "q", "r")


def test_parse_examples(setup_varset: VarSet):
    assert parse_formula("p", setup_varset) == worlds(setup_varset, "10", "11")
    assert parse_formula("T", setup_varset).is_everything
    assert not parse_formula("p & !p", setup_varset).consistent
    assert parse_formula("(p | q) & !(p & q)", setup_varset) == worlds(setup_varset, "01", "10")


def test_parse_precedence(setup_varset: VarSet):
    assert parse_formula("!p & q", setup_varset) == worlds(setup_varset, "01")
    assert parse_formula("p | q & F", setup_varset) == parse_formula("p", setup_varset)
    # right associative
    assert parse_formula("p -> q -> p", setup_varset).is_everything
    assert parse_formula("(p -> q) -> p", setup_varset) == parse_formula("p", setup_varset)
    assert parse_formula("p <-> q", setup_varset) == worlds(setup_varset, "00", "11")


def test_parse_world_lists(setup_varset: VarSet):
    assert parse_formula("{00,11}", setup_varset) == worlds(setup_varset, "00", "11")
    assert not parse_formula("{}", setup_varset).consistent
    assert parse_formula("{01} | p", setup_varset) == worlds(setup_varset, "01", "10", "11")
    assert parse_formula("⊤ & !⊥", setup_varset).is_everything


def test_parse_errors(setup_varset: VarSet):
    with pytest.raises(UnknownVariableError) as e:
        parse_formula("p & r", setup_varset)
    assert e.value.name == "r" and e.value.position == 4
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula("(p & q", setup_varset)
    assert e.value.position == 6
    with pytest.raises(FormulaSyntaxError):
        parse_formula("", setup_varset)
    with pytest.raises(FormulaSyntaxError):
        parse_formula("p q", setup_varset)
    with pytest.raises(FormulaSyntaxError):
        parse_formula("{000}", setup_varset)
    with pytest.raises(FormulaSyntaxError):
        parse_formula("p $ q", setup_varset)


def test_parse_is_semantic(setup_varset: VarSet):
    """Equivalent texts parse to equal belief sets; entailment is world-by-world."""
    formulas = ["p", "q", "!p", "p & q", "p | q", "p -> q", "!(p & q)", "!p | !q", "q | p"]
    parsed = {f: parse_formula(f, setup_varset) for f in formulas}
    assert parsed["!(p & q)"] == parsed["!p | !q"]
    assert parsed["p | q"] == parsed["q | p"]
    for f, g in product(formulas, repeat=2):
        by_worlds = all(w in parsed[g] for w in parsed[f].worlds())
        assert parsed[f].entails(parsed[g]) == by_worlds


def test_format_belief_set(setup_varset: VarSet):
    assert format_belief_set(BeliefSet.nothing(4)) == "⊥"
    assert format_belief_set(BeliefSet.everything(4)) == "⊤"
    assert format_belief_set(worlds(setup_varset, "11", "00")) == "{00,11}"
    for b in [BeliefSet(m, 4) for m in range(1 << 4)]:
        assert parse_formula(format_belief_set(b), setup_varset) == b


def test_belief_algebra_examples(setup_varset: VarSet):
    a, b = worlds(setup_varset, "00"), worlds(setup_varset, "00", "01")
    found = belief_algebra(a, b)
    assert found.entails and not found.equivalent
    assert found.conjunction == a and found.disjunction == b and found.consistent_with
    assert not belief_algebra(a, worlds(setup_varset, "11")).consistent_with
    assert conjunction_of([], 4).is_everything
    assert not disjunction_of([], 4).consistent
    with pytest.raises(ValueError):
        belief_algebra(a, BeliefSet(1, 8))


def test_nonempty_belief_sets():
    found = nonempty_belief_sets(4)
    assert len(found) == 15
    assert [b.models for b in found] == sorted(b.models for b in found)
    assert len(nonempty_belief_sets(4, max_models=2)) == 10


@given(belief_sets, belief_sets, belief_sets)
def test_lattice_laws(a: BeliefSet, b: BeliefSet, c: BeliefSet):
    assert a & b == b & a and a | b == b | a
    assert (a & b) & c == a & (b & c) and (a | b) | c == a | (b | c)
    assert a & a == a and a | a == a
    assert a & (a | b) == a
    assert ~~a == a
    assert (a & b).entails(a) and a.entails(a | b)
    assert belief_algebra(a, b).entails == (a.mask & ~b.mask == 0)


@given(st.lists(belief_sets, max_size=4))
def test_nary_forms(sets):
    meet = conjunction_of(sets, WORLDS)
    join = disjunction_of(sets, WORLDS)
    for s in sets:
        assert meet.entails(s) and s.entails(join)
