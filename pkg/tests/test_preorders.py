from functools import cache
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from esfpy.logic import BeliefSet, VarSet
from esfpy.preorders import (
    Ordering3,
    PreorderLiteralError,
    StateSpace,
    TotalPreorder,
    compare,
    count_all,
    enumerate_all,
    fixed_linear_order,
    lex,
    max_over,
    ordered_bell,
    parse_preorder,
    restrict,
    state_space,
    triple_shape,
    world_triples,
)


@cache
def ordered_partitions(worlds: frozenset) -> int:
    """Oracle: choose the top block, rank the rest."""
    if not worlds:
        return 1
    items = sorted(worlds)
    return sum(ordered_partitions(worlds - frozenset(top))
               for size in range(1, len(items) + 1) for top in combinations(items, size))


def longest_chain_rank(tp: TotalPreorder, w: int) -> int:
    """Oracle for r(w): the longest strictly ascending chain ending in w, by search."""
    below = [v for v in range(tp.world_count) if tp.strictly(w, v)]
    return max((1 + longest_chain_rank(tp, v) for v in below), default=0)


@pytest.fixture
def setup_space() -> StateSpace:
    return state_space(4)


@pytest.fixture
def setup_chain() -> TotalPreorder:
    return TotalPreorder.from_levels([{3}, {2}, {1}, {0}], 4)


preorders = st.integers(min_value=0, max_value=74).map(lambda i: state_space(4)[i])


def test_from_levels_examples(setup_chain: TotalPreorder):
    assert TotalPreorder.from_levels([{0, 1, 2, 3}], 4).levels == (0, 0, 0, 0)
    assert setup_chain.levels == (0, 1, 2, 3)
    assert TotalPreorder.from_levels([{0}, {1, 2}, {3}], 4).levels == (2, 1, 1, 0)
    with pytest.raises(ValueError):
        TotalPreorder.from_levels([{0, 1}, {1, 2, 3}], 4)
    with pytest.raises(ValueError):
        TotalPreorder.from_levels([{0, 1}, {2}], 4)
    with pytest.raises(ValueError):
        TotalPreorder.from_levels([{0, 1, 2, 3}, set()], 4)


def test_compare(setup_chain: TotalPreorder):
    flat = TotalPreorder.flat(4)
    assert all(compare(flat, w, w2) == Ordering3.Equal for w in range(4) for w2 in range(4))
    assert compare(setup_chain, 3, 0) == Ordering3.MorePlausible
    assert compare(setup_chain, 0, 3) == Ordering3.LessPlausible
    assert all(compare(setup_chain, w, w) == Ordering3.Equal for w in range(4))


def test_max_over(setup_chain: TotalPreorder):
    flat = TotalPreorder.flat(4)
    assert max_over(flat, BeliefSet(0b1001, 4)) == BeliefSet(0b1001, 4)
    assert max_over(setup_chain, BeliefSet(0b0011, 4)) == BeliefSet(0b0010, 4)
    assert max_over(setup_chain, BeliefSet.everything(4)) == setup_chain.beliefs
    with pytest.raises(ValueError):
        max_over(setup_chain, BeliefSet.nothing(4))
    with pytest.raises(ValueError):
        max_over(setup_chain, BeliefSet(1, 8))


def test_enumeration_counts():
    for n, expected in zip(range(1, 5), (1, 3, 13, 75)):
        assert count_all(n) == expected
        assert ordered_bell(n) == expected
        assert ordered_partitions(frozenset(range(n))) == expected
    assert ordered_partitions(frozenset(range(5))) == ordered_bell(5) == 541


def test_enumeration_is_canonical_and_distinct():
    found = list(enumerate_all(4))
    assert len(set(found)) == len(found)
    assert [tp.level_count for tp in found] == sorted(tp.level_count for tp in found)
    for tp in found:
        assert set(tp.levels) == set(range(tp.level_count))
        assert tp.ranking() == tp.levels
        assert all(longest_chain_rank(tp, w) == tp.levels[w] for w in range(4))


def test_enumeration_bound():
    with pytest.raises(ValueError):
        list(enumerate_all(0))
    with pytest.raises(ValueError):
        list(enumerate_all(9))


def test_from_scores():
    assert TotalPreorder.from_scores([5, 1, 5, 3]).levels == (2, 0, 2, 1)
    assert TotalPreorder.from_scores([5, 1, 5, 3], higher_is_better=False).levels == (0, 2, 0, 1)


def test_lex_examples(setup_chain: TotalPreorder):
    flat = TotalPreorder.flat(4)
    two = TotalPreorder.from_levels([{0, 3}, {1, 2}], 4)
    assert lex(flat, two) == two
    assert lex(two, two) == two
    assert lex(two, setup_chain).levels == (2, 0, 1, 3)


def test_lex_top_identity(setup_space: StateSpace):
    """max(lex(a, b)) = max_over(b, max(a)) on every pair of states."""
    for a in setup_space.states:
        for b in setup_space.states:
            combined = lex(a, b)
            assert combined.beliefs == max_over(b, a.beliefs)
            if a.is_linear or b.is_linear:
                assert combined.is_linear


def test_lex_relation(setup_space: StateSpace):
    for a in setup_space.states[::7]:
        for b in setup_space.states[::5]:
            combined = lex(a, b)
            for w in range(4):
                for w2 in range(4):
                    expected = a.strictly(w, w2) or (a.levels[w] == a.levels[w2] and b.strictly(w, w2))
                    assert combined.strictly(w, w2) == expected


@given(preorders, preorders, preorders)
def test_lex_laws(a: TotalPreorder, b: TotalPreorder, c: TotalPreorder):
    assert lex(a, a) == a
    assert lex(TotalPreorder.flat(4), a) == a
    assert lex(a, TotalPreorder.flat(4)) == a
    assert lex(lex(a, b), c) == lex(a, lex(b, c))


def test_fixed_linear_order():
    order = fixed_linear_order(4)
    assert order.is_linear
    assert order.render() == "11 > 10 > 01 > 00"


def test_restrict(setup_chain: TotalPreorder):
    flat = TotalPreorder.flat(4)
    assert restrict(flat, (0, 3)).orderings == (Ordering3.Equal,)
    assert restrict(setup_chain, (0, 3)).orderings == (Ordering3.LessPlausible,)
    assert restrict(setup_chain, (3, 0)) == restrict(setup_chain, (0, 3))
    assert restrict(setup_chain, (0, 1, 2)).orderings == (Ordering3.LessPlausible,) * 3
    with pytest.raises(ValueError):
        restrict(setup_chain, (0,))
    with pytest.raises(ValueError):
        restrict(setup_chain, (0, 1, 2, 3))


def test_thirteen_triple_shapes(setup_space: StateSpace):
    assert len(world_triples(4)) == 4
    for triple in world_triples(4):
        assert len({triple_shape(tp, *triple) for tp in setup_space.states}) == 13


def test_parse_preorder():
    varset = VarSet()
    tp = parse_preorder("11 > 00 01 > 10", varset)
    assert tp.levels == (1, 1, 0, 2)
    assert parse_preorder(tp.render(varset), varset) == tp
    for bad in ("11 > 00 01", "11 > > 00 01 10", "11 11 > 00 01 10", "111 > 00 01 10"):
        with pytest.raises(PreorderLiteralError):
            parse_preorder(bad, varset)


def test_space_tables(setup_space: StateSpace):
    assert setup_space.size == 75
    assert setup_space.best.shape == (75, 16)
    for index, tp in enumerate(setup_space.states):
        assert setup_space.index_of(tp) == index
        assert int(setup_space.tops[index]) == tp.top
        assert int(setup_space.strict_pairs[index]) == tp.strict_pairs
        assert int(setup_space.weak_pairs[index]) == tp.weak_pairs
        for mask in range(1, 16):
            assert int(setup_space.best[index, mask]) == max_over(tp, BeliefSet(mask, 4)).mask
        for column, triple in enumerate(setup_space.triples):
            assert int(setup_space.triple_shapes[index, column]) == triple_shape(tp, *triple)


def test_space_scores(setup_space: StateSpace):
    levels = setup_space.levels.astype(np.int64)
    assert (setup_space.index_of_scores(levels * 3 + 1) == np.arange(75)).all()
    first = np.arange(75)[:, None]
    second = np.arange(75)[None, :]
    assert (setup_space.lex_indices(first, second) == setup_space.lex_table).all()
