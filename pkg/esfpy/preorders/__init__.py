from esfpy.preorders.enumeration import count_all, enumerate_all, ordered_bell
from esfpy.preorders.preorder import (
    Ordering3,
    PreorderLiteralError,
    Restriction,
    TotalPreorder,
    beliefs,
    compare,
    fixed_linear_order,
    lex,
    max_over,
    pair_shape,
    parse_preorder,
    restrict,
    triple_shape,
    world_pairs,
    world_triples,
)
from esfpy.preorders.space import StateSpace, canonical_levels, state_space

__all__ = [
    "Ordering3",
    "PreorderLiteralError",
    "Restriction",
    "StateSpace",
    "TotalPreorder",
    "beliefs",
    "canonical_levels",
    "compare",
    "count_all",
    "enumerate_all",
    "fixed_linear_order",
    "lex",
    "max_over",
    "ordered_bell",
    "pair_shape",
    "parse_preorder",
    "restrict",
    "state_space",
    "triple_shape",
    "world_pairs",
    "world_triples",
]
