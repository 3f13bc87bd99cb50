"""
Formulas as epistemic states.

Every consistent formula over the worlds is its own epistemic state, B(φ) = φ, and a basic operator maps each
of them to a preorder whose top level is exactly the models of φ (the Maximality Condition). An assignment of
this space picks, for each formula, how the remaining worlds are ranked below its models.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations, permutations
from math import prod
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from esfpy.logic.worlds import BeliefSet, VarSet, nonempty_belief_sets
from esfpy.preorders.enumeration import enumerate_all, ordered_bell
from esfpy.preorders.preorder import TRIPLE_SHAPES, TotalPreorder, triple_shape, world_triples
from esfpy.types import ShapeCode, WorldIndex
from esfpy.utils.bits import popcount

logger = logging.getLogger(__name__)

FORMULA_VARIABLES = 2


# image types of one- and two-model formulas over four worlds, by block sizes from the top
class ShapeType(Enum):
    D1 = (2, 2)
    D2 = (2, 1, 1)
    T1 = (1, 1, 1, 1)
    T2 = (1, 1, 2)
    T3 = (1, 2, 1)
    T4 = (1, 3)

    @property
    def models(self) -> int:
        return self.value[0]


class TripleType(Enum):
    S1 = (3,)
    S2 = (2, 1)
    S3 = (1, 2)
    S4 = (1, 1, 1)


def block_sizes(tp: TotalPreorder) -> Tuple[int, ...]:
    return tuple(popcount(b) for b in tp.blocks())


def classify_shape(tp: TotalPreorder) -> ShapeType:
    if tp.world_count != 4:
        raise ValueError(f"Shape types are defined over 4 worlds, got {tp.world_count}")
    sizes = block_sizes(tp)
    for t in ShapeType:
        if t.value == sizes:
            return t
    raise ValueError(f"Preorder {tp} with blocks {sizes} has a top of {sizes[0]} worlds, types cover 1 or 2")


def classify_triple(tp: TotalPreorder, triple: Sequence[WorldIndex]) -> TripleType:
    if len(set(triple)) != 3:
        raise ValueError(f"Need three distinct worlds, got {tuple(triple)}")
    levels = [tp.levels[w] for w in triple]
    counts = Counter(levels)
    return TripleType(tuple(counts[level] for level in sorted(counts, reverse=True)))


def _triple_types() -> List[TripleType]:
    types: List[Optional[TripleType]] = [None] * len(TRIPLE_SHAPES)
    for tp in enumerate_all(3):
        types[triple_shape(tp, 0, 1, 2)] = classify_triple(tp, (0, 1, 2))
    assert all(t is not None for t in types), f"unclassified triple shapes: {types}"
    return types


# Triple type of every triple shape code.
TRIPLE_TYPES: List[TripleType] = _triple_types()

# Independent listings: a chain picks an ordered triple, a single-top shape picks the tied pair and the top.
S4_PATTERNS: List[Tuple[WorldIndex, WorldIndex, WorldIndex]] = list(permutations(range(4), 3))
S3_PATTERNS: List[Tuple[WorldIndex, Tuple[WorldIndex, WorldIndex]]] = [
    (top, pair) for pair in combinations(range(4), 2) for top in range(4) if top not in pair
]


def pattern_counts() -> Dict[TripleType, int]:
    # (triple, shape) pairs of each type over four worlds, cross-checked against the direct listings
    per_triple = Counter(TRIPLE_TYPES)
    counts = {t: per_triple[t] * len(world_triples(4)) for t in TripleType}
    assert counts[TripleType.S4] == len(S4_PATTERNS), f"{counts[TripleType.S4]} chains, listed {len(S4_PATTERNS)}"
    assert counts[TripleType.S3] == len(S3_PATTERNS), f"{counts[TripleType.S3]} single tops, listed {len(S3_PATTERNS)}"
    return counts


class ShapeCoverage(NamedTuple):
    s4: int
    s3: int


def coverage_of(tp: TotalPreorder) -> ShapeCoverage:
    types = [classify_triple(tp, t) for t in world_triples(tp.world_count)]
    return ShapeCoverage(types.count(TripleType.S4), types.count(TripleType.S3))


def preorders_of_type(t: ShapeType) -> List[TotalPreorder]:
    return [tp for tp in enumerate_all(4) if block_sizes(tp) == t.value]


def coverage_by_labeling(t: ShapeType) -> Counter:
    return Counter(coverage_of(tp) for tp in preorders_of_type(t))


def shape_coverage_counts(t: ShapeType) -> ShapeCoverage:
    # S4 and S3 patterns covered by one preorder of type t, the largest over its labelings
    seen = coverage_by_labeling(t)
    if len(seen) > 1:
        logger.warning("coverage of %s depends on the labeling: %s", t.name, dict(seen))
    return max(seen)


# the image of every formula, in FormulaSpace.formulas order
@dataclass(frozen=True)
class FormulaSpaceAssignment:
    formulas: Tuple[BeliefSet, ...]
    images: Tuple[TotalPreorder, ...]

    def __post_init__(self):
        if len(self.formulas) != len(self.images):
            raise ValueError(f"{len(self.formulas)} formulas but {len(self.images)} images")
        for formula, image in zip(self.formulas, self.images):
            if image.top != formula.mask:
                raise ValueError(f"Image {image} of {formula.mask:#x} breaks Maximality: top is {image.top:#x}")

    def __getitem__(self, formula: BeliefSet) -> TotalPreorder:
        return self.images[self.formulas.index(formula)]

    def items(self) -> Iterator[Tuple[BeliefSet, TotalPreorder]]:
        return zip(self.formulas, self.images)

    def distribution(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        # (n1..n4) over the one-model images and (m1, m2) over the two-model images
        types = Counter(classify_shape(tp) for f, tp in self.items() if f.models <= 2)
        return (tuple(types[t] for t in (ShapeType.T1, ShapeType.T2, ShapeType.T3, ShapeType.T4)),
                tuple(types[t] for t in (ShapeType.D1, ShapeType.D2)))


class FormulaSpace:
    """
    The assignments of the formula space, numbered in mixed radix with the formulas ordered by decreasing
    model count and the last formula varying fastest. Choices for one formula list the two-level image first.
    """

    def __init__(self, var_count: int = FORMULA_VARIABLES, experimental: bool = False):
        if var_count != FORMULA_VARIABLES and not experimental:
            raise ValueError(f"The formula space is supported over {FORMULA_VARIABLES} variables, got {var_count}; "
                             "larger spaces need experimental=True")
        if var_count != FORMULA_VARIABLES:
            logger.warning("formula space over %d variables is experimental", var_count)
        self.varset = VarSet.of_size(var_count)
        self.world_count = self.varset.world_count
        self.formulas: Tuple[BeliefSet, ...] = tuple(
            sorted(nonempty_belief_sets(self.world_count), key=lambda b: (-b.models, b.mask)))
        self._choices: Dict[int, List[TotalPreorder]] = {}

    def choices(self, formula: BeliefSet) -> List[TotalPreorder]:
        if formula.mask not in self._choices:
            rest = [w for w in range(self.world_count) if w not in formula]
            found = []
            for below in enumerate_all(len(rest)) if rest else [None]:
                levels = [0] * self.world_count
                for w in formula.worlds():
                    levels[w] = below.level_count if below else 0
                for i, w in enumerate(rest):
                    levels[w] = below.levels[i]
                found.append(TotalPreorder(tuple(levels)))
            found.sort(key=lambda tp: (tp.level_count, tuple(-lvl for lvl in tp.levels)))
            self._choices[formula.mask] = found
        return self._choices[formula.mask]

    @cached_property
    def radices(self) -> Tuple[int, ...]:
        return tuple(ordered_bell(self.world_count - f.models) for f in self.formulas)

    @property
    def assignment_count(self) -> int:
        return prod(self.radices)

    def assignment_at(self, index: int) -> FormulaSpaceAssignment:
        if not 0 <= index < self.assignment_count:
            raise ValueError(f"Assignment index {index} outside 0..{self.assignment_count - 1}")
        digits = []
        for radix in reversed(self.radices):
            index, digit = divmod(index, radix)
            digits.append(digit)
        picks = reversed(digits)
        return FormulaSpaceAssignment(self.formulas,
                                      tuple(self.choices(f)[d] for f, d in zip(self.formulas, picks)))

    def index_of(self, assignment: FormulaSpaceAssignment) -> int:
        if assignment.formulas != self.formulas:
            raise ValueError("Assignment over a different formula space")
        index = 0
        for formula, image, radix in zip(self.formulas, assignment.images, self.radices):
            index = index * radix + self.choices(formula).index(image)
        return index


def enumerate_assignments(space: Optional[FormulaSpace] = None, start: int = 0) -> Iterator[FormulaSpaceAssignment]:
    # every assignment from position `start` on; the exhaustive scan works on the same numbering
    space = space or FormulaSpace()
    for index in range(start, space.assignment_count):
        yield space.assignment_at(index)


@dataclass(frozen=True)
class MissingShape:
    triple: Tuple[WorldIndex, WorldIndex, WorldIndex]
    shape: ShapeCode

    @property
    def kind(self) -> TripleType:
        return TRIPLE_TYPES[self.shape]

    def render(self, varset: VarSet = VarSet()) -> str:
        levels = {}
        raw = TRIPLE_SHAPES[self.shape]
        a, b, c = self.triple
        # rebuild relative levels from the pairwise orderings of (a,b), (a,c), (b,c)
        orders = {(a, b): raw // 9, (a, c): (raw // 3) % 3, (b, c): raw % 3}
        for w in self.triple:
            levels[w] = sum(1 for (x, y), o in orders.items() if (x == w and o == 1) or (y == w and o == 2))
        blocks = [sorted(w for w in self.triple if levels[w] == lvl) for lvl in sorted(set(levels.values()),
                                                                                     reverse=True)]
        return " > ".join(" ".join(varset.render(w) for w in block) for block in blocks)


@dataclass(frozen=True)
class ShapeReport:
    missing: Tuple[MissingShape, ...]

    @property
    def covers(self) -> bool:
        return not self.missing

    def __bool__(self):
        return self.covers


def covers_sd(assignment: FormulaSpaceAssignment) -> ShapeReport:
    """Every shape on every world triple is the restriction of some image."""
    world_count = assignment.images[0].world_count
    triples = world_triples(world_count)
    seen = {(t, triple_shape(tp, *t)) for tp in assignment.images for t in triples}
    missing = tuple(MissingShape(t, code) for t in triples for code in range(len(TRIPLE_SHAPES))
                    if (t, code) not in seen)
    return ShapeReport(missing)
