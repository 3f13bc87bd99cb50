import logging
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, List, Sequence, Set, Tuple

from esfpy.logic.worlds import BeliefSet, VarSet
from esfpy.types import Level, ShapeCode, WorldIndex, WorldMask
from esfpy.utils.bits import bits_of

logger = logging.getLogger(__name__)


# outcome of comparing two worlds; the value doubles as the pair shape code
class Ordering3(IntEnum):
    Equal = 0
    MorePlausible = 1
    LessPlausible = 2


class PreorderLiteralError(ValueError):
    pass


Score = int | Fraction


@dataclass(frozen=True)
class TotalPreorder:
    """
    An epistemic state: a plausibility ranking of all worlds.

    levels[w] is the canonical rank of world w, higher is more plausible. Levels are contiguous from 0
    and every level in 0..height is occupied.
    """

    levels: Tuple[Level, ...]

    def __post_init__(self):
        assert len(self.levels) >= 1, "A preorder needs at least one world"
        used = set(self.levels)
        assert used == set(range(len(used))), f"Levels {self.levels} are not contiguous from 0"

    @classmethod
    def from_levels(cls, blocks: Sequence[Iterable[WorldIndex]], world_count: int) -> "TotalPreorder":
        # builds a preorder from world blocks listed top first
        blocks = [set(b) for b in blocks]
        seen: Set[WorldIndex] = set()
        for block in blocks:
            if not block:
                raise ValueError("Preorder blocks must be nonempty")
            if block & seen:
                raise ValueError(f"Worlds {sorted(block & seen)} appear in more than one block")
            seen |= block
        if seen != set(range(world_count)):
            raise ValueError(f"Blocks cover {sorted(seen)}, not a partition of {world_count} worlds")

        # the last block is level 0
        levels = [0] * world_count
        for position, block in enumerate(blocks):
            for w in block:
                levels[w] = len(blocks) - 1 - position
        return cls(tuple(levels))

    @classmethod
    def from_scores(cls, scores: Sequence[Score], higher_is_better: bool = True) -> "TotalPreorder":
        distinct = sorted(set(scores), reverse=not higher_is_better)
        rank = {value: level for level, value in enumerate(distinct)}
        return cls(tuple(rank[s] for s in scores))

    @classmethod
    def flat(cls, world_count: int) -> "TotalPreorder":
        return cls((0,) * world_count)

    @property
    def world_count(self) -> int:
        return len(self.levels)

    @property
    def height(self) -> Level:
        return max(self.levels)

    @property
    def level_count(self) -> int:
        return self.height + 1

    @property
    def is_linear(self) -> bool:
        return self.level_count == self.world_count

    def level_of(self, w: WorldIndex) -> Level:
        return self.levels[w]

    def distance_of(self, w: WorldIndex) -> int:
        # steps below the top level, 0 for the most plausible worlds
        return self.height - self.levels[w]

    def compare(self, w: WorldIndex, w2: WorldIndex) -> Ordering3:
        a, b = self.levels[w], self.levels[w2]
        if a > b:
            return Ordering3.MorePlausible
        if a < b:
            return Ordering3.LessPlausible
        return Ordering3.Equal

    def at_least(self, w: WorldIndex, w2: WorldIndex) -> bool:
        return self.levels[w] >= self.levels[w2]

    def strictly(self, w: WorldIndex, w2: WorldIndex) -> bool:
        return self.levels[w] > self.levels[w2]

    def block(self, level: Level) -> WorldMask:
        mask = 0
        for w, lvl in enumerate(self.levels):
            if lvl == level:
                mask |= 1 << w
        return mask

    def blocks(self) -> List[WorldMask]:
        # world masks from the top level down
        return [self.block(level) for level in range(self.height, -1, -1)]

    @cached_property
    def top(self) -> WorldMask:
        return self.block(self.height)

    @property
    def beliefs(self) -> BeliefSet:
        return BeliefSet(self.top, self.world_count)

    def max_within(self, mask: WorldMask) -> WorldMask:
        if mask == 0:
            raise ValueError("max over an empty set of worlds is undefined")
        best = max(self.levels[w] for w in bits_of(mask))
        return sum(1 << w for w in bits_of(mask) if self.levels[w] == best)

    @cached_property
    def strict_pairs(self) -> int:
        # bit w*n+w2 is set iff w is strictly more plausible than w2
        n = self.world_count
        bits = 0
        for w in range(n):
            for w2 in range(n):
                if self.levels[w] > self.levels[w2]:
                    bits |= 1 << (w * n + w2)
        return bits

    @cached_property
    def weak_pairs(self) -> int:
        n = self.world_count
        bits = 0
        for w in range(n):
            for w2 in range(n):
                if self.levels[w] >= self.levels[w2]:
                    bits |= 1 << (w * n + w2)
        return bits

    def ranking(self) -> Tuple[Level, ...]:
        # from the relation alone: the longest strictly ascending chain ending in each world
        n = self.world_count
        order = sorted(range(n), key=lambda w: self.levels[w])
        # lowest first, so every world below w is already done
        longest = [0] * n
        for w in order:
            below = [longest[v] + 1 for v in range(n) if self.strictly(w, v)]
            longest[w] = max(below, default=0)
        return tuple(longest)

    def render(self, varset: VarSet | None = None) -> str:
        varset = varset or VarSet.of_size(self.world_count.bit_length() - 1)  # 2**k worlds
        return " > ".join(" ".join(varset.render(w) for w in bits_of(block)) for block in self.blocks())

    def __str__(self):
        return self.render()


def compare(tp: TotalPreorder, w: WorldIndex, w2: WorldIndex) -> Ordering3:
    return tp.compare(w, w2)


def max_over(tp: TotalPreorder, c: BeliefSet) -> BeliefSet:
    if c.world_count != tp.world_count:
        raise ValueError(f"Belief set over {c.world_count} worlds, preorder over {tp.world_count}")
    if not c.consistent:
        raise ValueError("max_over needs a nonempty set of worlds")
    return BeliefSet(tp.max_within(c.mask), tp.world_count)


def beliefs(tp: TotalPreorder) -> BeliefSet:
    return tp.beliefs


def lex(tp1: TotalPreorder, tp2: TotalPreorder) -> TotalPreorder:
    # w above w' iff above in tp1, or tied in tp1 and above in tp2
    if tp1.world_count != tp2.world_count:
        raise ValueError(f"lex of preorders over {tp1.world_count} and {tp2.world_count} worlds")
    width = tp2.level_count
    # tp2 only separates worlds tied in tp1
    return TotalPreorder.from_scores([a * width + b for a, b in zip(tp1.levels, tp2.levels)])


def fixed_linear_order(world_count: int) -> TotalPreorder:
    # descending world index: 11 > 10 > 01 > 00 over two variables
    return TotalPreorder(tuple(range(world_count)))


def _realizable_triple_codes() -> List[int]:
    codes = set()
    for levels in _all_level_vectors(3):
        a, b, c = levels
        o = [_cmp(a, b), _cmp(a, c), _cmp(b, c)]
        codes.add(o[0] * 9 + o[1] * 3 + o[2])
    return sorted(codes)


def _cmp(x: int, y: int) -> int:
    return 1 if x > y else 2 if x < y else 0


def _all_level_vectors(n: int) -> List[Tuple[int, ...]]:
    # used levels contiguous from 0
    return [raw for raw in product(range(n), repeat=n) if set(raw) == set(range(max(raw) + 1))]


# Raw code: the three pairwise Ordering3 values of (a,b), (a,c), (b,c) read as a base-3 number.
TRIPLE_SHAPES: List[int] = _realizable_triple_codes()
TRIPLE_SHAPE_OF_RAW = {raw: code for code, raw in enumerate(TRIPLE_SHAPES)}
assert len(TRIPLE_SHAPES) == 13, f"Expected 13 triple shapes, found {len(TRIPLE_SHAPES)}"


@dataclass(frozen=True)
class Restriction:
    worlds: Tuple[WorldIndex, ...]
    shape: ShapeCode

    @property
    def orderings(self) -> Tuple[Ordering3, ...]:
        # a pair shape is its Ordering3 value
        if len(self.worlds) == 2:
            return (Ordering3(self.shape),)
        raw = TRIPLE_SHAPES[self.shape]
        return (Ordering3(raw // 9), Ordering3((raw // 3) % 3), Ordering3(raw % 3))


def pair_shape(tp: TotalPreorder, a: WorldIndex, b: WorldIndex) -> ShapeCode:
    return int(tp.compare(a, b))


def triple_shape(tp: TotalPreorder, a: WorldIndex, b: WorldIndex, c: WorldIndex) -> ShapeCode:
    raw = int(tp.compare(a, b)) * 9 + int(tp.compare(a, c)) * 3 + int(tp.compare(b, c))
    return TRIPLE_SHAPE_OF_RAW[raw]


def restrict(tp: TotalPreorder, worlds: Iterable[WorldIndex]) -> Restriction:
    ordered = tuple(sorted(set(worlds)))
    match len(ordered):
        case 2:
            return Restriction(ordered, pair_shape(tp, *ordered))
        case 3:
            return Restriction(ordered, triple_shape(tp, *ordered))
        case _:
            raise ValueError(f"Restrictions are defined for 2 or 3 worlds, got {len(ordered)}")


def world_pairs(world_count: int) -> List[Tuple[WorldIndex, WorldIndex]]:
    return list(combinations(range(world_count), 2))


def world_triples(world_count: int) -> List[Tuple[WorldIndex, WorldIndex, WorldIndex]]:
    return list(combinations(range(world_count), 3))


def parse_preorder(text: str, varset: VarSet = VarSet()) -> TotalPreorder:
    """Reads the literal form `11 > 00 01 > 10`, top level first."""
    blocks = []
    for chunk in text.split(">"):
        names = chunk.split()
        if not names:
            raise PreorderLiteralError(f"Empty level in preorder literal '{text}'")
        try:
            blocks.append([varset.world(name) for name in names])
        except ValueError as e:
            raise PreorderLiteralError(f"In preorder literal '{text}': {e}") from e
    flat = [w for block in blocks for w in block]
    if len(flat) != len(set(flat)) or set(flat) != set(varset.worlds()):
        raise PreorderLiteralError(f"Preorder literal '{text}' does not partition the {varset.world_count} worlds")
    return TotalPreorder.from_levels(blocks, varset.world_count)
