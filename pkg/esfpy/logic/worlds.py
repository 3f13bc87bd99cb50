from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence, Tuple

from esfpy.types import WorldIndex, WorldMask
from esfpy.utils.bits import bits_of, mask_of

MAX_VARIABLES = 4


@dataclass(frozen=True)
class VarSet:
    """
    Ordered propositional variables. Variable 0 is the leftmost character of a rendered world,
    so with ("p", "q") the world "10" makes p true and q false and has index 2.
    """

    names: Tuple[str, ...] = ("p", "q")

    def __post_init__(self):
        if len(self.names) < 2:
            raise ValueError(f"At least two propositional variables are needed, got {self.names}")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"Variable names must be distinct, got {self.names}")
        if len(self.names) > MAX_VARIABLES:
            raise ValueError(f"At most {MAX_VARIABLES} variables are supported, got {len(self.names)}")

    @classmethod
    def of_size(cls, count: int) -> "VarSet":
        defaults = ("p", "q", "r", "s")
        if count < 2 or count > len(defaults):
            raise ValueError(f"Variable count must be within 2..{len(defaults)}, got {count}")
        return cls(defaults[:count])

    @property
    def count(self) -> int:
        return len(self.names)

    @property
    def world_count(self) -> int:
        return 1 << self.count

    @property
    def full_mask(self) -> WorldMask:
        return (1 << self.world_count) - 1

    def position(self, name: str) -> int:
        return self.names.index(name)

    def holds(self, world: WorldIndex, name: str) -> bool:
        return bool((world >> (self.count - 1 - self.position(name))) & 1)

    def render(self, world: WorldIndex) -> str:
        assert 0 <= world < self.world_count, f"World {world} outside a universe of {self.world_count}"
        return format(world, f"0{self.count}b")

    def world(self, text: str) -> WorldIndex:
        if len(text) != self.count or any(c not in "01" for c in text):
            raise ValueError(f"'{text}' is not a world over {self.count} variables")
        return int(text, 2)

    def worlds(self) -> range:
        return range(self.world_count)


class World(NamedTuple):
    index: WorldIndex
    varset: VarSet

    def __str__(self):
        return self.varset.render(self.index)


@dataclass(frozen=True)
class BeliefSet:
    """A set of worlds standing for a formula up to logical equivalence."""

    mask: WorldMask
    world_count: int

    def __post_init__(self):
        assert 0 <= self.mask < (1 << self.world_count), f"Mask {self.mask:#x} exceeds {self.world_count} worlds"

    @classmethod
    def from_worlds(cls, worlds: Iterable[WorldIndex], world_count: int) -> "BeliefSet":
        return cls(mask_of(worlds), world_count)

    @classmethod
    def everything(cls, world_count: int) -> "BeliefSet":
        return cls((1 << world_count) - 1, world_count)

    @classmethod
    def nothing(cls, world_count: int) -> "BeliefSet":
        return cls(0, world_count)

    @property
    def consistent(self) -> bool:
        return self.mask != 0

    @property
    def models(self) -> int:
        return self.mask.bit_count()

    @property
    def is_everything(self) -> bool:
        return self.mask == (1 << self.world_count) - 1

    def worlds(self) -> Iterator[WorldIndex]:
        return bits_of(self.mask)

    def __contains__(self, world: WorldIndex) -> bool:
        return bool((self.mask >> world) & 1)

    def __len__(self):
        return self.models

    def _same_universe(self, other: "BeliefSet"):
        if other.world_count != self.world_count:
            raise ValueError(f"Belief sets over {self.world_count} and {other.world_count} worlds cannot be combined")

    def __and__(self, other: "BeliefSet") -> "BeliefSet":
        self._same_universe(other)
        return BeliefSet(self.mask & other.mask, self.world_count)

    def __or__(self, other: "BeliefSet") -> "BeliefSet":
        self._same_universe(other)
        return BeliefSet(self.mask | other.mask, self.world_count)

    def __invert__(self) -> "BeliefSet":
        return BeliefSet(~self.mask & ((1 << self.world_count) - 1), self.world_count)

    def entails(self, other: "BeliefSet") -> bool:
        self._same_universe(other)
        return self.mask & ~other.mask == 0

    def consistent_with(self, other: "BeliefSet") -> bool:
        self._same_universe(other)
        return self.mask & other.mask != 0


class BeliefAlgebra(NamedTuple):
    entails: bool
    equivalent: bool
    conjunction: BeliefSet
    disjunction: BeliefSet
    consistent_with: bool


def belief_algebra(a: BeliefSet, b: BeliefSet) -> BeliefAlgebra:
    return BeliefAlgebra(
        entails=a.entails(b),
        equivalent=a == b,
        conjunction=a & b,
        disjunction=a | b,
        consistent_with=a.consistent_with(b),
    )


def conjunction_of(sets: Sequence[BeliefSet], world_count: int) -> BeliefSet:
    # the conjunction over an empty index set is the full universe
    result = BeliefSet.everything(world_count)
    for s in sets:
        result = result & s
    return result


def disjunction_of(sets: Sequence[BeliefSet], world_count: int) -> BeliefSet:
    result = BeliefSet.nothing(world_count)
    for s in sets:
        result = result | s
    return result


def nonempty_belief_sets(world_count: int, max_models: int | None = None) -> list[BeliefSet]:
    # all consistent belief sets, ascending by model count then by mask
    masks = range(1, 1 << world_count)
    if max_models is not None:
        masks = [m for m in masks if m.bit_count() <= max_models]
    return [BeliefSet(m, world_count) for m in sorted(masks, key=lambda m: (m.bit_count(), m))]
