from math import comb
from typing import Iterator, List

from esfpy.preorders.preorder import TotalPreorder

DEFAULT_WORLD_BOUND = 8


def _surjections(world_count: int, level_count: int) -> Iterator[List[int]]:
    # level vectors onto 0..level_count-1, lexicographically ascending
    vector = [0] * world_count
    used = [0] * level_count

    def fill(position: int, missing: int):
        remaining = world_count - position
        if remaining == 0:
            if missing == 0:
                yield list(vector)
            return
        if missing > remaining:
            return
        for level in range(level_count):
            fresh = used[level] == 0
            if missing - fresh > remaining - 1:
                continue
            vector[position] = level
            used[level] += 1
            yield from fill(position + 1, missing - fresh)
            used[level] -= 1

    yield from fill(0, level_count)


def enumerate_all(world_count: int, bound: int = DEFAULT_WORLD_BOUND) -> Iterator[TotalPreorder]:
    """
    Every total preorder over `world_count` worlds exactly once: by number of levels, then
    lexicographically on the level vectors. Restartable, holds no shared state.
    """
    if world_count < 1:
        raise ValueError(f"Need at least one world, got {world_count}")
    if world_count > bound:
        raise ValueError(f"Refusing to enumerate preorders over {world_count} worlds (bound {bound})")
    for level_count in range(1, world_count + 1):
        for vector in _surjections(world_count, level_count):
            yield TotalPreorder(tuple(vector))


def count_all(world_count: int, bound: int = DEFAULT_WORLD_BOUND) -> int:
    return sum(1 for _ in enumerate_all(world_count, bound))


def ordered_bell(n: int) -> int:
    """Number of total preorders on n elements, from the recurrence a(n) = sum_k C(n, k) a(n - k)."""
    counts = [1]
    for m in range(1, n + 1):
        counts.append(sum(comb(m, k) * counts[m - k] for k in range(1, m + 1)))
    return counts[n]
