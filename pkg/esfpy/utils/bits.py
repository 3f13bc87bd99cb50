from typing import Iterable, Iterator


def popcount(mask: int) -> int:
    return mask.bit_count()


def bits_of(mask: int) -> Iterator[int]:
    # yields the positions of the set bits, lowest first
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    assert mask, "lowest_bit of an empty mask"
    return (mask & -mask).bit_length() - 1


def mask_of(positions: Iterable[int]) -> int:
    mask = 0
    for position in positions:
        mask |= 1 << position
    return mask
