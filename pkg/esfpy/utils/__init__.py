from esfpy.utils.bits import bits_of, lowest_bit, mask_of, popcount
from esfpy.utils.registry import Associator

__all__ = ["Associator", "bits_of", "lowest_bit", "mask_of", "popcount"]
