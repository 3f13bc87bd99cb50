from typing import TypeAlias

WorldIndex  : TypeAlias = int  # position of a valuation, variable 0 is the most significant bit
WorldMask   : TypeAlias = int  # bit i set iff world i is a model
StateIndex  : TypeAlias = int  # position of a total preorder in enumerate_all order
AgentId     : TypeAlias = int  # positive, ordered by <
Level       : TypeAlias = int  # canonical rank, 0 = least plausible
ShapeCode   : TypeAlias = int  # restriction shape, 0..2 for pairs, 0..12 for triples
ProfileIndex: TypeAlias = int  # position of a profile in enumerate_profiles order
