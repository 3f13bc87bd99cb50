"""
Vectorised view of every total preorder over a small world universe.

States are numbered in enumerate_all order. The tables here are what the checker and the
impossibility scan gather from; nothing in them is specific to an operator.
"""

import logging
from functools import cache, cached_property
from math import lcm
from typing import Dict, List, Tuple

import numpy as np

from esfpy.preorders.enumeration import DEFAULT_WORLD_BOUND, enumerate_all
from esfpy.preorders.preorder import TRIPLE_SHAPE_OF_RAW, TotalPreorder, lex, world_pairs, world_triples
from esfpy.types import StateIndex

logger = logging.getLogger(__name__)

STATE_DTYPE = np.int32
MASK_DTYPE = np.uint16


def canonical_levels(scores: np.ndarray) -> np.ndarray:
    """
    Dense ranks along the last axis, higher score -> higher level, contiguous from 0.

    level[w] counts the distinct scores strictly below score[w]; each world below contributes
    1/multiplicity, scaled by lcm(1..n) to stay in integers.
    """
    n = scores.shape[-1]
    scale = lcm(*range(1, n + 1))
    equal = scores[..., :, None] == scores[..., None, :]
    weight = scale // equal.sum(axis=-1)
    below = scores[..., None, :] < scores[..., :, None]
    return (below * weight[..., None, :]).sum(axis=-1) // scale


class StateSpace:
    world_count: int
    states: List[TotalPreorder]
    size: int

    def __init__(self, world_count: int, bound: int = DEFAULT_WORLD_BOUND):
        self.world_count = world_count
        self.states = list(enumerate_all(world_count, bound))
        self.size = len(self.states)
        self._index: Dict[Tuple[int, ...], StateIndex] = {s.levels: i for i, s in enumerate(self.states)}
        logger.debug("state space over %d worlds: %d total preorders", world_count, self.size)

    def index_of(self, tp: TotalPreorder) -> StateIndex:
        if tp.world_count != self.world_count:
            raise ValueError(f"Preorder over {tp.world_count} worlds, space over {self.world_count}")
        return self._index[tp.levels]

    def __getitem__(self, index: StateIndex) -> TotalPreorder:
        return self.states[index]

    def __len__(self):
        return self.size

    @cached_property
    def world_weights(self) -> np.ndarray:
        return (1 << np.arange(self.world_count)).astype(np.int64)

    @cached_property
    def levels(self) -> np.ndarray:
        return np.array([s.levels for s in self.states], dtype=np.int16)

    @cached_property
    def distances(self) -> np.ndarray:
        # steps below the top level, 0 for the most plausible worlds
        return self.levels.max(axis=1, keepdims=True) - self.levels

    @cached_property
    def tops(self) -> np.ndarray:
        at_top = self.levels == self.levels.max(axis=1, keepdims=True)
        return (at_top * self.world_weights).sum(axis=1).astype(MASK_DTYPE)

    @cached_property
    def best(self) -> np.ndarray:
        # best[s, c] = max_over(state s, worlds of mask c); column 0 is unused and left empty
        n = self.world_count
        table = np.zeros((self.size, 1 << n), dtype=MASK_DTYPE)
        members = ((np.arange(1 << n)[:, None] >> np.arange(n)) & 1).astype(bool)
        # worlds outside the mask rank below every level
        for c in range(1, 1 << n):
            masked = np.where(members[c], self.levels, -1)
            winners = masked == masked.max(axis=1, keepdims=True)
            table[:, c] = (winners * self.world_weights).sum(axis=1)
        return table

    @cached_property
    def strict_pairs(self) -> np.ndarray:
        # bit w*n+w2 set iff w is strictly above w2
        return self._pair_bits(lambda a, b: a > b)

    @cached_property
    def weak_pairs(self) -> np.ndarray:
        return self._pair_bits(lambda a, b: a >= b)

    def _pair_bits(self, relation) -> np.ndarray:
        n = self.world_count
        bits = np.zeros(self.size, dtype=np.uint64)
        for w in range(n):
            for w2 in range(n):
                holds = relation(self.levels[:, w], self.levels[:, w2]).astype(np.uint64)
                bits |= holds << np.uint64(w * n + w2)
        return bits

    @cached_property
    def pairs(self) -> List[Tuple[int, int]]:
        return world_pairs(self.world_count)

    @cached_property
    def triples(self) -> List[Tuple[int, int, int]]:
        return world_triples(self.world_count)

    @cached_property
    def pair_shapes(self) -> np.ndarray:
        return np.stack([self._compare(a, b) for a, b in self.pairs], axis=1).astype(np.uint8)

    @cached_property
    def triple_shapes(self) -> np.ndarray:
        lookup = np.full(27, 255, dtype=np.uint8)
        # 255 marks raw codes no total preorder produces
        for raw, code in TRIPLE_SHAPE_OF_RAW.items():
            lookup[raw] = code
        columns = []
        for a, b, c in self.triples:
            raw = self._compare(a, b) * 9 + self._compare(a, c) * 3 + self._compare(b, c)
            columns.append(lookup[raw])
        shapes = np.stack(columns, axis=1)
        assert (shapes != 255).all(), "unrealizable triple shape in a total preorder"
        return shapes

    def _compare(self, a: int, b: int) -> np.ndarray:
        # pair shape codes: 0 tied, 1 a above b, 2 b above a
        la, lb = self.levels[:, a], self.levels[:, b]
        return np.where(la > lb, 1, np.where(la < lb, 2, 0)).astype(np.int64)

    @cached_property
    def _code_powers(self) -> np.ndarray:
        # levels read as base-n digits, world 0 lowest
        return self.world_count ** np.arange(self.world_count, dtype=np.int64)

    @cached_property
    def _code_lookup(self) -> np.ndarray:
        codes = (self.levels.astype(np.int64) * self._code_powers).sum(axis=1)
        lookup = np.full(self.world_count ** self.world_count, -1, dtype=STATE_DTYPE)
        lookup[codes] = np.arange(self.size, dtype=STATE_DTYPE)
        assert len(np.unique(codes)) == self.size, "level vectors do not encode uniquely"
        return lookup

    def index_of_scores(self, scores: np.ndarray) -> np.ndarray:
        # state indices of the preorders induced by score vectors (last axis), higher is better
        assert scores.shape[-1] == self.world_count, f"scores of width {scores.shape[-1]} for {self.world_count} worlds"
        levels = canonical_levels(scores)
        indices = self._code_lookup[(levels * self._code_powers).sum(axis=-1)]
        return indices

    def lex_indices(self, first: np.ndarray, second: np.ndarray) -> np.ndarray:
        # vectorised lex over state indices: first decides, second breaks its ties
        scores = self.levels[first].astype(np.int64) * self.world_count + self.levels[second]
        return self.index_of_scores(scores)

    @cached_property
    def lex_table(self) -> np.ndarray:
        # lex_table[a, b] = index of lex(a, b), computed through the pure-Python lex
        table = np.empty((self.size, self.size), dtype=STATE_DTYPE)
        for a, first in enumerate(self.states):
            for b, second in enumerate(self.states):
                table[a, b] = self.index_of(lex(first, second))
        return table


@cache
def state_space(world_count: int) -> StateSpace:
    return StateSpace(world_count)
