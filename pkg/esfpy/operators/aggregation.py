import logging
from dataclasses import dataclass
from itertools import permutations, product
from typing import Callable, List, Sequence, Tuple

import numpy as np

from esfpy.preorders.preorder import Score
from esfpy.verdict import Verdict, Witness

logger = logging.getLogger(__name__)

AXIOM_ENTRY_MAX = 6
AXIOM_LENGTH_MAX = 4


def _sum(values: Sequence[int]) -> Score:
    return sum(values)


def _max(values: Sequence[int]) -> Score:
    return max(values)


def _first(values: Sequence[int]) -> Score:
    return values[0]


@dataclass(frozen=True)
class AggregationFunction:
    """
    F over tuples of distances from the top level. The aggregated value of a world is a cost:
    the world with the smaller F is the more plausible one.
    """

    name: str
    eval: Callable[[Sequence[int]], Score]
    reduce: Callable[..., np.ndarray] | None = None

    def __call__(self, values: Sequence[int]) -> Score:
        return self.eval(values)

    def over(self, stacked: np.ndarray) -> np.ndarray:
        # aggregates along axis 0 of a stacked (agents, ..., worlds) array
        assert self.reduce is not None, f"{self.name} has no vectorised form"
        return self.reduce(stacked, axis=0)


SUM = AggregationFunction("sum", _sum, np.sum)
MAX = AggregationFunction("max", _max, np.max)
# Not an aggregation function; kept as the stock negative case for aggregation_axioms.
FIRST_PROJECTION = AggregationFunction("first", _first)


def _tuples() -> List[Tuple[int, ...]]:
    found = []
    for length in range(1, AXIOM_LENGTH_MAX + 1):
        found.extend(product(range(AXIOM_ENTRY_MAX + 1), repeat=length))
    return found


def _identity(f: AggregationFunction, values: Tuple[int, ...]) -> Witness | None:
    if len(values) == 1 and f(values) != values[0]:
        return Witness("Identity", values=values, note=f"F({values[0]}) = {f(values)}")
    return None


def _symmetry(f: AggregationFunction, values: Tuple[int, ...]) -> Witness | None:
    reference = f(values)
    for permuted in permutations(values):
        if f(permuted) != reference:
            return Witness("Symmetry", values=values + permuted,
                           note=f"F{values} = {reference} but F{permuted} = {f(permuted)}")
    return None


def _monotony(f: AggregationFunction, values: Tuple[int, ...]) -> Witness | None:
    reference = f(values)
    for position, x in enumerate(values):
        for y in range(x):
            # lowering one entry must not raise F
            lowered = values[:position] + (y,) + values[position + 1:]
            if f(lowered) > reference:
                return Witness("Monotony", values=values + lowered,
                               note=f"F{values} = {reference} < F{lowered} = {f(lowered)}")
    return None


def _minimality(f: AggregationFunction, values: Tuple[int, ...]) -> Witness | None:
    if (f(values) == 0) != all(v == 0 for v in values):
        return Witness("Minimality", values=values, note=f"F{values} = {f(values)}")
    return None


AXIOMS = (("Identity", _identity), ("Symmetry", _symmetry), ("Monotony", _monotony), ("Minimality", _minimality))


def aggregation_axioms(f: AggregationFunction) -> Verdict:
    """
    Exhaustive check of Identity, Symmetry, Monotony and Minimality over every tuple of length up to 4
    with entries up to 6. The witness belongs to the first failing axiom in that order; `detail` lists all.
    """
    scope = f"tuples of length <= {AXIOM_LENGTH_MAX}, entries <= {AXIOM_ENTRY_MAX}"
    subject = f"{f.name}/aggregation"
    failures: List[Witness] = []
    tuples = _tuples()
    for _, axiom in AXIOMS:
        # one witness per failing axiom
        for values in tuples:
            witness = axiom(f, values)
            if witness is not None:
                failures.append(witness)
                break
    if not failures:
        logger.info("%s satisfies the aggregation axioms (%d tuples)", f.name, len(tuples))
        return Verdict.holds(subject, scope)
    return Verdict.fails(subject, scope, failures[0], detail=", ".join(w.postulate for w in failures))
