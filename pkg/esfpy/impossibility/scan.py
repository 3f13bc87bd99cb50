"""
Exhaustive scan of the formula space.

Each image preorder covers a set of (triple, shape) pairs, kept as a 52-bit mask (bit 13·t + shape for the t-th
world triple). The formulas with three or four models have a single image each, so their coverage is a
constant. Slab i fixes the images of the six two-model formulas; inside a slab the 28,561 choices for the
one-model formulas are a single numpy vector.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field
from functools import cache
from itertools import batched
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from esfpy.impossibility.formulas import TRIPLE_TYPES, FormulaSpace, ShapeType, TripleType, classify_shape
from esfpy.preorders.preorder import TRIPLE_SHAPES, world_triples
from esfpy.preorders.space import state_space

logger = logging.getLogger(__name__)

SHAPES = len(TRIPLE_SHAPES)
TRIPLES = len(world_triples(4))
FULL = np.uint64((1 << (SHAPES * TRIPLES)) - 1)

ONE_MODEL_TYPES = (ShapeType.T1, ShapeType.T2, ShapeType.T3, ShapeType.T4)
TWO_MODEL_TYPES = (ShapeType.D1, ShapeType.D2)
# one-model distributions are keyed by sum of 5**type over the four formulas
KEY_BASE = 5
KEY_COUNT = KEY_BASE ** len(ONE_MODEL_TYPES)


def _bits_of_type(kind: TripleType) -> np.uint64:
    mask = 0
    for t in range(TRIPLES):
        for code, found in enumerate(TRIPLE_TYPES):
            if found == kind:
                mask |= 1 << (t * SHAPES + code)
    return np.uint64(mask)


S4_BITS = _bits_of_type(TripleType.S4)
S3_BITS = _bits_of_type(TripleType.S3)


class Distribution(NamedTuple):
    n: Tuple[int, ...]  # one-model images of type T1..T4
    m: Tuple[int, ...]  # two-model images of type D1, D2

    def __str__(self):
        return "{(" + ",".join(map(str, self.n)) + "), (" + ",".join(map(str, self.m)) + ")}"


def decode_key(key: int) -> Tuple[int, ...]:
    return tuple((key // KEY_BASE ** i) % KEY_BASE for i in range(len(ONE_MODEL_TYPES)))


def _combined(per_formula: List[np.ndarray], combine) -> np.ndarray:
    # combines one value per formula over the whole choice grid, the last formula varying fastest
    k = len(per_formula)
    total = None
    for axis, values in enumerate(per_formula):
        shaped = values.reshape([-1 if a == axis else 1 for a in range(k)])
        total = shaped if total is None else combine(total, shaped)
    return np.ascontiguousarray(total).ravel()


@dataclass(frozen=True)
class ScanTables:
    fixed: np.uint64
    two_model_formulas: int
    slab_masks: np.ndarray  # [729] coverage of the two-model images
    slab_d2: np.ndarray  # [729] number of D2 images
    inner_masks: np.ndarray  # [28561] coverage of the one-model images
    inner_keys: np.ndarray  # [28561] distribution key of the one-model images


@cache
def scan_tables() -> ScanTables:
    formulas = FormulaSpace()
    space = state_space(formulas.world_count)
    # weights[s, t]: the bit of the shape state s shows on triple t
    weights = np.uint64(1) << (np.arange(TRIPLES, dtype=np.uint64) * np.uint64(SHAPES)
                               + space.triple_shapes.astype(np.uint64))
    coverage = np.bitwise_or.reduce(weights, axis=1)

    def indices(formula):
        return np.array([space.index_of(tp) for tp in formulas.choices(formula)], dtype=np.int64)

    by_models = {k: [f for f in formulas.formulas if f.models == k] for k in range(1, formulas.world_count + 1)}
    fixed = np.uint64(0)
    # three and four models leave a single image
    for f in by_models[3] + by_models[4]:
        (only,) = indices(f)
        fixed |= coverage[only]
    assert formulas.formulas[-4:] == tuple(by_models[1]), "one-model formulas must vary fastest"

    two = [indices(f) for f in by_models[2]]
    d2 = [np.array([classify_shape(space[s]) == ShapeType.D2 for s in choice], dtype=np.int64) for choice in two]
    one = [indices(f) for f in by_models[1]]
    keys = [np.array([KEY_BASE ** ONE_MODEL_TYPES.index(classify_shape(space[s])) for s in choice], dtype=np.int64)
            for choice in one]
    tables = ScanTables(
        fixed=fixed,
        two_model_formulas=len(two),
        slab_masks=_combined([coverage[c] for c in two], np.bitwise_or),
        slab_d2=_combined(d2, np.add),
        inner_masks=_combined([coverage[c] for c in one], np.bitwise_or),
        inner_keys=_combined(keys, np.add),
    )
    assert len(tables.slab_masks) * len(tables.inner_masks) == formulas.assignment_count, "scan grid size"
    logger.debug("formula scan tables: %d slabs of %d", len(tables.slab_masks), len(tables.inner_masks))
    return tables


@dataclass
class SlabResult:
    slab: int
    satisfying: int
    first: Optional[int]
    covering: np.ndarray  # [KEY_COUNT] assignments covering every chain, per one-model distribution
    best_s3: np.ndarray  # [KEY_COUNT] most single-top patterns among those, -1 if none


def scan_slab(slab: int) -> SlabResult:
    tables = scan_tables()
    total = tables.fixed | tables.slab_masks[slab] | tables.inner_masks
    full = total == FULL
    first = int(full.argmax()) + slab * len(total) if full.any() else None
    # distribution rows only count assignments that reach all 24 chains
    chains = (total & S4_BITS) == S4_BITS
    keys = tables.inner_keys[chains]
    best = np.full(KEY_COUNT, -1, dtype=np.int16)
    np.maximum.at(best, keys, np.bitwise_count(total[chains] & S3_BITS).astype(np.int16))
    return SlabResult(slab, int(full.sum()), first, np.bincount(keys, minlength=KEY_COUNT), best)


@dataclass(frozen=True)
class DistributionRecord:
    covering: int
    max_s3: int


@dataclass
class ScanReport:
    assignments: int = 0
    satisfying: int = 0
    first_satisfying: Optional[int] = None
    distributions: Dict[Distribution, DistributionRecord] = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def impossible(self) -> bool:
        return self.assignments > 0 and self.satisfying == 0


def run_exhaustive(jobs: int = 1, progress: bool = False, slabs: Optional[Sequence[int]] = None) -> ScanReport:
    """Every formula-space assignment is checked for full shape coverage; none should pass."""
    started = time.perf_counter()
    tables = scan_tables()
    # a subset of slabs scans part of the space, in the given order
    slabs = range(len(tables.slab_masks)) if slabs is None else list(slabs)
    report = ScanReport()
    covering = np.zeros((tables.two_model_formulas + 1, KEY_COUNT), dtype=np.int64)
    best = np.full(covering.shape, -1, dtype=np.int16)
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else nullcontext()
    with pool as executor, tqdm(total=len(slabs), desc="formula space", unit="slab", disable=not progress,
                                leave=False) as bar:
        for batch in batched(slabs, max(1, jobs * 4)):
            results = executor.map(scan_slab, batch) if executor is not None else map(scan_slab, batch)
            for result in results:
                bar.update()
                report.assignments += len(tables.inner_masks)
                report.satisfying += result.satisfying
                if report.first_satisfying is None and result.first is not None:
                    report.first_satisfying = result.first
                d2 = int(tables.slab_d2[result.slab])
                covering[d2] += result.covering
                best[d2] = np.maximum(best[d2], result.best_s3)
    for d2, key in zip(*np.nonzero(covering)):
        m = (tables.two_model_formulas - int(d2), int(d2))
        report.distributions[Distribution(decode_key(int(key)), m)] = DistributionRecord(
            int(covering[d2, key]), int(best[d2, key]))
    report.elapsed = time.perf_counter() - started
    logger.info("formula space: %d assignments, %d cover every shape, %.1fs", report.assignments,
                report.satisfying, report.elapsed)
    return report
