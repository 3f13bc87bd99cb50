"""
The counting argument: which distributions of image types can cover all 24 chains, and how many of the 12
single-top patterns they can then reach.

Per-type summation decides impossibility on its own: coverage of a union never exceeds the summed coverage of
its members, so when no distribution able to reach every chain can sum to 12 single tops, no assignment
satisfies the standard domain. The exhaustive scan, when given, is checked against that bound and against the
published table; it never feeds the conclusion.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterator, List, Optional, Tuple

from esfpy.impossibility.formulas import (
    FormulaSpace,
    ShapeCoverage,
    ShapeType,
    TripleType,
    coverage_by_labeling,
    coverage_of,
    pattern_counts,
    shape_coverage_counts,
)
from esfpy.impossibility.scan import ONE_MODEL_TYPES, TWO_MODEL_TYPES, Distribution, ScanReport

logger = logging.getLogger(__name__)

ONE_MODEL_FORMULAS = 4
TWO_MODEL_FORMULAS = 6

# Per-type coverage as stated in the impossibility proof.
PROOF_COVERAGE: Dict[ShapeType, ShapeCoverage] = {
    ShapeType.T1: ShapeCoverage(4, 0),
    ShapeType.T2: ShapeCoverage(2, 2),
    ShapeType.T3: ShapeCoverage(2, 1),
    ShapeType.T4: ShapeCoverage(0, 3),
    ShapeType.D2: ShapeCoverage(2, 0),
    ShapeType.D1: ShapeCoverage(0, 2),
}

# Distributions covering every chain, with the most single-top patterns they cover.
TABLE3: Dict[Distribution, int] = {
    Distribution((4, 0, 0, 0), (0, 6)): 0,
    Distribution((4, 0, 0, 0), (1, 5)): 2,
    Distribution((4, 0, 0, 0), (2, 4)): 4,
    Distribution((3, 1, 0, 0), (0, 6)): 2,
    Distribution((3, 1, 0, 0), (1, 5)): 4,
    Distribution((3, 0, 1, 0), (0, 6)): 1,
    Distribution((3, 0, 1, 0), (1, 5)): 3,
    Distribution((3, 0, 0, 1), (0, 6)): 3,
}


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    for head in product(range(total + 1), repeat=parts - 1):
        if sum(head) <= total:
            yield head + (total - sum(head),)


def summed_candidates(coverage: Dict[ShapeType, ShapeCoverage],
                      fixed: ShapeCoverage = ShapeCoverage(0, 0)) -> Dict[Distribution, int]:
    """
    Distributions whose summed chain coverage, plus what the fixed images cover, reaches every chain,
    with their summed single-top coverage.
    """
    chains = pattern_counts()[TripleType.S4]
    found = {}
    for n in compositions(ONE_MODEL_FORMULAS, len(ONE_MODEL_TYPES)):
        for m in compositions(TWO_MODEL_FORMULAS, len(TWO_MODEL_TYPES)):
            counted = list(zip(n, ONE_MODEL_TYPES)) + list(zip(m, TWO_MODEL_TYPES))
            if fixed.s4 + sum(k * coverage[t].s4 for k, t in counted) >= chains:
                found[Distribution(n, m)] = fixed.s3 + sum(k * coverage[t].s3 for k, t in counted)
    return found


def fixed_coverage(space: Optional[FormulaSpace] = None) -> ShapeCoverage:
    # summed coverage of the formulas with three or more models, each of which has a single image
    space = space or FormulaSpace()
    s4 = s3 = 0
    for formula in space.formulas:
        if formula.models <= 2:
            continue
        (image,) = space.choices(formula)
        covered = coverage_of(image)
        s4, s3 = s4 + covered.s4, s3 + covered.s3
    return ShapeCoverage(s4, s3)


def labeling_bound(t: ShapeType) -> ShapeCoverage:
    # componentwise, so the bound stays sound even if labelings disagreed
    seen = coverage_by_labeling(t)
    return ShapeCoverage(max(c.s4 for c in seen), max(c.s3 for c in seen))


@dataclass
class CountingReport:
    coverage: Dict[ShapeType, ShapeCoverage]
    fixed: ShapeCoverage
    summed: Dict[Distribution, int]
    single_tops: int
    rows: Optional[Dict[Distribution, int]] = None
    excluded: List[Distribution] = field(default_factory=list)
    scan: Optional[ScanReport] = None
    defects: List[str] = field(default_factory=list)

    @property
    def impossible(self) -> bool:
        # concluded from the summed bound alone
        return all(reached < self.single_tops for reached in self.summed.values())

    @property
    def holds(self) -> bool:
        return self.impossible and not self.defects


def _check_scan(result: CountingReport, scan: ScanReport) -> List[str]:
    defects = []
    rows = result.rows
    for d in sorted(set(rows) | set(TABLE3)):
        if d not in rows:
            defects.append(f"{d} is in the published table but no assignment with it covers every chain")
        elif d not in TABLE3:
            defects.append(f"{d} covers every chain but is missing from the published table")
        elif rows[d] != TABLE3[d]:
            defects.append(f"{d} reaches {rows[d]} single-top patterns, the published table states {TABLE3[d]}")
    for d, reached in rows.items():
        if d not in result.summed:
            defects.append(f"{d} covers every chain although summation says it cannot")
        elif reached > result.summed[d]:
            defects.append(f"{d} reaches {reached} single-top patterns, above the summed bound {result.summed[d]}")
    if scan.impossible != result.impossible:
        defects.append(f"the scan finds {scan.satisfying} assignments covering every shape "
                       f"but the count concludes impossible={result.impossible}")
    return defects


def verify_counting_argument(scan: Optional[ScanReport] = None) -> CountingReport:
    """
    Derives impossibility from per-type summation. With a scan, its distribution rows are compared with the
    bound and with the published table.
    """
    defects = []
    counts = pattern_counts()
    if (counts[TripleType.S4], counts[TripleType.S3]) != (24, 12):
        defects.append(f"pattern counts {counts[TripleType.S4]}/{counts[TripleType.S3]}, expected 24/12")

    coverage = {}
    for t in ShapeType:
        if len(coverage_by_labeling(t)) > 1:
            defects.append(f"coverage of {t.name} depends on the labeling")
        coverage[t] = labeling_bound(t)
        if shape_coverage_counts(t) != PROOF_COVERAGE[t]:
            defects.append(f"{t.name} covers {tuple(coverage[t])}, the proof states {tuple(PROOF_COVERAGE[t])}")

    fixed = fixed_coverage()
    if fixed != ShapeCoverage(0, 0):
        defects.append(f"formulas with three or more models cover {tuple(fixed)}, the proof assumes none")
    summed = summed_candidates(coverage, fixed)
    result = CountingReport(coverage, fixed, summed, counts[TripleType.S3], defects=defects)
    for d, reached in summed.items():
        if reached >= result.single_tops:
            defects.append(f"summation admits {d} with {reached} single-top patterns")
    logger.info("counting: %d distributions reach every chain, at most %d single-top patterns",
                len(summed), max(summed.values(), default=0))

    if scan is not None:
        result.scan = scan
        result.rows = {d: record.max_s3 for d, record in scan.distributions.items()}
        result.excluded = sorted(d for d in summed if d not in result.rows)
        for d in result.excluded:
            logger.info("%s passes the summed count but no placement covers every chain", d)
        defects += _check_scan(result, scan)
    for defect in defects:
        logger.error("counting argument: %s", defect)
    return result
