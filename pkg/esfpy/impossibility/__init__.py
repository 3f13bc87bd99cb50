from esfpy.impossibility.counting import (
    PROOF_COVERAGE,
    TABLE3,
    CountingReport,
    summed_candidates,
    verify_counting_argument,
)
from esfpy.impossibility.formulas import (
    S3_PATTERNS,
    S4_PATTERNS,
    FormulaSpace,
    FormulaSpaceAssignment,
    MissingShape,
    ShapeCoverage,
    ShapeReport,
    ShapeType,
    TripleType,
    classify_shape,
    classify_triple,
    covers_sd,
    enumerate_assignments,
    pattern_counts,
    shape_coverage_counts,
)
from esfpy.impossibility.scan import Distribution, DistributionRecord, ScanReport, run_exhaustive

__all__ = [
    "PROOF_COVERAGE",
    "S3_PATTERNS",
    "S4_PATTERNS",
    "TABLE3",
    "CountingReport",
    "Distribution",
    "DistributionRecord",
    "FormulaSpace",
    "FormulaSpaceAssignment",
    "MissingShape",
    "ScanReport",
    "ShapeCoverage",
    "ShapeReport",
    "ShapeType",
    "TripleType",
    "classify_shape",
    "classify_triple",
    "covers_sd",
    "enumerate_assignments",
    "pattern_counts",
    "run_exhaustive",
    "shape_coverage_counts",
    "summed_candidates",
    "verify_counting_argument",
]
