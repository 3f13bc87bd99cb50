from esfpy.operators.aggregation import (
    FIRST_PROJECTION,
    MAX,
    SUM,
    AggregationFunction,
    aggregation_axioms,
)
from esfpy.operators.assignments import Assignment, AssignmentKind, associate_assignments, make_assignment
from esfpy.operators.fusion import (
    OPERATOR_KINDS,
    OPERATOR_LABELS,
    FusionOperator,
    all_operators,
    canonical_state,
    is_structure_preserving,
    make_operator,
)
from esfpy.operators.recovery import RecoveryError, recover_assignment, verify_b_rep

__all__ = [
    "FIRST_PROJECTION",
    "MAX",
    "OPERATOR_KINDS",
    "OPERATOR_LABELS",
    "SUM",
    "AggregationFunction",
    "Assignment",
    "AssignmentKind",
    "FusionOperator",
    "RecoveryError",
    "aggregation_axioms",
    "all_operators",
    "associate_assignments",
    "canonical_state",
    "is_structure_preserving",
    "make_assignment",
    "make_operator",
    "recover_assignment",
    "verify_b_rep",
]
