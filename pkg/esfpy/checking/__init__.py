from esfpy.checking.checker import (
    IMPLICATIONS,
    Classification,
    Implication,
    Table1,
    check,
    check_dictator,
    check_many,
    check_metatheorems,
    check_prop5_consequences,
    check_reduction,
    classify_assignment,
    cross_validate,
    metatheorem_defects,
    run_table1,
)
from esfpy.checking.expected import EXPECTED_TABLE1
from esfpy.checking.ids import (
    EQUIVALENCES,
    SUPPLEMENTARY_COLUMNS,
    TABLE1_COLUMNS,
    PostulateId,
    parse_postulate_id,
)
from esfpy.checking.replay import Constraint, projective_esf6_instance, replay
from esfpy.checking.scope import CheckScope, ScopeRefused, default_jobs

__all__ = [
    "EQUIVALENCES",
    "EXPECTED_TABLE1",
    "IMPLICATIONS",
    "SUPPLEMENTARY_COLUMNS",
    "TABLE1_COLUMNS",
    "CheckScope",
    "Classification",
    "Constraint",
    "Implication",
    "PostulateId",
    "ScopeRefused",
    "Table1",
    "check",
    "check_dictator",
    "check_many",
    "check_metatheorems",
    "check_prop5_consequences",
    "check_reduction",
    "classify_assignment",
    "cross_validate",
    "default_jobs",
    "metatheorem_defects",
    "parse_postulate_id",
    "projective_esf6_instance",
    "replay",
    "run_table1",
]
