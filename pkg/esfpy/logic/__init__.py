from esfpy.logic.parsing import FormulaSyntaxError, UnknownVariableError, format_belief_set, parse_formula
from esfpy.logic.worlds import (
    BeliefAlgebra,
    BeliefSet,
    VarSet,
    World,
    belief_algebra,
    conjunction_of,
    disjunction_of,
    nonempty_belief_sets,
)

__all__ = [
    "BeliefAlgebra",
    "BeliefSet",
    "FormulaSyntaxError",
    "UnknownVariableError",
    "VarSet",
    "World",
    "belief_algebra",
    "conjunction_of",
    "disjunction_of",
    "format_belief_set",
    "nonempty_belief_sets",
    "parse_formula",
]
