from esfpy.logic import BeliefSet, VarSet, parse_formula
from esfpy.operators import FusionOperator, all_operators, make_operator
from esfpy.preorders import TotalPreorder, parse_preorder
from esfpy.societies import Profile, Society, parse_profile

__all__ = [
    "BeliefSet",
    "FusionOperator",
    "Profile",
    "Society",
    "TotalPreorder",
    "VarSet",
    "all_operators",
    "make_operator",
    "parse_formula",
    "parse_preorder",
    "parse_profile",
]
