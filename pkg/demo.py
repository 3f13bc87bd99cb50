"""
Anne and Bob plan a trip and have four paths to choose from. Each path is a world over {p, q}:
w1 = 11, w2 = 10, w3 = 01, w4 = 00. Anne ranks them w1 > w2 > w3 > w4, Bob only cares that w4 is best.
"""

import logging

from esfpy import BeliefSet, Profile, VarSet, all_operators, parse_formula, parse_profile
from esfpy.checking import CheckScope, check
from esfpy.checking.ids import PostulateId
from esfpy.logic.parsing import format_belief_set
from esfpy.operators import recover_assignment
from esfpy.societies import format_profile

PATHS = {"11": "w1", "10": "w2", "01": "w3", "00": "w4"}

TRIP = """
1: 11 > 10 > 01 > 00   # Anne
2: 00 > 11 10 01       # Bob
"""


def named(beliefs: BeliefSet, varset: VarSet) -> str:
    return "{" + ", ".join(PATHS[varset.render(w)] for w in beliefs.worlds()) + "}"


def main():
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    varset = VarSet()
    profile: Profile = parse_profile(TRIP, varset)
    print(format_profile(profile, varset))
    print()

    anything = BeliefSet.everything(varset.world_count)
    # the car broke down: only the paths where q holds are left
    by_train = parse_formula("q", varset)
    for op in all_operators():
        group = op.assign(profile)
        free = op.result_beliefs(profile, anything)
        constrained = op.result_beliefs(profile, by_train)
        print(f"{op.label:>8}  {group.render(varset):<24} "
              f"free: {named(free, varset):<10} q: {named(constrained, varset)}")
    print()

    # the beliefs alone are enough to get the group ranking back
    for op in all_operators():
        recovered = recover_assignment(op.result_beliefs, profile)
        assert recovered == op.assign(profile), f"{op.name}: recovered {recovered}"
    print("recovered every assignment from its merged beliefs")

    scope = CheckScope(verify_society_max=2, refute_society_max=2)
    for op in all_operators():
        verdict = check(op, PostulateId.D, scope)
        print(verdict)
        if verdict.witness is not None:
            for label, value in verdict.witness.beliefs:
                print(f"    {label}: {format_belief_set(value, varset)}")


if __name__ == "__main__":
    main()
