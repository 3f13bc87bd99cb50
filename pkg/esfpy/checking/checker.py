"""
Postulate checking entry points.

Every syntactic postulate quantifies constraints over the scope's constraint set and every semantic one over
world pairs; both run over all profiles of every society within scope. A Satisfied verdict is certified for
societies up to scope.verify_society_max, a Violated one carries the first witness found up to
scope.refute_society_max, already replayed through the pure operator path.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from esfpy.checking.direct import (
    find_collision,
    find_label_dependence,
    find_maximality_failure,
    find_missing_shape,
    find_richness_failure,
    find_unanimity_failure,
    richness_example,
    singleton_images,
)
from esfpy.checking.expected import EXPECTED_TABLE1, WITNESS_SIZES
from esfpy.checking.grid import GRID_POSTULATES, check_grid_cost, context_of, run_grid
from esfpy.checking.ids import EQUIVALENCES, SUPPLEMENTARY_COLUMNS, TABLE1_COLUMNS, PostulateId
from esfpy.checking.replay import Explainer, constraint_list, replay, result
from esfpy.checking.scope import CheckScope
from esfpy.operators.fusion import FusionOperator, all_operators
from esfpy.societies.profile import Profile, Society
from esfpy.types import AgentId
from esfpy.verdict import Status, Verdict, Witness

logger = logging.getLogger(__name__)

DIRECT_POSTULATES: Tuple[PostulateId, ...] = (
    PostulateId.ESF2,
    PostulateId.ESF5,
    PostulateId.P1,
    PostulateId.MAX,
    PostulateId.SD,
    PostulateId.U,
    PostulateId.SEM_U,
)


def subject_of(op: FusionOperator, pid: PostulateId) -> str:
    return f"{op.name}/{pid.label}"


def _direct(op: FusionOperator, pid: PostulateId, scope: CheckScope) -> Tuple[Optional[Witness], str]:
    match pid:
        case PostulateId.ESF2:
            return find_label_dependence(op, scope)
        case PostulateId.ESF5 | PostulateId.P1:
            return find_collision(op, scope, semantic=pid == PostulateId.P1), "all pairs of singleton profiles"
        case PostulateId.MAX:
            return find_maximality_failure(op, scope), "all singleton profiles"
        case PostulateId.SD:
            return find_missing_shape(op, scope), "every agent, every world triple, all 13 shapes"
        case PostulateId.U | PostulateId.SEM_U:
            return find_unanimity_failure(op, scope, semantic=pid == PostulateId.SEM_U), "all unanimous profiles"
    raise ValueError(f"{pid.label} is not a direct check")


def check_many(op: FusionOperator, pids: Sequence[PostulateId], scope: CheckScope = CheckScope()
               ) -> Dict[PostulateId, Verdict]:
    """Checks several postulates, sharing one pass over the profile grid."""
    started = time.perf_counter()
    described = scope.describe()
    verdicts: Dict[PostulateId, Verdict] = {}
    grid = [pid for pid in pids if pid in GRID_POSTULATES]
    # refuse an oversized grid before spending time on the direct checks
    if grid:
        check_grid_cost(op, grid, scope)
    for pid in pids:
        if pid in DIRECT_POSTULATES:
            witness, detail = _direct(op, pid, scope)
            verdicts[pid] = (Verdict.holds(subject_of(op, pid), described, detail) if witness is None
                             else Verdict.fails(subject_of(op, pid), described, witness))
    if grid:
        outcome = run_grid(op, grid, scope)
        explainer = Explainer(op, scope)
        for pid in grid:
            found = outcome.first(pid)
            if found is None:
                verdicts[pid] = Verdict.holds(subject_of(op, pid), described)
                continue
            society, hit = found
            detail = f"first violation in society {society}"
            verdicts[pid] = Verdict.fails(subject_of(op, pid), described, explainer.explain(pid, society, hit), detail)
    unknown = [pid for pid in pids if pid not in verdicts]
    if unknown:
        raise ValueError(f"No checking procedure for {', '.join(p.label for p in unknown)}")
    logger.info("%s: checked %s in %.1fs", op.name, ", ".join(p.label for p in pids), time.perf_counter() - started)
    return {pid: verdicts[pid] for pid in pids}


def check(op: FusionOperator, pid: PostulateId, scope: CheckScope = CheckScope()) -> Verdict:
    return check_many(op, [pid], scope)[pid]


def check_dictator(op: FusionOperator, scope: CheckScope = CheckScope()
                   ) -> Tuple[Dict[Society, Tuple[AgentId, ...]], Verdict]:
    """Agents satisfying property (d) in every society of scope; ESF-D holds iff none of these is empty."""
    outcome = run_grid(op, [PostulateId.SEM_D], scope, stop_at_first=False)
    dictators: Dict[Society, Tuple[AgentId, ...]] = {}
    for society in outcome.scanned.get(PostulateId.SEM_D, []):
        # members never refuted in this society
        refuted = outcome.states.get((PostulateId.SEM_D, society), {}).get("refuted", {})
        dictators[society] = tuple(a for pos, a in enumerate(society.members) if pos not in refuted)
    subject = subject_of(op, PostulateId.D)
    found = outcome.first(PostulateId.SEM_D)
    if found is None:
        return dictators, Verdict.holds(subject, scope.describe(), "every society has a dictator")
    society, hit = found
    witness = Explainer(op, scope).explain(PostulateId.SEM_D, society, hit)
    return dictators, Verdict.fails(subject, scope.describe(), witness, f"no dictator in society {society}")


# operator name -> postulate -> verdict, with the published pattern to compare against
@dataclass
class Table1:
    scope: CheckScope
    rows: Dict[str, Dict[PostulateId, Verdict]] = field(default_factory=dict)
    timing: Dict[str, float] = field(default_factory=dict)

    @property
    def columns(self) -> Tuple[PostulateId, ...]:
        return TABLE1_COLUMNS

    def cell(self, name: str, pid: PostulateId) -> Verdict:
        return self.rows[name][pid]

    def mismatches(self) -> List[Tuple[str, PostulateId]]:
        # published cells the run does not reproduce, Unresolved ones included
        wrong = []
        for name, expected in EXPECTED_TABLE1.items():
            for pid, holds in expected.items():
                verdict = self.rows.get(name, {}).get(pid)
                if verdict is None:
                    continue
                if verdict.status == Status.Unresolved or verdict.satisfied != holds:
                    wrong.append((name, pid))
        return wrong

    def matches(self) -> bool:
        return not self.mismatches()


def _mark_unresolved(name: str, pid: PostulateId, verdict: Verdict, scope: CheckScope) -> Verdict:
    # a satisfied cell published as violated is unresolved at this scope, not a confirmation
    if not verdict.satisfied or EXPECTED_TABLE1.get(name, {}).get(pid, True):
        return verdict
    needed = WITNESS_SIZES.get((name, pid))
    hint = f", the known witness needs {needed} agents" if needed else ""
    logger.warning("%s: no violation found up to %d agents%s", verdict.subject, scope.refute_society_max, hint)
    return Verdict(verdict.subject, Status.Unresolved, verdict.scope,
                   detail=f"published as violated, no witness up to {scope.refute_society_max} agents{hint}")


def run_table1(scope: CheckScope = CheckScope(), operators: Optional[Sequence[FusionOperator]] = None,
               supplementary: bool = False) -> Table1:
    table = Table1(scope)
    columns = TABLE1_COLUMNS + (SUPPLEMENTARY_COLUMNS if supplementary else ())
    for op in operators or all_operators():
        started = time.perf_counter()
        verdicts = check_many(op, columns, scope)
        table.rows[op.name] = {pid: _mark_unresolved(op.name, pid, v, scope) for pid, v in verdicts.items()}
        table.timing[op.name] = time.perf_counter() - started
        logger.info("%s row done in %.1fs", op.name, table.timing[op.name])
    return table


def _sampled_full_independence(op: FusionOperator, scope: CheckScope) -> Tuple[Optional[Witness], int]:
    # Φ' agrees with Φ member by member on every constraint entailing E, so the premise holds by construction
    ctx = context_of(scope)
    space = ctx.space
    best = space.best[singleton_images(op, ctx)]
    constraints = constraint_list(ctx.constraints)
    rng = np.random.default_rng(scope.seed)
    societies = scope.societies(scope.verify_society_max)
    drawn = 0
    for _ in range(scope.sample_budget):
        society = societies[int(rng.integers(len(societies)))]
        constraint = constraints[int(rng.integers(len(constraints)))]
        mask = constraint.beliefs.mask
        # nonempty subsets of the constraint's models
        subs = [m for m in range(1, mask + 1) if m & ~mask == 0]
        states = rng.integers(space.size, size=society.size)
        others = []
        for s in states:
            agreeing = np.flatnonzero((best[:, subs] == best[s, subs]).all(axis=1))
            others.append(int(agreeing[rng.integers(len(agreeing))]))
        first = Profile(society, tuple(space[int(s)] for s in states))
        second = Profile(society, tuple(space[s] for s in others))
        drawn += 1
        if result(op, first, constraint) != result(op, second, constraint):
            states_field = (constraint.state,) if constraint.state is not None else ()
            witness = Witness(PostulateId.I.name, society, (first, second), constraints=(constraint.beliefs,),
                              constraint_states=states_field, note="full form, premise holds for every E' entailing E")
            assert replay(op, witness), f"sampled independence witness does not replay: {witness}"
            return witness, drawn
    return None, drawn


def cross_validate(op: FusionOperator, pair: Tuple[PostulateId, PostulateId], scope: CheckScope = CheckScope()
                   ) -> Verdict:
    # a syntactic postulate and its semantic characterization must agree at scope
    if pair not in EQUIVALENCES:
        known = ", ".join(f"({a.label}, {b.label})" for a, b in EQUIVALENCES)
        raise ValueError(f"({pair[0].label}, {pair[1].label}) is not a proven equivalence, known: {known}")
    syntactic, semantic = pair
    verdicts = check_many(op, list(pair), scope)
    evidence = [(pid.label, verdicts[pid].status.name) for pid in pair]
    witness = verdicts[syntactic].witness or verdicts[semantic].witness
    subject = f"{op.name}/{syntactic.label}~{semantic.label}"
    agree = verdicts[syntactic].status == verdicts[semantic].status
    # the grid decides the reduced form of I only
    if agree and syntactic == PostulateId.I:
        full, drawn = _sampled_full_independence(op, scope)
        evidence.append(("full form samples", str(drawn)))
        if full is not None and verdicts[syntactic].satisfied:
            return Verdict(subject, Status.Violated, scope.describe(), full,
                           "reduced form holds but a sampled full-form instance fails", tuple(evidence))
    if not agree:
        logger.error("%s: %s is %s but %s is %s", op.name, syntactic.label, verdicts[syntactic].status.name,
                     semantic.label, verdicts[semantic].status.name)
        return Verdict(subject, Status.Violated, scope.describe(), witness, "disagreement", tuple(evidence))
    return Verdict(subject, Status.Satisfied, scope.describe(), witness,
                   f"both {verdicts[syntactic].status.name}", tuple(evidence))


@dataclass(frozen=True)
class Implication:
    premises: Tuple[PostulateId, ...]
    conclusion: PostulateId

    def __str__(self):
        return f"({' ∧ '.join(p.label for p in self.premises)}) ⟹ {self.conclusion.label}"


IMPLICATIONS: Tuple[Implication, ...] = (
    Implication((PostulateId.ESF2, PostulateId.ESF7, PostulateId.ESF8), PostulateId.U),
    Implication((PostulateId.ESF7, PostulateId.ESF8W), PostulateId.P),
    Implication((PostulateId.U, PostulateId.I), PostulateId.P),
    Implication((PostulateId.D,), PostulateId.P),
    Implication((PostulateId.SD, PostulateId.P, PostulateId.I), PostulateId.D),
    Implication((PostulateId.SD, PostulateId.ESF7, PostulateId.ESF8W, PostulateId.I), PostulateId.D),
    Implication((PostulateId.SD, PostulateId.U, PostulateId.I), PostulateId.D),
    Implication((PostulateId.ESF8,), PostulateId.ESF8W),
)


def _evaluated(row: Mapping[PostulateId, Verdict], pid: PostulateId) -> Optional[bool]:
    verdict = row.get(pid)
    if verdict is None or verdict.status not in (Status.Satisfied, Status.Violated):
        return None
    return verdict.satisfied


def metatheorem_defects(matrix: Mapping[str, Mapping[PostulateId, Verdict]]) -> List[Tuple[str, str]]:
    defects = []
    for name, row in matrix.items():
        for implication in IMPLICATIONS:
            premises = [_evaluated(row, p) for p in implication.premises]
            if all(p is True for p in premises) and _evaluated(row, implication.conclusion) is False:
                defects.append((name, f"{implication} broken: premises hold, {implication.conclusion.label} violated"))
        # only under P3 and P4 do P2 and maximality coincide
        if _evaluated(row, PostulateId.P3) and _evaluated(row, PostulateId.P4):
            p2, maximality = _evaluated(row, PostulateId.P2), _evaluated(row, PostulateId.MAX)
            if p2 is not None and maximality is not None and p2 != maximality:
                defects.append((name, "P2 ⟺ MAX broken under P3 ∧ P4"))
    return defects


def check_metatheorems(matrix: Mapping[str, Mapping[PostulateId, Verdict]]) -> Verdict:
    defects = metatheorem_defects(matrix)
    scope = f"{len(matrix)} operators, {len(IMPLICATIONS) + 1} implications"
    if not defects:
        return Verdict.holds("metatheorems", scope)
    for name, message in defects:
        logger.error("%s: %s", name, message)
    return Verdict("metatheorems", Status.Violated, scope, detail=f"{len(defects)} defects", evidence=tuple(defects))


def check_prop5_consequences(op: FusionOperator, scope: CheckScope = CheckScope()) -> Verdict:
    subject = f"{op.name}/richness"
    standard_domain = check(op, PostulateId.SD, scope)
    if not standard_domain.satisfied:
        logger.warning("%s: skipped, ESF-SD does not hold", subject)
        return Verdict.skipped(subject, scope.describe(), f"precondition ESF-SD is {standard_domain.status.name}")
    witness, checked = find_richness_failure(op, scope)
    if witness is not None:
        return Verdict.fails(subject, scope.describe(), witness)
    space = context_of(scope).space
    first, second = richness_example(op, scope, 0, (0, 1, 2))
    evidence = (("instances", str(checked)),
                ("example (i) for E_i=" + space[0].render(), space[first].render()),
                ("example (ii) for E_i=" + space[0].render(), space[second].render()))
    return Verdict(subject, Status.Satisfied, scope.describe(), detail=f"{checked} instances", evidence=evidence)


REDUCIBLE: Tuple[PostulateId, ...] = (PostulateId.U, PostulateId.P, PostulateId.D)


def check_reduction(op: FusionOperator, pid: PostulateId, scope: CheckScope = CheckScope()) -> Verdict:
    # the at-most-two-models constraint set decides the postulate exactly like the full one
    if pid not in REDUCIBLE:
        raise ValueError(f"{pid.label} has no constraint reduction, reducible: {', '.join(p.label for p in REDUCIBLE)}")
    full = check(op, pid, scope.with_(constraint_max_models=None))
    reduced = check(op, pid, scope.with_(constraint_max_models=2))
    subject = f"{op.name}/{pid.label} reduction"
    evidence = (("all constraints", full.status.name), ("at most two models", reduced.status.name))
    status = Status.Satisfied if full.status == reduced.status else Status.Violated
    return Verdict(subject, status, scope.describe(), full.witness or reduced.witness, evidence=evidence)


FAITHFUL = (PostulateId.P1, PostulateId.P2, PostulateId.P3, PostulateId.P4)
QUASIFAITHFUL = (PostulateId.P1, PostulateId.P2, PostulateId.P3, PostulateId.P4W)
BASIC = (PostulateId.ESF1, PostulateId.ESF2, PostulateId.ESF3, PostulateId.ESF4)
FUSION = BASIC + (PostulateId.ESF5, PostulateId.ESF6, PostulateId.ESF7, PostulateId.ESF8)
QUASIFUSION = BASIC + (PostulateId.ESF5, PostulateId.ESF6, PostulateId.ESF7, PostulateId.ESF8W)

_MATCHING_CLASS = {
    "faithful": "ES fusion operator",
    "quasifaithful": "ES quasifusion operator",
    "basic": "ES basic fusion operator",
}


@dataclass(frozen=True)
class Classification:
    assignment: str
    operator: str
    verdicts: Dict[PostulateId, Verdict]

    @property
    def consistent(self) -> bool:
        return _MATCHING_CLASS.get(self.assignment) == self.operator

    def __str__(self):
        return f"{self.assignment} assignment, {self.operator}"


def classify_assignment(op: FusionOperator, scope: CheckScope = CheckScope()) -> Classification:
    pids = tuple(dict.fromkeys(FAITHFUL + QUASIFAITHFUL + FUSION + QUASIFUSION))
    verdicts = check_many(op, pids, scope)

    def all_hold(group) -> bool:
        return all(verdicts[p].satisfied for p in group)

    # strongest class first
    assignment = "faithful" if all_hold(FAITHFUL) else "quasifaithful" if all_hold(QUASIFAITHFUL) else "basic"
    if not all_hold(BASIC):
        operator = "not a basic fusion operator"
    elif all_hold(FUSION):
        operator = "ES fusion operator"
    elif all_hold(QUASIFUSION):
        operator = "ES quasifusion operator"
    else:
        operator = "ES basic fusion operator"
    found = Classification(assignment, operator, verdicts)
    if not found.consistent:
        logger.error("%s: %s disagrees with %s", op.name, assignment, operator)
    return found

