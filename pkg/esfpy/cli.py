"""
Command line: `esfpy [global flags] <command> ...`.

Exit codes: 0 when the run confirms what was asked (Table 1 reproduced, postulate satisfied, no defects),
1 when it refutes it (mismatch, violation, defect), 2 on bad input or a refused scope.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from esfpy.checking import (
    CheckScope,
    check,
    check_metatheorems,
    classify_assignment,
    default_jobs,
    parse_postulate_id,
    run_table1,
)
from esfpy.coalitions import (
    Coalition,
    check_observations,
    check_propagation,
    is_locally_decisive,
    minimal_decisive,
)
from esfpy.impossibility import TABLE3, FormulaSpace, run_exhaustive, verify_counting_argument
from esfpy.logic.parsing import parse_formula
from esfpy.logic.worlds import VarSet
from esfpy.operators import OPERATOR_KINDS, FusionOperator, RecoveryError, make_operator, recover_assignment
from esfpy.preorders.enumeration import enumerate_all, ordered_bell
from esfpy.preorders.preorder import TotalPreorder, parse_preorder
from esfpy.preorders.space import state_space
from esfpy.reporting import (
    FORMATS,
    Report,
    render_verdict,
    table1_report,
    verdict_record,
    witness_record,
    write_report,
)
from esfpy.societies.profile import (
    Society,
    count_profiles,
    enumerate_profiles,
    format_profile,
    parse_profile,
    two_partitions,
)
from esfpy.verdict import Status

logger = logging.getLogger(__name__)

# exit codes: 1 when some check fails, 2 on bad input or a refused scope
EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_ERROR = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


@dataclass(frozen=True)
class RunConfig:
    command: str
    operators: Tuple[str, ...]
    scope: CheckScope
    fmt: str = "table"
    out: Optional[Path] = None
    jobs: int = 1
    seed: int = 0
    verbosity: int = 0
    tiebreak: Optional[TotalPreorder] = None
    options: Mapping[str, Any] = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        jobs = args.jobs if args.jobs is not None else default_jobs()
        progress = args.progress if args.progress is not None else sys.stderr.isatty()
        scope = CheckScope(
            var_count=args.vars,
            agents=tuple(args.agents),
            verify_society_max=args.verify_max,
            refute_society_max=args.refute_max,
            constraint_mode=args.constraint_mode,
            cost_ceiling=args.cost_ceiling,
            jobs=jobs,
            seed=args.seed,
            experimental=args.experimental,
            progress=progress,
        )
        if getattr(args, "op", None):
            operators = (args.op,)
        else:
            operators = tuple(getattr(args, "ops", None) or OPERATOR_KINDS)
        tiebreak = parse_preorder(args.tiebreak, VarSet.of_size(args.vars)) if args.tiebreak else None
        # everything else is command-specific
        known = {"command", "vars", "agents", "verify_max", "refute_max", "constraint_mode", "cost_ceiling", "jobs",
                 "seed", "experimental", "progress", "format", "out", "verbose", "op", "ops", "tiebreak"}
        options = {k: v for k, v in vars(args).items() if k not in known}
        return cls(args.command, operators, scope, args.format, args.out, jobs, args.seed, args.verbose, tiebreak,
                   options)

    def operator(self, name: Optional[str] = None) -> FusionOperator:
        return make_operator(name or self.operators[0], self.tiebreak)

    def describe(self) -> Dict[str, Any]:
        # JSON-safe form for report headers; progress display and parallelism never change a result
        scope = self.scope
        return {
            "command": self.command,
            "operators": list(self.operators),
            "vars": scope.var_count,
            "agents": list(scope.agents),
            "verify_max": scope.verify_society_max,
            "refute_max": scope.refute_society_max,
            "constraint_mode": scope.constraint_mode,
            "seed": self.seed,
            "tiebreak": self.tiebreak.render() if self.tiebreak is not None else None,
            "options": {k: _json_safe(v) for k, v in sorted(self.options.items())},
        }


def _json_safe(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    return value


def agent_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of agent ids, got '{text}'") from None


def setup_logging(verbosity: int):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def _report(cfg: RunConfig, title: str) -> Report:
    return Report(title, config=cfg.describe())


def _finish(cfg: RunConfig, report: Report, code: int) -> int:
    write_report(report, cfg.fmt, cfg.out)
    return code


def cmd_table1(cfg: RunConfig) -> int:
    operators = [cfg.operator(name) for name in cfg.operators]
    table = run_table1(cfg.scope, operators, supplementary=True)
    metatheorems = check_metatheorems(table.rows)
    report = table1_report(table, metatheorems)
    report.config = cfg.describe()
    mismatches = table.mismatches()
    if mismatches:
        logger.warning("%d Table 1 cells differ from the published pattern", len(mismatches))
    return _finish(cfg, report, EXIT_REFUTED if mismatches else EXIT_OK)


def cmd_check(cfg: RunConfig) -> int:
    op = cfg.operator()
    pid = parse_postulate_id(cfg.options["postulate"])
    verdict = check(op, pid, cfg.scope)
    report = _report(cfg, "check")
    report.results.append(verdict_record(verdict, operator=op.name, postulate=pid.label))
    report.lines = render_verdict(verdict)
    witness_path = cfg.options.get("witness")
    if verdict.witness is not None and witness_path is not None:
        witness_path.write_text(json.dumps(witness_record(verdict.witness), indent=2, ensure_ascii=False) + "\n",
                                encoding="utf-8")
        logger.info("wrote witness to %s", witness_path)
    return _finish(cfg, report, EXIT_OK if verdict.satisfied else EXIT_REFUTED)


def cmd_coalitions(cfg: RunConfig) -> int:
    op = cfg.operator()
    society = Society.of(*cfg.options["society"])
    report = _report(cfg, "coalitions")
    verdicts = []
    local = cfg.options.get("local")
    pair = None
    if local:
        varset = VarSet.of_size(cfg.scope.var_count)
        pair = tuple(parse_formula(text, varset) for text in local)
    # a pair with no coalition searches the minimal locally decisive ones
    if pair and cfg.options.get("coalition"):
        verdicts.append(is_locally_decisive(op, society, Coalition.of(*cfg.options["coalition"]), *pair, cfg.scope))
    else:
        found = minimal_decisive(op, society, cfg.scope, pair)
        for record in found.records:
            report.results.append(verdict_record(record.verdict, record.mode, coalition=str(record.coalition)))
        names = ", ".join(str(c) for c in found.coalitions) or "none"
        kind = "decisive" if pair is None else f"locally decisive for {local[0]} against {local[1]}"
        report.lines.append(f"minimal {kind} coalitions of {society}: {names}")
        if found.dictator is not None:
            report.lines.append(f"dictator: {found.dictator}")
    if cfg.options.get("propagation"):
        verdicts.append(check_propagation(op, society, cfg.scope))
    if cfg.options.get("observations"):
        verdicts.append(check_observations(op, society, cfg.scope))
    for verdict in verdicts:
        report.results.append(verdict_record(verdict))
        report.lines += render_verdict(verdict)
    refuted = any(v.violated for v in verdicts)
    return _finish(cfg, report, EXIT_REFUTED if refuted else EXIT_OK)


def cmd_impossibility(cfg: RunConfig) -> int:
    # neither flag runs both; --counting alone never scans
    exhaustive = cfg.options.get("exhaustive") or not cfg.options.get("counting")
    counting = cfg.options.get("counting") or not cfg.options.get("exhaustive")
    report = _report(cfg, "impossibility")
    ok = True
    scan = None
    if exhaustive:
        scan = run_exhaustive(cfg.jobs, cfg.scope.progress)
        report.timing["scan"] = scan.elapsed
        ok = scan.impossible
        report.results.append({"kind": "scan", "subject": "formula space", "assignments": scan.assignments,
                               "satisfying": scan.satisfying,
                               "status": (Status.Satisfied if scan.impossible else Status.Violated).name})
        report.lines.append(f"scanned {scan.assignments} assignments in {scan.elapsed:.1f}s, "
                            f"{scan.satisfying} satisfy the standard domain")
    if counting:
        result = verify_counting_argument(scan)
        ok = ok and result.holds
        for t, coverage in result.coverage.items():
            report.results.append({"kind": "type", "subject": t.name, "s4": coverage.s4, "s3": coverage.s3})
        report.results.append({"kind": "count", "subject": "summed bound", "candidates": len(result.summed),
                               "max_s3": max(result.summed.values(), default=0), "needed": result.single_tops,
                               "status": (Status.Satisfied if result.impossible else Status.Violated).name})
        report.lines.append(f"summation: {len(result.summed)} distributions reach every chain, at most "
                            f"{max(result.summed.values(), default=0)} of {result.single_tops} single tops")
        if result.rows is not None:
            report.lines.append("distribution                 max single-top  published")
            for d, reached in sorted(result.rows.items()):
                report.results.append({"kind": "distribution", "subject": str(d), "max_s3": reached,
                                       "published": TABLE3.get(d)})
                report.lines.append(f"{str(d):<28} {reached:>14}  {TABLE3.get(d, '-'):>9}")
            for d in result.excluded:
                report.results.append({"kind": "excluded", "subject": str(d), "summed_s3": result.summed[d]})
                report.lines.append(f"{str(d):<28} ruled out by placement")
        for defect in result.defects:
            report.add_defect("counting", defect)
    return _finish(cfg, report, EXIT_OK if ok else EXIT_REFUTED)


def cmd_enumerate(cfg: RunConfig) -> int:
    what = cfg.options["what"]
    limit = cfg.options.get("limit")
    count_only = cfg.options.get("count_only")
    report = _report(cfg, f"enumerate {what}")
    items: List[str] = []
    match what:
        case "preorders":
            worlds = cfg.options.get("worlds") or cfg.scope.world_count
            count = ordered_bell(worlds)
            if not count_only:
                # variable names exist for 2**k worlds, k >= 2
                named = worlds >= 4 and worlds & (worlds - 1) == 0
                shown = zip(range(limit or count), enumerate_all(worlds))
                items = [tp.render() if named else str(tp.levels) for _, tp in shown]
        case "profiles":
            society = Society.of(*(cfg.options.get("society") or cfg.scope.agents[:2]))
            count = count_profiles(society, ordered_bell(cfg.scope.world_count))
            if not count_only:
                shown = enumerate_profiles(society, state_space(cfg.scope.world_count).states)
                items = [format_profile(p).replace("\n", "; ") for _, p in zip(range(limit or 100), shown)]
        case "partitions":
            society = Society.of(*(cfg.options.get("society") or cfg.scope.agents))
            partitions = list(two_partitions(society))
            count = len(partitions)
            if not count_only:
                items = [f"{a} | {b}" for a, b in partitions[:limit or count]]
        case "formulas":
            count = FormulaSpace(cfg.scope.var_count, cfg.scope.experimental).assignment_count
        case _:
            raise ValueError(f"Unknown enumeration '{what}'")
    report.results.append({"kind": "count", "subject": what, "count": count, "items": items})
    report.lines = [str(count)] + items
    return _finish(cfg, report, EXIT_OK)


def _read_profile(cfg: RunConfig):
    varset = VarSet.of_size(cfg.scope.var_count)
    if cfg.options.get("profile"):
        return parse_profile(Path(cfg.options["profile"]).read_text(encoding="utf-8"), varset)
    # inline text uses ; between agents
    return parse_profile(cfg.options["profile_text"].replace(";", "\n"), varset)


def cmd_recover(cfg: RunConfig) -> int:
    op = cfg.operator()
    profile = _read_profile(cfg)
    report = _report(cfg, "recover")
    try:
        recovered = recover_assignment(op.result_beliefs, profile)
    except RecoveryError as e:
        report.add_defect(op.name, f"{e} (worlds {e.worlds})")
        return _finish(cfg, report, EXIT_REFUTED)
    expected = op.assign(profile)
    same = recovered == expected
    report.results.append({"kind": "recovered", "subject": op.name, "preorder": recovered.render(),
                           "assignment": expected.render(),
                           "status": (Status.Satisfied if same else Status.Violated).name})
    report.lines = [f"recovered:  {recovered.render()}", f"assignment: {expected.render()}"]
    if not same:
        report.add_defect(op.name, "recovered preorder differs from the defining assignment")
    return _finish(cfg, report, EXIT_OK if same else EXIT_REFUTED)


def cmd_classify(cfg: RunConfig) -> int:
    op = cfg.operator()
    found = classify_assignment(op, cfg.scope)
    report = _report(cfg, "classify")
    report.results.append({"kind": "classification", "subject": op.name, "assignment": found.assignment,
                           "operator": found.operator, "consistent": found.consistent})
    report.lines = [f"{op.name}: {found}"]
    if not found.consistent:
        report.add_defect(op.name, "semantic and syntactic classifications disagree")
    return _finish(cfg, report, EXIT_OK if found.consistent else EXIT_REFUTED)


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "table1": cmd_table1,
    "check": cmd_check,
    "coalitions": cmd_coalitions,
    "impossibility": cmd_impossibility,
    "enumerate": cmd_enumerate,
    "recover": cmd_recover,
    "classify": cmd_classify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="esfpy", description="Belief merging postulate workbench")
    parser.add_argument("--vars", type=int, default=2, help="propositional variables (default: 2)")
    parser.add_argument("--agents", type=agent_list, default=[1, 2, 3, 4], help="agent ids, e.g. 1,2,3,4")
    parser.add_argument("--verify-max", type=int, default=3, help="largest society certified exhaustively")
    parser.add_argument("--refute-max", type=int, default=4, help="largest society searched for counterexamples")
    parser.add_argument("--constraint-mode", choices=("beliefs", "states"), default="beliefs")
    parser.add_argument("--cost-ceiling", type=int, default=CheckScope.cost_ceiling)
    parser.add_argument("--format", choices=FORMATS, default="table")
    parser.add_argument("--out", type=Path, default=None, help="report file, stdout when absent")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes (default: $ESFPY_JOBS or 1)")
    parser.add_argument("--tiebreak", default=None,
                        help="linear order for the linearized operators, e.g. '11 > 10 > 01 > 00'")
    parser.add_argument("--seed", type=int, default=0, help="seed of the sampled cross-checks")
    parser.add_argument("--experimental", action="store_true", help="allow formula spaces beyond two variables")
    parser.add_argument("--progress", action=argparse.BooleanOptionalAction, default=None)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    commands = parser.add_subparsers(dest="command", required=True)

    table1 = commands.add_parser("table1", help="reproduce the operator/postulate table")
    table1.add_argument("--ops", nargs="+", choices=tuple(OPERATOR_KINDS), default=None)

    check_ = commands.add_parser("check", help="check one postulate for one operator")
    check_.add_argument("--op", required=True, choices=tuple(OPERATOR_KINDS))
    check_.add_argument("--postulate", required=True, help="e.g. ESF-D, ESF8W, SEM_P4W, u")
    check_.add_argument("--witness", type=Path, default=None, help="write the witness here when violated")

    coalitions = commands.add_parser("coalitions", help="decisive coalitions of a society")
    coalitions.add_argument("--op", required=True, choices=tuple(OPERATOR_KINDS))
    coalitions.add_argument("--society", type=agent_list, required=True)
    coalitions.add_argument("--local", nargs=2, metavar=("E", "E2"), default=None,
                            help="local decisiveness for E against E2: of --coalition, or the minimal coalitions")
    coalitions.add_argument("--coalition", type=agent_list, default=None)
    coalitions.add_argument("--propagation", action="store_true")
    coalitions.add_argument("--observations", action="store_true")

    impossibility = commands.add_parser("impossibility", help="formulas as epistemic states")
    impossibility.add_argument("target", choices=("formulas",))
    mode = impossibility.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--counting", action="store_true")

    enumerate_ = commands.add_parser("enumerate", help="count or list preorders, profiles, partitions")
    enumerate_.add_argument("what", choices=("preorders", "profiles", "partitions", "formulas"))
    enumerate_.add_argument("--worlds", type=int, default=None)
    enumerate_.add_argument("--society", type=agent_list, default=None)
    enumerate_.add_argument("--count-only", action="store_true")
    enumerate_.add_argument("--limit", type=int, default=None)

    recover = commands.add_parser("recover", help="recover the assignment behind an operator on a profile")
    recover.add_argument("--op", required=True, choices=tuple(OPERATOR_KINDS))
    source = recover.add_mutually_exclusive_group(required=True)
    source.add_argument("--profile", type=Path, help="profile file, one `agent: preorder` per line")
    source.add_argument("--profile-text", help="inline profile, lines separated by ';'")

    classify = commands.add_parser("classify", help="faithfulness classification of an operator")
    classify.add_argument("--op", required=True, choices=tuple(OPERATOR_KINDS))
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    try:
        cfg = RunConfig.from_args(args)
        logger.info("running %s with %s", cfg.command, cfg.scope.describe())
        return COMMANDS[cfg.command](cfg)
    # ScopeRefused is a RuntimeError
    except (ValueError, RuntimeError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
