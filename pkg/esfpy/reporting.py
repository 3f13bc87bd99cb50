"""
Report rendering. Every command builds a Report; `table` is for people, `csv` lists the result records one per
row, `json` is the structured form {config, results, defects, timing} plus a `header` holding the creation time,
the only part that changes between identical runs.
"""

import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

from esfpy.checking import EXPECTED_TABLE1, TABLE1_COLUMNS, PostulateId, Table1
from esfpy.logic.parsing import format_belief_set
from esfpy.logic.worlds import VarSet
from esfpy.societies.profile import format_profile
from esfpy.verdict import Status, Verdict, Witness

logger = logging.getLogger(__name__)

FORMATS = ("table", "csv", "json")
CSV_FIELDS = ("kind", "subject", "operator", "postulate", "status", "expected", "scope", "detail")


@dataclass
class Report:
    title: str
    config: Dict[str, Any] = field(default_factory=dict)
    results: List[Dict[str, Any]] = field(default_factory=list)
    defects: List[Dict[str, str]] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)
    lines: List[str] = field(default_factory=list)  # table rendering, when the records alone read badly
    header: Dict[str, str] = field(default_factory=lambda: {"created": datetime.now(timezone.utc).isoformat()})

    def add_defect(self, subject: str, message: str):
        self.defects.append({"subject": subject, "message": message})

    def structured(self) -> Dict[str, Any]:
        return dict(self.comparable(), timing=self.timing, header=dict(self.header, title=self.title))

    def comparable(self) -> Dict[str, Any]:
        # the parts identical runs reproduce exactly
        return {"config": self.config, "results": self.results, "defects": self.defects}


def witness_record(witness: Witness, varset: Optional[VarSet] = None) -> Dict[str, Any]:
    record: Dict[str, Any] = {"postulate": witness.postulate}
    if witness.society is not None:
        record["society"] = list(witness.society.members)
    if witness.profiles:
        record["profiles"] = [format_profile(p, varset).splitlines() for p in witness.profiles]
    if witness.partition is not None:
        record["partition"] = [list(part.members) for part in witness.partition]
    if witness.constraints:
        record["constraints"] = [format_belief_set(c, varset) for c in witness.constraints]
    if witness.constraint_states:
        record["constraint_states"] = [s.render(varset) for s in witness.constraint_states]
    if witness.worlds:
        names = varset or (VarSet.of_size(witness.profiles[0].world_count.bit_length() - 1) if witness.profiles else
                           VarSet())
        record["worlds"] = [names.render(w) for w in witness.worlds]
    if witness.beliefs:
        record["beliefs"] = {label: format_belief_set(b, varset) for label, b in witness.beliefs}
    if witness.values:
        record["values"] = list(witness.values)
    if witness.note:
        record["note"] = witness.note
    return record


def verdict_record(verdict: Verdict, kind: str = "verdict", **extra: Any) -> Dict[str, Any]:
    record: Dict[str, Any] = {
        "kind": kind,
        "subject": verdict.subject,
        "status": verdict.status.name,
        "scope": verdict.scope,
        "detail": verdict.detail,
    }
    record.update(extra)
    if verdict.evidence:
        record["evidence"] = [list(pair) for pair in verdict.evidence]
    if verdict.witness is not None:
        record["witness"] = witness_record(verdict.witness)
    return record


def render_witness(witness: Witness) -> List[str]:
    record = witness_record(witness)
    lines = [f"  witness for {record.pop('postulate')}:"]
    for key, value in record.items():
        if key == "profiles":
            for i, profile in enumerate(value):
                lines.append(f"    profile {i}: " + "; ".join(profile))
        else:
            lines.append(f"    {key}: {value}")
    return lines


def render_verdict(verdict: Verdict) -> List[str]:
    lines = [str(verdict)]
    lines += [f"  {name}: {value}" for name, value in verdict.evidence]
    if verdict.witness is not None:
        lines += render_witness(verdict.witness)
    return lines


def table1_report(table: Table1, metatheorems: Optional[Verdict] = None) -> Report:
    report = Report("table1")
    for name, row in table.rows.items():
        for pid, verdict in row.items():
            kind = "cell" if pid in TABLE1_COLUMNS else "supplementary"
            expected = EXPECTED_TABLE1.get(name, {}).get(pid)
            report.results.append(verdict_record(
                verdict, kind, operator=name, postulate=pid.label,
                expected="" if expected is None else Status.Satisfied.name if expected else Status.Violated.name))
    for name, pid in table.mismatches():
        cell = table.cell(name, pid)
        published = "✓" if EXPECTED_TABLE1[name][pid] else "✗"
        note = f" ({cell.detail})" if cell.detail else ""
        report.add_defect(f"{name}/{pid.label}", f"got {cell.status.name}, published {published}{note}")
    if metatheorems is not None:
        report.results.append(verdict_record(metatheorems, "metatheorems"))
        for subject, message in metatheorems.evidence if metatheorems.violated else ():
            report.add_defect(subject, message)
    report.timing.update(table.timing)
    report.lines = render_table1(table)
    return report


def render_table1(table: Table1, columns: Sequence[PostulateId] = TABLE1_COLUMNS) -> List[str]:
    width = max(len(name) for name in table.rows) if table.rows else 8
    lines = [" " * width + " | " + " ".join(f"{pid.label:>6}" for pid in columns)]
    lines.append("-" * len(lines[0]))
    footnotes = []
    for name, row in table.rows.items():
        marks = []
        for pid in columns:
            verdict = row.get(pid)
            mark = verdict.status.mark if verdict is not None else " "
            if verdict is not None and verdict.status == Status.Unresolved:
                footnotes.append(f"{name}/{pid.label}: {verdict.detail}")
            marks.append(f"{mark:>6}")
        lines.append(f"{name:<{width}} | " + " ".join(marks))
    lines.append("")
    lines.append(f"scope: {table.scope.describe()}")
    lines += [f"  * {note}" for note in footnotes]
    return lines


def render(report: Report, fmt: str) -> str:
    match fmt:
        case "json":
            return json.dumps(report.structured(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        case "csv":
            buffer = io.StringIO()
            writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
            writer.writeheader()
            for record in report.results:
                if report.title != "table1" or record.get("kind") == "cell":
                    writer.writerow({k: record.get(k, "") for k in CSV_FIELDS})
            return buffer.getvalue()
        case "table":
            lines = [f"# {report.title}"]
            lines += report.lines or [_summary_line(r) for r in report.results]
            if report.defects:
                lines.append("")
                lines.append(f"{len(report.defects)} defects:")
                lines += [f"  {d['subject']}: {d['message']}" for d in report.defects]
            return "\n".join(lines) + "\n"
    raise ValueError(f"Unknown format '{fmt}', known: {', '.join(FORMATS)}")


def _summary_line(record: Mapping[str, Any]) -> str:
    text = f"{record.get('subject', '')}: {record.get('status', '')}"
    return text + (f" - {record['detail']}" if record.get("detail") else "")


def write_report(report: Report, fmt: str, out: Optional[Path] = None, stream=None):
    text = render(report, fmt)
    if out is None:
        (stream or sys.stdout).write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    logger.info("wrote %s report to %s", fmt, out)
