from dataclasses import dataclass, field
from enum import IntEnum
from typing import Optional, Tuple

from esfpy.logic.worlds import BeliefSet
from esfpy.preorders.preorder import TotalPreorder
from esfpy.societies.profile import Profile, Society
from esfpy.types import WorldIndex


class Status(IntEnum):
    Satisfied = 0
    Violated = 1
    Skipped = 2
    Unresolved = 3

    @property
    def mark(self) -> str:
        match self:
            case Status.Satisfied:
                return "✓"
            case Status.Violated:
                return "✗"
            case Status.Skipped:
                return "-"
            case Status.Unresolved:
                return "?"
        raise AssertionError(self)


@dataclass(frozen=True)
class Witness:
    """
    Everything needed to replay one counterexample. Unused fields stay empty; `beliefs` holds the
    intermediate belief sets under descriptive labels, e.g. ("R(N)", {00}).
    """

    postulate: str
    society: Optional[Society] = None
    profiles: Tuple[Profile, ...] = ()
    partition: Optional[Tuple[Society, Society]] = None
    constraints: Tuple[BeliefSet, ...] = ()
    constraint_states: Tuple[TotalPreorder, ...] = ()
    worlds: Tuple[WorldIndex, ...] = ()
    beliefs: Tuple[Tuple[str, BeliefSet], ...] = ()
    values: Tuple[int, ...] = ()
    note: str = ""

    def belief(self, label: str) -> BeliefSet:
        for name, value in self.beliefs:
            if name == label:
                return value
        raise KeyError(label)


@dataclass(frozen=True)
class Verdict:
    subject: str
    status: Status
    scope: str
    witness: Optional[Witness] = None
    detail: str = ""
    evidence: Tuple[Tuple[str, str], ...] = field(default=())

    @property
    def satisfied(self) -> bool:
        return self.status == Status.Satisfied

    @property
    def violated(self) -> bool:
        return self.status == Status.Violated

    @classmethod
    def holds(cls, subject: str, scope: str, detail: str = "") -> "Verdict":
        return cls(subject, Status.Satisfied, scope, detail=detail)

    @classmethod
    def fails(cls, subject: str, scope: str, witness: Witness, detail: str = "") -> "Verdict":
        return cls(subject, Status.Violated, scope, witness, detail)

    @classmethod
    def skipped(cls, subject: str, scope: str, reason: str) -> "Verdict":
        return cls(subject, Status.Skipped, scope, detail=reason)

    def __str__(self):
        text = f"{self.subject}: {self.status.name} ({self.scope})"
        if self.detail:
            text += f" - {self.detail}"
        return text
