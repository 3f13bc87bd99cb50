from enum import IntEnum
from typing import Dict, Tuple


class PostulateId(IntEnum):
    ESF1 = 1
    ESF2 = 2
    ESF3 = 3
    ESF4 = 4
    ESF5 = 5
    ESF6 = 6
    ESF7 = 7
    ESF8 = 8
    ESF8W = 9
    SD = 10
    U = 11
    P = 12
    I = 13  # noqa: E741
    D = 14
    P1 = 20
    P2 = 21
    P3 = 22
    P4 = 23
    P4W = 24
    MAX = 25
    SEM_U = 26
    SEM_P = 27
    SEM_IND = 28
    SEM_D = 29

    @property
    def label(self) -> str:
        return _LABELS.get(self, self.name)

    @property
    def is_semantic(self) -> bool:
        return self >= PostulateId.P1


_LABELS: Dict[PostulateId, str] = {
    PostulateId.SD: "ESF-SD",
    PostulateId.U: "ESF-U",
    PostulateId.P: "ESF-P",
    PostulateId.I: "ESF-I",
    PostulateId.D: "ESF-D",
    PostulateId.SEM_U: "u",
    PostulateId.SEM_P: "p",
    PostulateId.SEM_IND: "ind",
    PostulateId.SEM_D: "d",
}

# Case matters only for the single-letter semantic names (p vs ESF-P).
_ALIASES: Dict[str, PostulateId] = {
    "u": PostulateId.SEM_U,
    "p": PostulateId.SEM_P,
    "ind": PostulateId.SEM_IND,
    "d": PostulateId.SEM_D,
}

TABLE1_COLUMNS: Tuple[PostulateId, ...] = (
    PostulateId.ESF5,
    PostulateId.ESF6,
    PostulateId.ESF7,
    PostulateId.ESF8,
    PostulateId.ESF8W,
    PostulateId.SD,
    PostulateId.U,
    PostulateId.P,
    PostulateId.I,
    PostulateId.D,
)

SUPPLEMENTARY_COLUMNS: Tuple[PostulateId, ...] = (
    PostulateId.ESF1,
    PostulateId.ESF2,
    PostulateId.ESF3,
    PostulateId.ESF4,
    PostulateId.P1,
    PostulateId.P2,
    PostulateId.P3,
    PostulateId.P4,
    PostulateId.P4W,
    PostulateId.MAX,
    PostulateId.SEM_U,
    PostulateId.SEM_P,
    PostulateId.SEM_IND,
    PostulateId.SEM_D,
)

# Syntactic postulate -> the assignment property it is proven equivalent to.
EQUIVALENCES: Tuple[Tuple[PostulateId, PostulateId], ...] = (
    (PostulateId.ESF5, PostulateId.P1),
    (PostulateId.ESF6, PostulateId.P2),
    (PostulateId.ESF7, PostulateId.P3),
    (PostulateId.ESF8, PostulateId.P4),
    (PostulateId.ESF8W, PostulateId.P4W),
    (PostulateId.U, PostulateId.SEM_U),
    (PostulateId.P, PostulateId.SEM_P),
    (PostulateId.I, PostulateId.SEM_IND),
    (PostulateId.D, PostulateId.SEM_D),
)


def parse_postulate_id(text: str) -> PostulateId:
    """Accepts `ESF-D`, `D`, `ESF8W`, `SEM_P4W`, `P4W`, `u`, `SEM_IND`, ..."""
    raw = text.strip()
    if raw in _ALIASES:
        return _ALIASES[raw]
    name = raw.upper().replace("-", "")
    if name in PostulateId.__members__:
        return PostulateId[name]
    if name.startswith("ESF") and name[3:] in PostulateId.__members__:
        return PostulateId[name[3:]]
    if name.startswith("SEM_") and name[4:] in PostulateId.__members__ and PostulateId[name[4:]].is_semantic:
        return PostulateId[name[4:]]
    raise ValueError(f"Unknown postulate '{text}', known: {', '.join(p.label for p in PostulateId)}")
