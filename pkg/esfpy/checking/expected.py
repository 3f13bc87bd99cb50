from typing import Dict, Tuple

from esfpy.checking.ids import TABLE1_COLUMNS, PostulateId

# Published satisfaction pattern, columns in TABLE1_COLUMNS order.
_ROWS: Dict[str, str] = {
    "sum":        "✓✓✓✓✓✓✓✓✗✗",
    "max":        "✓✓✓✗✓✓✓✓✗✗",
    "proj":       "✓✗✓✗✓✓✓✓✓✓",
    "linproj":    "✗✗✓✓✓✗✓✓✓✓",
    "qlinproj":   "✓✗✗✗✓✓✗✓✓✓",
    "sigmapproj": "✓✓✗✗✗✓✓✓✗✓",
}

EXPECTED_TABLE1: Dict[str, Dict[PostulateId, bool]] = {
    name: {pid: mark == "✓" for pid, mark in zip(TABLE1_COLUMNS, row, strict=True)} for name, row in _ROWS.items()
}

# Smallest society holding a violation, where it is larger than the default certified size.
WITNESS_SIZES: Dict[Tuple[str, PostulateId], int] = {
    ("sigmapproj", PostulateId.ESF8W): 4,
}
