from esfpy.coalitions.decisive import (
    Coalition,
    DecisivenessRecord,
    MinimalDecisive,
    check_observations,
    check_propagation,
    coalitions_of,
    dictatorial_at,
    is_decisive,
    is_decisive_for,
    is_locally_decisive,
    minimal_decisive,
    replay_coalition,
)

__all__ = [
    "Coalition",
    "DecisivenessRecord",
    "MinimalDecisive",
    "check_observations",
    "check_propagation",
    "coalitions_of",
    "dictatorial_at",
    "is_decisive",
    "is_decisive_for",
    "is_locally_decisive",
    "minimal_decisive",
    "replay_coalition",
]
