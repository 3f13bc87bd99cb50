import logging
import os
from dataclasses import dataclass, replace
from math import comb
from typing import List, NamedTuple, Optional, Tuple

from esfpy.logic.worlds import MAX_VARIABLES
from esfpy.preorders.enumeration import DEFAULT_WORLD_BOUND, ordered_bell
from esfpy.societies.profile import Society, societies_up_to
from esfpy.types import AgentId

logger = logging.getLogger(__name__)

CONSTRAINT_MODES = ("beliefs", "states")
DEFAULT_COST_CEILING = 10**10


def default_jobs() -> int:
    raw = os.environ.get("ESFPY_JOBS", "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        logger.warning("ignoring ESFPY_JOBS=%r, not an integer", raw)
        return 1


class ScopeRefused(RuntimeError):
    def __init__(self, estimate: int, ceiling: int, what: str):
        self.estimate = estimate
        self.ceiling = ceiling
        super().__init__(f"Refusing {what}: about {estimate:.3g} elementary comparisons, ceiling is {ceiling:.3g}")


@dataclass(frozen=True)
class CheckScope:
    """
    Bounds of an exhaustive check. Societies up to `verify_society_max` agents are certified; the search for
    a counterexample goes on up to `refute_society_max`.
    """

    var_count: int = 2
    agents: Tuple[AgentId, ...] = (1, 2, 3, 4)
    verify_society_max: int = 3
    refute_society_max: int = 4
    constraint_mode: str = "beliefs"
    constraint_max_models: Optional[int] = None
    cost_ceiling: int = DEFAULT_COST_CEILING
    jobs: int = 1
    sample_budget: int = 2000
    seed: int = 0
    experimental: bool = False
    progress: bool = False

    def __post_init__(self):
        if not 2 <= self.var_count <= MAX_VARIABLES:
            raise ValueError(f"var_count must be within 2..{MAX_VARIABLES}, got {self.var_count}")
        if self.constraint_mode not in CONSTRAINT_MODES:
            raise ValueError(f"Unknown constraint mode '{self.constraint_mode}', known: {', '.join(CONSTRAINT_MODES)}")
        if not 1 <= self.verify_society_max <= self.refute_society_max:
            raise ValueError(f"Need 1 <= verify max ({self.verify_society_max}) <= refute max "
                             f"({self.refute_society_max})")
        if self.refute_society_max > len(self.agents):
            raise ValueError(f"Refute max {self.refute_society_max} exceeds the {len(self.agents)} agents available")
        if self.jobs < 1:
            raise ValueError(f"jobs must be positive, got {self.jobs}")
        # Society validates the agent ids.
        Society.of(*self.agents)

    @property
    def universe(self) -> Society:
        return Society.of(*self.agents)

    @property
    def world_count(self) -> int:
        return 1 << self.var_count

    def societies(self, max_size: Optional[int] = None) -> List[Society]:
        return societies_up_to(self.universe, max_size or self.refute_society_max)

    def with_(self, **changes) -> "CheckScope":
        return replace(self, **changes)

    def describe(self) -> str:
        text = (f"exhaustive for |N| <= {self.verify_society_max}, searched to |N| <= {self.refute_society_max}, "
                f"agents {self.universe}, {self.var_count} variables, {self.constraint_mode} constraints")
        if self.constraint_max_models is not None:
            text += f" with at most {self.constraint_max_models} models"
        return text


def check_cost(estimate: int, scope: CheckScope, what: str):
    if estimate > scope.cost_ceiling:
        raise ScopeRefused(estimate, scope.cost_ceiling, what)
    if estimate > scope.cost_ceiling // 2:
        logger.warning("%s costs about %.3g comparisons, close to the ceiling %.3g", what, estimate, scope.cost_ceiling)
    else:
        logger.debug("%s costs about %.3g comparisons", what, estimate)


class ScopeSizes(NamedTuple):
    """Table sizes of a scope, counted in closed form before anything is enumerated."""

    states: int
    constraints: int
    two_model: int
    pairs: int

    @property
    def tables(self) -> int:
        # one result row per state and constraint
        return self.states * (self.constraints + 1)


def scope_sizes(scope: CheckScope) -> ScopeSizes:
    w = scope.world_count
    top = w if scope.constraint_max_models is None else min(w, scope.constraint_max_models)

    def with_top(k: int) -> int:
        # constraints whose beliefs have exactly k models
        return comb(w, k) * (ordered_bell(w - k) if scope.constraint_mode == "states" else 1)

    return ScopeSizes(ordered_bell(w), sum(with_top(k) for k in range(1, top + 1)),
                      sum(with_top(k) for k in range(1, min(2, top) + 1)), comb(w, 2))


def check_tables(scope: CheckScope):
    # refuses scopes whose state tables alone are out of reach, before any of them is built
    sizes = scope_sizes(scope)
    what = f"state tables over {scope.world_count} worlds ({sizes.states} total preorders)"
    if scope.world_count > DEFAULT_WORLD_BOUND:
        raise ScopeRefused(sizes.tables, scope.cost_ceiling, f"{what}, enumeration stops at {DEFAULT_WORLD_BOUND}")
    check_cost(sizes.tables, scope, what)
