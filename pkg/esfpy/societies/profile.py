import logging
from dataclasses import dataclass
from itertools import combinations, islice, product
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple

from esfpy.logic.worlds import VarSet
from esfpy.preorders.preorder import PreorderLiteralError, TotalPreorder, parse_preorder
from esfpy.types import AgentId

logger = logging.getLogger(__name__)


class ProfileFormatError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True, order=True)
class Society:
    """A nonempty finite set of agents, kept sorted."""

    members: Tuple[AgentId, ...]

    def __post_init__(self):
        if not self.members:
            raise ValueError("A society needs at least one agent")
        if any(not isinstance(m, int) or m < 1 for m in self.members):
            raise ValueError(f"Agent ids must be positive integers, got {self.members}")
        if tuple(sorted(set(self.members))) != self.members:
            raise ValueError(f"Society members must be sorted and distinct, got {self.members}")

    @classmethod
    def of(cls, *ids: AgentId) -> "Society":
        return cls(tuple(sorted(set(ids))))

    @classmethod
    def universe(cls, size: int) -> "Society":
        return cls(tuple(range(1, size + 1)))

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def dictator_slot(self) -> AgentId:
        # d_N = max(N)
        return self.members[-1]

    def __contains__(self, agent: AgentId) -> bool:
        return agent in self.members

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def position(self, agent: AgentId) -> int:
        return self.members.index(agent)

    def issubset(self, other: "Society") -> bool:
        return set(self.members) <= set(other.members)

    def __str__(self):
        return "{" + ",".join(str(m) for m in self.members) + "}"


def subsocieties(universe: Society, size: int) -> List[Society]:
    return [Society(c) for c in combinations(universe.members, size)]


def societies_up_to(universe: Society, max_size: int, min_size: int = 1) -> List[Society]:
    # ascending by size, then lexicographic
    found = []
    for size in range(min_size, min(max_size, universe.size) + 1):
        found.extend(subsocieties(universe, size))
    return found


@dataclass(frozen=True)
class Profile:
    """A function from a society to epistemic states, stored positionally."""

    society: Society
    states: Tuple[TotalPreorder, ...]

    def __post_init__(self):
        if len(self.states) != self.society.size:
            raise ValueError(f"{self.society.size} agents but {len(self.states)} states")
        widths = {s.world_count for s in self.states}
        if len(widths) != 1:
            raise ValueError(f"Profile states disagree on the world universe: {sorted(widths)}")

    @classmethod
    def from_mapping(cls, states: Mapping[AgentId, TotalPreorder]) -> "Profile":
        society = Society.of(*states.keys())
        return cls(society, tuple(states[a] for a in society.members))

    @classmethod
    def single(cls, agent: AgentId, state: TotalPreorder) -> "Profile":
        return cls(Society((agent,)), (state,))

    @property
    def world_count(self) -> int:
        return self.states[0].world_count

    def __getitem__(self, agent: AgentId) -> TotalPreorder:
        return self.states[self.society.position(agent)]

    def items(self) -> Iterator[Tuple[AgentId, TotalPreorder]]:
        return zip(self.society.members, self.states)

    def as_mapping(self) -> Dict[AgentId, TotalPreorder]:
        return dict(self.items())

    def __len__(self):
        return len(self.states)

    def __str__(self):
        return "(" + ", ".join(s.render() for s in self.states) + ")"


def join(a: Profile, b: Profile) -> Profile:
    overlap = set(a.society.members) & set(b.society.members)
    if overlap:
        raise ValueError(f"Cannot join profiles over overlapping societies, shared agents {sorted(overlap)}")
    return Profile.from_mapping({**a.as_mapping(), **b.as_mapping()})


def restrict(p: Profile, m: Society) -> Profile:
    if not m.issubset(p.society):
        raise ValueError(f"{m} is not a subset of {p.society}")
    return Profile(m, tuple(p[a] for a in m.members))


def equivalent(a: Profile, b: Profile) -> bool:
    # positional: labels may differ, order may not
    return len(a) == len(b) and a.states == b.states


def two_partitions(n: Society) -> Iterator[Tuple[Society, Society]]:
    # each unordered split once, the block holding the smallest agent first
    if n.size < 2:
        raise ValueError(f"A society of {n.size} agent cannot be split in two")
    first, rest = n.members[0], n.members[1:]
    # the all-ones pattern would leave the right block empty
    for pattern in range((1 << len(rest)) - 1):
        left = [first] + [a for bit, a in enumerate(rest) if (pattern >> bit) & 1]
        right = [a for bit, a in enumerate(rest) if not (pattern >> bit) & 1]
        yield Society(tuple(left)), Society(tuple(right))


def count_profiles(n: Society, state_count: int) -> int:
    return state_count ** n.size


def enumerate_profiles(n: Society, states: Sequence[TotalPreorder], offset: int = 0) -> Iterator[Profile]:
    # all |states|^|n| profiles in itertools.product order (first agent slowest), from `offset` on
    if not states:
        raise ValueError("enumerate_profiles needs at least one state")
    combos = product(states, repeat=n.size)
    for combo in islice(combos, offset, None):
        yield Profile(n, tuple(combo))


def profile_at(n: Society, states: Sequence[TotalPreorder], index: int) -> Profile:
    # the profile enumerate_profiles yields at position `index`, without iterating
    total = len(states) ** n.size
    if not 0 <= index < total:
        raise ValueError(f"Profile index {index} outside 0..{total - 1}")
    digits = []
    # last agent is the lowest digit
    for _ in range(n.size):
        index, digit = divmod(index, len(states))
        digits.append(digit)
    return Profile(n, tuple(states[d] for d in reversed(digits)))


def parse_profile(text: str, varset: VarSet = VarSet()) -> Profile:
    """One `agent_id: <preorder literal>` per line; blank lines and `#` comments are skipped."""
    states: Dict[AgentId, TotalPreorder] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, literal = line.partition(":")
        if not sep:
            raise ProfileFormatError(f"expected 'agent_id: preorder', got '{raw}'", number)
        try:
            agent = int(head.strip())
        except ValueError:
            raise ProfileFormatError(f"agent id '{head.strip()}' is not an integer", number)
        if agent < 1:
            raise ProfileFormatError(f"agent id {agent} must be positive", number)
        if agent in states:
            raise ProfileFormatError(f"agent {agent} listed twice", number)
        try:
            states[agent] = parse_preorder(literal.strip(), varset)
        except PreorderLiteralError as e:
            raise ProfileFormatError(str(e), number) from e
    if not states:
        raise ProfileFormatError("no agents listed", 0)
    return Profile.from_mapping(states)


def format_profile(p: Profile, varset: VarSet | None = None) -> str:
    return "\n".join(f"{agent}: {state.render(varset)}" for agent, state in p.items())
