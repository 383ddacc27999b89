"""Typed structures for games, topologies, objectives, traces and system definitions."""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import prod
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple

import networkx as nx

from ..algebra.ratmat import RationalVector
from ..algebra.stp import Profile, StochasticMatrix, check_profile, profile_index

Neighborhood = FrozenSet[int]


@dataclass(frozen=True)
class FiniteGame:
    """Finite game in structure-vector form: utilities[i-1][profile_index(a) - 1] = c_i(a)."""

    k: Tuple[int, ...]
    utilities: Tuple[RationalVector, ...]

    def __post_init__(self) -> None:
        if len(self.k) < 1:
            raise ValueError("a game needs at least one player")
        if any(ki < 2 for ki in self.k):
            raise ValueError(f"every player needs at least 2 strategies, got k={self.k}")
        if len(self.utilities) != len(self.k):
            raise ValueError(f"{len(self.utilities)} utility vectors for {len(self.k)} players")
        for i, v in enumerate(self.utilities, start=1):
            if len(v) != self.profile_count:
                raise ValueError(f"utility of player {i} has length {len(v)}, expected {self.profile_count}")

    @property
    def n(self) -> int:
        return len(self.k)

    @property
    def profile_count(self) -> int:
        return prod(self.k)


@dataclass(frozen=True)
class NetworkTopology:
    """Undirected network on nodes 1..n; U(i) = {i} ∪ neighbours of i."""

    n: int
    edges: FrozenSet[Tuple[int, int]]

    def __post_init__(self) -> None:
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop edge ({i}, {j})")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge ({i}, {j}) references a node outside 1..{self.n}")
            if i > j:
                raise ValueError(f"edge ({i}, {j}) is not normalized; use NetworkTopology.from_edges")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "NetworkTopology":
        normalized = set()
        for e in edges:
            if len(e) != 2:
                raise ValueError(f"edge {tuple(e)} must have two endpoints")
            i, j = int(e[0]), int(e[1])
            normalized.add((min(i, j), max(i, j)))
        return cls(n, frozenset(normalized))

    @classmethod
    def complete(cls, n: int) -> "NetworkTopology":
        return cls.from_edges(n, nx.complete_graph(range(1, n + 1)).edges)

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(1, self.n + 1))
        g.add_edges_from(self.edges)
        return g

    def neighborhood(self, i: int) -> Neighborhood:
        if not 1 <= i <= self.n:
            raise ValueError(f"node {i} outside 1..{self.n}")
        return frozenset(self.graph.neighbors(i)) | {i}

    def neighborhoods(self) -> Tuple[Neighborhood, ...]:
        return tuple(self.neighborhood(i) for i in range(1, self.n + 1))

    def sorted_edges(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted(self.edges))


@dataclass(frozen=True)
class ObjectiveFunction:
    """System objective φ as a structure vector.

    Fixed topology: len(vector) = k. State based: r blocks V^φ_1..V^φ_r, len(vector) = r·k.
    """

    k: Tuple[int, ...]
    vector: RationalVector
    states: Optional[int] = None

    def __post_init__(self) -> None:
        expected = prod(self.k) * (self.states or 1)
        if len(self.vector) != expected:
            raise ValueError(f"objective vector has length {len(self.vector)}, expected {expected}")
        if self.states is not None and self.states < 1:
            raise ValueError("a state based objective needs at least one state")

    @property
    def is_state_based(self) -> bool:
        return self.states is not None

    @property
    def profile_count(self) -> int:
        return prod(self.k)

    def block(self, x: int) -> RationalVector:
        """Block V^φ_x (x is 1-based); for a fixed objective only x = 1 exists."""
        r = self.states or 1
        if not 1 <= x <= r:
            raise ValueError(f"state {x} outside 1..{r}")
        size = self.profile_count
        return self.vector[(x - 1) * size:x * size]


@dataclass(frozen=True)
class FNG:
    """Two-player fundamental network game.

    row_payoff[(a_r - 1)·k_col + a_c - 1] is the row player's payoff, col_payoff the column player's,
    both indexed by (row strategy, column strategy).
    """

    k_row: int
    k_col: int
    row_payoff: RationalVector
    col_payoff: RationalVector

    def __post_init__(self) -> None:
        size = self.k_row * self.k_col
        if len(self.row_payoff) != size or len(self.col_payoff) != size:
            raise ValueError(
                f"bimatrix lengths {len(self.row_payoff)}/{len(self.col_payoff)} do not match {self.k_row}x{self.k_col}"
            )

    @property
    def is_symmetric(self) -> bool:
        if self.k_row != self.k_col:
            return False
        kk = self.k_row
        return all(
            self.col_payoff[r * kk + c] == self.row_payoff[c * kk + r] for r in range(kk) for c in range(kk)
        )

    def as_game(self) -> FiniteGame:
        return FiniteGame((self.k_row, self.k_col), (self.row_payoff, self.col_payoff))


@dataclass(frozen=True)
class TraceStep:
    t: int
    state: Optional[int]
    profile: Profile
    objective: Optional[Fraction]


@dataclass
class SimulationTrace:
    """Time-indexed (state, profile, objective value) sequence and the seed that produced it."""

    seed: int
    steps: list = field(default_factory=list)
    converged_at: Optional[int] = None
    first_revisit: Optional[int] = None

    @property
    def final(self) -> TraceStep:
        return self.steps[-1]


@dataclass(frozen=True)
class StateBasedGame:
    """State based game with state-dependent utilities and a designed state process.

    utilities[x-1][i-1] is the full-length (k) structure vector of c_i(x_x, ·); it may be
    None until utilities are designed or supplied. The potential property of M_P is
    checked by verify_state_based_potential, not here.
    """

    k: Tuple[int, ...]
    states: Tuple[str, ...]
    neighborhoods: Tuple[Tuple[Neighborhood, ...], ...]
    objective: ObjectiveFunction
    m_p: StochasticMatrix
    epsilon: Fraction = Fraction(1, 10)
    utilities: Optional[Tuple[Tuple[RationalVector, ...], ...]] = None

    def __post_init__(self) -> None:
        r, size = len(self.states), prod(self.k)
        if self.objective.states != r:
            raise ValueError(f"objective has {self.objective.states} blocks for {r} states")
        if len(self.neighborhoods) != r or any(len(u) != self.n for u in self.neighborhoods):
            raise ValueError("need one neighborhood per (state, player)")
        if self.m_p.shape != (r, r * size):
            raise ValueError(f"M_P has shape {self.m_p.shape}, expected {(r, r * size)}")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"inertia epsilon must lie in (0, 1), got {self.epsilon}")
        if self.utilities is not None:
            if len(self.utilities) != r or any(len(per) != self.n for per in self.utilities):
                raise ValueError("need one utility vector per (state, player)")
            if any(len(v) != size for per in self.utilities for v in per):
                raise ValueError(f"state utilities must have length {size}")

    @property
    def n(self) -> int:
        return len(self.k)

    @property
    def r(self) -> int:
        return len(self.states)

    @property
    def profile_count(self) -> int:
        return prod(self.k)

    def utility(self, x: int, i: int, a: Sequence[int]) -> Fraction:
        if self.utilities is None:
            raise ValueError("state based game has no utilities yet")
        return self.utilities[x - 1][i - 1][profile_index(a, self.k) - 1]

    def phi(self, x: int, a: Sequence[int]) -> Fraction:
        return self.objective.block(x)[profile_index(check_profile(a, self.k), self.k) - 1]


@dataclass(frozen=True)
class LocalUtility:
    """Utility vector over the sub-profile of `neighborhood` (length ∏_{j∈U} k_j)."""

    player: int
    neighborhood: Tuple[int, ...]
    vector: RationalVector
    state: Optional[str] = None


@dataclass(frozen=True)
class StateSpec:
    label: str
    edges: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class InitialCondition:
    profile: Optional[Profile] = None
    state: Optional[str] = None


@dataclass(frozen=True)
class SystemDefinition:
    """Serializable description of a system (fixed topology or state based).

    objective is ("vector", blocks), ("consensus", ()) or ("edge_potential_sum", potential or ()).
    """

    name: str
    players: int
    cardinalities: Tuple[int, ...]
    mode: str
    edges: Tuple[Tuple[int, int], ...] = ()
    states: Tuple[StateSpec, ...] = ()
    objective: Optional[Tuple[str, Tuple]] = None
    fng: Optional[FNG] = None
    utilities: Tuple[LocalUtility, ...] = ()
    sep: Optional[str] = None
    epsilon: Optional[Fraction] = None
    cadence: Optional[str] = None
    information: Optional[str] = None
    seed: Optional[int] = None
    initial: Tuple[InitialCondition, ...] = ()

    @property
    def is_state_based(self) -> bool:
        return self.mode == "state_based"

    def topology(self) -> NetworkTopology:
        return NetworkTopology.from_edges(self.players, self.edges)

    def state_topologies(self) -> Tuple[NetworkTopology, ...]:
        return tuple(NetworkTopology.from_edges(self.players, s.edges) for s in self.states)

    def state_index(self, label: str) -> int:
        """1-based index of a state label."""
        for x, s in enumerate(self.states, start=1):
            if s.label == label:
                return x
        raise ValueError(f"unknown state {label!r}; states are {[s.label for s in self.states]}")


@dataclass
class PotentialValidity:
    """Outcome of the state based potential checks; flags name each failed condition and where."""

    is_valid: bool
    flags: list = field(default_factory=list)
