"""State based potential games: state processes, utility design, better reply with inertia, equilibria."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from ..algebra.ratmat import RationalVector
from ..algebra.stp import Profile, StochasticMatrix, all_profiles, check_profile, profile_index
from ..config import SEP_RULES
from ..data.types import (
    NetworkTopology,
    ObjectiveFunction,
    PotentialValidity,
    SimulationTrace,
    StateBasedGame,
    TraceStep,
)
from ..games.model import deviate, objective_eval
from ..games.potential import UtilityDesign, check_designability, design_utilities, designability_report
from .fixed import resolve_seed, step_uniforms

logger = logging.getLogger(__name__)


Distribution = Tuple[Fraction, ...]


@dataclass(frozen=True)
class RecurrentStateEquilibrium:
    """Action a* with the set of states x* for which [a*, x*] is a recurrent state equilibrium."""

    action: Profile
    state_set: FrozenSet[int]


def _uniform_over(members: Sequence[int], r: int) -> Distribution:
    share = Fraction(1, len(members))
    chosen = set(members)
    return tuple(share if x in chosen else Fraction(0) for x in range(1, r + 1))


def _state_count(phi: ObjectiveFunction) -> int:
    if not phi.is_state_based:
        raise ValueError("state processes need a state based objective")
    return phi.states


def sep1_distribution(phi: ObjectiveFunction, x: int, a: Sequence[int]) -> Distribution:
    """Uniform over states with strictly larger φ(·, a); stay at x when there are none."""
    r = _state_count(phi)
    here = objective_eval(phi, x, a)
    better = [y for y in range(1, r + 1) if objective_eval(phi, y, a) > here]
    return _uniform_over(better or [x], r)


def sep2_distribution(phi: ObjectiveFunction, x: int, a: Sequence[int]) -> Distribution:
    """Uniform over states with φ(·, a) >= φ(x, a); x itself is always a member."""
    r = _state_count(phi)
    here = objective_eval(phi, x, a)
    return _uniform_over([y for y in range(1, r + 1) if objective_eval(phi, y, a) >= here], r)


def build_MP(phi: ObjectiveFunction, sep: str = "sep2") -> StochasticMatrix:
    """r x (r·k) state transition matrix; column (x-1)·k + j is the law of x(t+1) given (x, a = δ_k^j)."""
    if sep not in SEP_RULES:
        raise ValueError(f"sep must be one of {SEP_RULES}, got {sep!r}")
    rule = sep1_distribution if sep == "sep1" else sep2_distribution
    r = _state_count(phi)
    columns = [rule(phi, x, a) for x in range(1, r + 1) for a in all_profiles(phi.k)]
    return StochasticMatrix.from_columns(columns, r)


def state_objective_block(phi: ObjectiveFunction, x: int) -> ObjectiveFunction:
    return ObjectiveFunction(phi.k, phi.block(x))


def state_designability_report(
    phi: ObjectiveFunction,
    per_state_neighborhoods: Sequence[Sequence[Sequence[int]]],
    k: Sequence[int],
) -> Tuple[Tuple[bool, ...], ...]:
    """Per state, per player: whether block V^φ_x lies in rowspace([Γ_{U^x(i)}; E_i^T])."""
    r = _state_count(phi)
    if len(per_state_neighborhoods) != r:
        raise ValueError(f"{len(per_state_neighborhoods)} neighborhood sets for {r} states")
    return tuple(
        designability_report(state_objective_block(phi, x), per_state_neighborhoods[x - 1], k)
        for x in range(1, r + 1)
    )


def first_violation(report: Sequence[Sequence[bool]]) -> Optional[Tuple[int, int]]:
    """First (state, player) whose membership test failed, 1-based."""
    for x, per_player in enumerate(report, start=1):
        for i, ok in enumerate(per_player, start=1):
            if not ok:
                return x, i
    return None


def check_state_designability(
    phi: ObjectiveFunction,
    per_state_neighborhoods: Sequence[Sequence[Sequence[int]]],
    k: Sequence[int],
) -> bool:
    """True iff every block is designable for its state's neighborhoods."""
    r = _state_count(phi)
    if len(per_state_neighborhoods) != r:
        raise ValueError(f"{len(per_state_neighborhoods)} neighborhood sets for {r} states")
    return all(
        check_designability(state_objective_block(phi, x), per_state_neighborhoods[x - 1], k)
        for x in range(1, r + 1)
    )


def design_state_utilities(
    phi: ObjectiveFunction,
    per_state_neighborhoods: Sequence[Sequence[Sequence[int]]],
    k: Sequence[int],
) -> Optional[Tuple[UtilityDesign, ...]]:
    """Blockwise utility design; None iff some state is not designable."""
    r = _state_count(phi)
    designs = []
    for x in range(1, r + 1):
        design = design_utilities(state_objective_block(phi, x), per_state_neighborhoods[x - 1], k)
        if design is None:
            logger.info("state %d is not designable", x)
            return None
        designs.append(design)
    return tuple(designs)


def lifted_state_utilities(designs: Sequence[UtilityDesign], k: Sequence[int]) -> Tuple[Tuple[RationalVector, ...], ...]:
    return tuple(d.lifted_utilities(k) for d in designs)


def consensus_utilities(
    per_state_topologies: Sequence[NetworkTopology],
    k: Sequence[int],
    include_self: bool = False,
) -> Tuple[Tuple[RationalVector, ...], ...]:
    """c_i(x, a) = 2·1{a_i = 1} + Σ_{j ∈ U^x(i)\\{i}} 1{a_j = a_i}, lifted to full length.

    include_self adds the j = i term, a constant shift of 1.
    """
    if any(ki != 2 for ki in k):
        raise ValueError(f"consensus utilities need binary agents, got k={tuple(k)}")
    n = len(k)
    out = []
    for topology in per_state_topologies:
        per_player = []
        for i in range(1, n + 1):
            others = sorted(topology.neighborhood(i) - {i})
            per_player.append(tuple(
                Fraction(2 * (a[i - 1] == 1) + sum(a[j - 1] == a[i - 1] for j in others) + int(include_self))
                for a in all_profiles(k)
            ))
        out.append(tuple(per_player))
    return tuple(out)


def state_neighborhoods(per_state_topologies: Sequence[NetworkTopology]) -> Tuple[Tuple[FrozenSet[int], ...], ...]:
    return tuple(t.neighborhoods() for t in per_state_topologies)


def state_based_game(
    k: Sequence[int],
    states: Sequence[str],
    per_state_topologies: Sequence[NetworkTopology],
    objective: ObjectiveFunction,
    sep: str = "sep2",
    epsilon: Fraction = Fraction(1, 10),
    utilities: Optional[Tuple[Tuple[RationalVector, ...], ...]] = None,
) -> StateBasedGame:
    """Assemble a StateBasedGame with M_P built from the objective by the chosen SEP."""
    return StateBasedGame(
        k=tuple(k),
        states=tuple(states),
        neighborhoods=state_neighborhoods(per_state_topologies),
        objective=objective,
        m_p=build_MP(objective, sep),
        epsilon=Fraction(epsilon),
        utilities=utilities,
    )


def state_potential_validity(sbg: StateBasedGame) -> PotentialValidity:
    """Check utility differences against φ at every state and M_P monotonicity in φ."""
    if sbg.utilities is None:
        raise ValueError("state based game has no utilities to verify")
    flags: list = []
    size = sbg.profile_count
    for x in range(1, sbg.r + 1):
        for a in all_profiles(sbg.k):
            phi_xa = sbg.phi(x, a)
            for i in range(1, sbg.n + 1):
                base = sbg.utility(x, i, a)
                for s in range(1, sbg.k[i - 1] + 1):
                    if s == a[i - 1]:
                        continue
                    b = deviate(a, i, s)
                    if sbg.utility(x, i, b) - base != sbg.phi(x, b) - phi_xa:
                        flags.append(f"utility_difference: state={sbg.states[x - 1]} player={i} a={a} deviation={s}")
            column = sbg.m_p.column((x - 1) * size + profile_index(a, sbg.k) - 1)
            for y, mass in enumerate(column, start=1):
                if mass > 0 and sbg.phi(y, a) < phi_xa:
                    flags.append(
                        f"state_decrease: from={sbg.states[x - 1]} to={sbg.states[y - 1]} a={a}"
                    )
    return PotentialValidity(is_valid=not flags, flags=flags)


def verify_state_based_potential(sbg: StateBasedGame) -> bool:
    return state_potential_validity(sbg).is_valid


def better_replies(sbg: StateBasedGame, i: int, x: int, a: Sequence[int]) -> Tuple[int, ...]:
    """B_i(x, a): strategies strictly improving c_i(x, ·, a_-i)."""
    current = sbg.utility(x, i, a)
    return tuple(s for s in range(1, sbg.k[i - 1] + 1) if sbg.utility(x, i, deviate(a, i, s)) > current)


def better_reply_distribution(sbg: StateBasedGame, i: int, x: int, a: Sequence[int]) -> Distribution:
    """Law of a_i(t+1) given x(t+1) = x and a(t) = a, as a vector over 1..k_i."""
    a = check_profile(a, sbg.k)
    ki = sbg.k[i - 1]
    better = better_replies(sbg, i, x, a)
    out = [Fraction(0)] * ki
    if not better:
        out[a[i - 1] - 1] = Fraction(1)
        return tuple(out)
    out[a[i - 1] - 1] = sbg.epsilon
    for s in better:
        out[s - 1] = (1 - sbg.epsilon) / len(better)
    return tuple(out)


def _action_column(sbg: StateBasedGame, x: int, a: Profile) -> Dict[Profile, Fraction]:
    dist: Dict[Profile, Fraction] = {(): Fraction(1)}
    for i in range(1, sbg.n + 1):
        own = [(s, q) for s, q in enumerate(better_reply_distribution(sbg, i, x, a), start=1) if q]
        dist = {p + (s,): w * q for p, w in dist.items() for s, q in own}
    return dist


def build_MF(sbg: StateBasedGame) -> StochasticMatrix:
    """k x (r·k) action transition matrix; players update simultaneously and independently."""
    size = sbg.profile_count
    columns = []
    for x in range(1, sbg.r + 1):
        for a in all_profiles(sbg.k):
            col = [Fraction(0)] * size
            for b, w in _action_column(sbg, x, a).items():
                col[profile_index(b, sbg.k) - 1] += w
            columns.append(col)
    return StochasticMatrix.from_columns(columns, size)


def state_graph(sbg: StateBasedGame, a: Sequence[int]) -> nx.DiGraph:
    """States as nodes, an edge x -> y when M_P moves x to y with positive mass under action a."""
    j = profile_index(a, sbg.k) - 1
    graph = nx.DiGraph()
    graph.add_nodes_from(range(1, sbg.r + 1))
    for x in range(1, sbg.r + 1):
        column = sbg.m_p.column((x - 1) * sbg.profile_count + j)
        graph.add_edges_from((x, y) for y, mass in enumerate(column, start=1) if mass > 0)
    return graph


def reachable_states(sbg: StateBasedGame, a: Sequence[int], x: int) -> FrozenSet[int]:
    """X(a|x): x and every state reachable from it under M_P with the action frozen at a."""
    if not 1 <= x <= sbg.r:
        raise ValueError(f"state {x} outside 1..{sbg.r}")
    return frozenset(nx.descendants(state_graph(sbg, a), x) | {x})


def is_state_nash(sbg: StateBasedGame, x: int, a: Sequence[int]) -> bool:
    return all(not better_replies(sbg, i, x, a) for i in range(1, sbg.n + 1))


def recurrent_state_equilibria(sbg: StateBasedGame) -> List[RecurrentStateEquilibrium]:
    """All actions a* with the states x* making [a*, x*] a recurrent state equilibrium.

    [a*, x*] qualifies when x* ∈ X(a*|x) for every x ∈ X(a*|x*) and a* is a Nash
    profile of c(x, ·) at every x ∈ X(a*|x*).
    """
    found = []
    for a in all_profiles(sbg.k):
        graph = state_graph(sbg, a)
        reach = {x: frozenset(nx.descendants(graph, x) | {x}) for x in graph.nodes}
        nash = {x: is_state_nash(sbg, x, a) for x in graph.nodes}
        members = frozenset(
            x for x in graph.nodes
            if all(x in reach[y] and nash[y] for y in reach[x])
        )
        if members:
            found.append(RecurrentStateEquilibrium(action=a, state_set=members))
    logger.info("found %d recurrent state equilibria", len(found))
    return found


def sample_index(distribution: Sequence[Fraction], u: float) -> int:
    """1-based index drawn from an exact distribution with one uniform."""
    threshold = Fraction(u)
    total = Fraction(0)
    last = 0
    for j, mass in enumerate(distribution, start=1):
        if mass <= 0:
            continue
        total += mass
        last = j
        if threshold < total:
            return j
    return last


def simulate_state_based(
    sbg: StateBasedGame,
    x0: int,
    a0: Sequence[int],
    max_steps: int,
    seed: Optional[int] = None,
    stop_on_convergence: bool = True,
) -> SimulationTrace:
    """Run state step then better reply with inertia, recording (x(t), a(t), φ(x(t), a(t))).

    converged_at is the first t at which a(t) is a Nash profile of c(x, ·) at every
    state reachable from x(t) under a(t); the action can never change afterwards.
    """
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    if sbg.utilities is None:
        raise ValueError("state based game has no utilities to simulate")
    if not 1 <= x0 <= sbg.r:
        raise ValueError(f"initial state {x0} outside 1..{sbg.r}")
    seed = resolve_seed(seed)
    size = sbg.profile_count
    settled: Dict[Tuple[int, Profile], bool] = {}

    def is_settled(x: int, a: Profile) -> bool:
        key = (x, a)
        if key not in settled:
            settled[key] = all(is_state_nash(sbg, y, a) for y in reachable_states(sbg, a, x))
        return settled[key]

    x, a = x0, check_profile(a0, sbg.k)
    trace = SimulationTrace(seed=seed)
    trace.steps.append(TraceStep(0, x, a, sbg.phi(x, a)))
    seen = {(x, a)}
    if is_settled(x, a):
        trace.converged_at = 0
        if stop_on_convergence:
            return trace
    for t in range(max_steps):
        u = step_uniforms(seed, t, sbg.n + 1)
        x = sample_index(sbg.m_p.column((x - 1) * size + profile_index(a, sbg.k) - 1), u[sbg.n])
        a = tuple(sample_index(better_reply_distribution(sbg, i, x, a), u[i - 1]) for i in range(1, sbg.n + 1))
        trace.steps.append(TraceStep(t + 1, x, a, sbg.phi(x, a)))
        if (x, a) in seen and trace.first_revisit is None:
            trace.first_revisit = t + 1
        seen.add((x, a))
        if trace.converged_at is None and is_settled(x, a):
            trace.converged_at = t + 1
            if stop_on_convergence:
                break
    logger.debug("state based run seed=%d converged_at=%s", seed, trace.converged_at)
    return trace
