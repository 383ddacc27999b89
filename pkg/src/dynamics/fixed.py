"""Fixed-topology MBRA dynamics: best responses, one-step updates, the L matrix and simulation."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..algebra.stp import Profile, StochasticMatrix, all_profiles, check_profile, profile_index
from ..config import CADENCES, INFORMATION_MODES
from ..data.types import FiniteGame, NetworkTopology, ObjectiveFunction, SimulationTrace, TraceStep
from ..games.model import deviate, objective_eval, payoff_eval

logger = logging.getLogger(__name__)


@dataclass
class SURConfig:
    """Strategy updating rule: MBRA with an information mode and an update cadence."""

    information: str = "global"
    cadence: str = "roundrobin"
    seed: Optional[int] = None
    rule: str = "MBRA"

    def __post_init__(self) -> None:
        if self.rule != "MBRA":
            raise ValueError(f"unsupported strategy updating rule {self.rule!r}")
        if self.information not in INFORMATION_MODES:
            raise ValueError(f"information must be one of {INFORMATION_MODES}, got {self.information!r}")
        if self.cadence not in CADENCES:
            raise ValueError(f"cadence must be one of {CADENCES}, got {self.cadence!r}")
        if self.seed is not None and self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed}")


def resolve_seed(seed: Optional[int]) -> int:
    """The given seed, or fresh entropy from the OS (logged so the run can be repeated)."""
    if seed is not None:
        return int(seed)
    fresh = int(np.random.SeedSequence().generate_state(1, np.uint64)[0])
    logger.warning("no seed given; using generated seed %d", fresh)
    return fresh


def step_uniforms(seed: int, t: int, count: int) -> np.ndarray:
    """Uniform draws in [0, 1) for step t, from the (seed, t) substream.

    Draw i-1 belongs to player i, the last draw picks the mover under random cadence.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(t,)))
    return rng.random(count)


def uniform_choice(options: Sequence[int], u: float) -> int:
    return options[min(int(u * len(options)), len(options) - 1)]


def _masked(a: Sequence[int], i: int, topology: NetworkTopology) -> Profile:
    u = topology.neighborhood(i)
    return tuple(aj if j in u else 1 for j, aj in enumerate(a, start=1))


def best_response_set(
    g: FiniteGame,
    i: int,
    a: Sequence[int],
    information: str = "global",
    topology: Optional[NetworkTopology] = None,
) -> Tuple[int, ...]:
    """argmax over s of c_i(s, a_-i), sorted.

    In local mode players outside U(i) are masked to strategy 1 before evaluation,
    so only opponents in U(i) influence the result.
    """
    a = check_profile(a, g.k)
    if information == "local":
        if topology is None:
            raise ValueError("local information needs a topology")
        a = _masked(a, i, topology)
    elif information != "global":
        raise ValueError(f"information must be one of {INFORMATION_MODES}, got {information!r}")
    values = [payoff_eval(g, i, deviate(a, i, s)) for s in range(1, g.k[i - 1] + 1)]
    best = max(values)
    return tuple(s for s, v in enumerate(values, start=1) if v == best)


def is_fixed_point(g: FiniteGame, a: Sequence[int], config: SURConfig, topology: Optional[NetworkTopology] = None) -> bool:
    """Every player's current strategy is in its best-response set."""
    return all(
        a[i - 1] in best_response_set(g, i, a, config.information, topology) for i in range(1, g.n + 1)
    )


def movers(n: int, config: SURConfig, t: int, uniforms: Sequence[float]) -> Tuple[int, ...]:
    if config.cadence == "simultaneous":
        return tuple(range(1, n + 1))
    if config.cadence == "roundrobin":
        return (t % n + 1,)
    return (uniform_choice(range(1, n + 1), uniforms[n]),)


def mbra_step(
    g: FiniteGame,
    a: Sequence[int],
    config: SURConfig,
    uniforms: Sequence[float],
    t: int = 0,
    topology: Optional[NetworkTopology] = None,
) -> Profile:
    """One MBRA update: keep a_i if it is a best response, else pick uniformly among BR_i."""
    a = check_profile(a, g.k)
    if len(uniforms) < g.n + 1:
        raise ValueError(f"mbra_step needs {g.n + 1} uniforms, got {len(uniforms)}")
    out = list(a)
    for i in movers(g.n, config, t, uniforms):
        br = best_response_set(g, i, a, config.information, topology)
        if a[i - 1] not in br:
            out[i - 1] = uniform_choice(br, uniforms[i - 1])
    return tuple(out)


def _player_distribution(g: FiniteGame, i: int, a: Profile, config: SURConfig, topology) -> Dict[int, Fraction]:
    br = best_response_set(g, i, a, config.information, topology)
    if a[i - 1] in br:
        return {a[i - 1]: Fraction(1)}
    return {s: Fraction(1, len(br)) for s in br}


def _column(g: FiniteGame, a: Profile, config: SURConfig, topology) -> Dict[Profile, Fraction]:
    if config.cadence == "simultaneous":
        dist = {(): Fraction(1)}
        for i in range(1, g.n + 1):
            own = _player_distribution(g, i, a, config, topology)
            dist = {p + (s,): w * q for p, w in dist.items() for s, q in own.items()}
        return dist
    dist: Dict[Profile, Fraction] = {}
    for i in range(1, g.n + 1):
        for s, q in _player_distribution(g, i, a, config, topology).items():
            b = deviate(a, i, s)
            dist[b] = dist.get(b, Fraction(0)) + q / g.n
    return dist


def transition_matrix_L(
    g: FiniteGame,
    config: SURConfig,
    topology: Optional[NetworkTopology] = None,
) -> StochasticMatrix:
    """k x k column-stochastic matrix with column j the law of a(t+1) given a(t) = δ_k^j.

    Raises:
        ValueError: For round-robin cadence, whose profile process is not time-homogeneous.
    """
    if config.cadence == "roundrobin":
        raise ValueError("round-robin MBRA has no single transition matrix; use simultaneous or random cadence")
    size = g.profile_count
    columns = []
    for a in all_profiles(g.k):
        col = [Fraction(0)] * size
        for b, w in _column(g, a, config, topology).items():
            col[profile_index(b, g.k) - 1] += w
        columns.append(col)
    return StochasticMatrix.from_columns(columns, size)


def _revisit_key(a: Profile, t: int, n: int, config: SURConfig) -> Tuple:
    # round robin: the process state is the profile together with the next mover
    return (a, t % n) if config.cadence == "roundrobin" else (a,)

def simulate(
    g: FiniteGame,
    config: SURConfig,
    a0: Sequence[int],
    max_steps: int,
    objective: Optional[ObjectiveFunction] = None,
    topology: Optional[NetworkTopology] = None,
) -> SimulationTrace:
    """Run MBRA from a0 until a fixed point or max_steps updates.

    Returns:
        SimulationTrace with steps t = 0..T; converged_at is the first t whose profile is a
        fixed point, first_revisit the first t whose profile occurred earlier (with the
        same next mover under round robin).
    """
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    seed = resolve_seed(config.seed)
    a = check_profile(a0, g.k)

    def phi(profile: Profile) -> Optional[Fraction]:
        return objective_eval(objective, None, profile) if objective is not None else None

    trace = SimulationTrace(seed=seed)
    trace.steps.append(TraceStep(0, None, a, phi(a)))
    seen = {_revisit_key(a, 0, g.n, config)}
    if is_fixed_point(g, a, config, topology):
        trace.converged_at = 0
        return trace
    for t in range(max_steps):
        a = mbra_step(g, a, config, step_uniforms(seed, t, g.n + 1), t, topology)
        trace.steps.append(TraceStep(t + 1, None, a, phi(a)))
        key = _revisit_key(a, t + 1, g.n, config)
        if key in seen and trace.first_revisit is None:
            trace.first_revisit = t + 1
        seen.add(key)
        if is_fixed_point(g, a, config, topology):
            trace.converged_at = t + 1
            break
    logger.debug("MBRA run seed=%d converged_at=%s", seed, trace.converged_at)
    return trace
