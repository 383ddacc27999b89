"""Independent seeded replicas of a simulation and their convergence summary."""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
import scipy.stats as sps

from ..data.types import SimulationTrace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunSummary:
    """Converged count over `runs` replicas with an exact binomial confidence interval."""

    runs: int
    converged: int
    max_steps: int
    ci_low: float
    ci_high: float
    mean_converged_at: Optional[float]

    @property
    def fraction(self) -> float:
        return self.converged / self.runs


def replica_seeds(seed: int, count: int) -> List[int]:
    """`count` independent 64-bit seeds spawned from one base seed; a single replica keeps the base seed."""
    if count == 1:
        return [seed]
    return [int(s.generate_state(1, np.uint64)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def run_replicas(run: Callable[[int], SimulationTrace], seeds: Sequence[int], workers: int = 1) -> List[SimulationTrace]:
    """Run `run(seed)` for every seed, in a process pool when workers > 1 (`run` must be picklable)."""
    if workers <= 1 or len(seeds) <= 1:
        return [run(s) for s in seeds]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, seeds, chunksize=max(1, len(seeds) // (4 * workers))))


def summarize_runs(traces: Sequence[SimulationTrace], max_steps: int, confidence: float = 0.95) -> RunSummary:
    """Fraction of traces converged within max_steps, with a Clopper-Pearson interval."""
    if not traces:
        raise ValueError("no traces to summarize")
    hits = [tr.converged_at for tr in traces if tr.converged_at is not None and tr.converged_at <= max_steps]
    ci = sps.binomtest(len(hits), len(traces)).proportion_ci(confidence_level=confidence, method="exact")
    summary = RunSummary(
        runs=len(traces),
        converged=len(hits),
        max_steps=max_steps,
        ci_low=float(ci.low),
        ci_high=float(ci.high),
        mean_converged_at=float(np.mean(hits)) if hits else None,
    )
    logger.info("%d/%d runs converged within %d steps", summary.converged, summary.runs, max_steps)
    return summary
