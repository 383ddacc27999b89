"""Plain-text `key: value` reports and the structured {value, explanation} response for JSON export."""
import re
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence

from .data.types import SystemDefinition

# Keys are matched after stripping a trailing "[...]" qualifier.
EXPLANATIONS: Dict[str, str] = {
    "system": "Name of the system definition",
    "mode": "fixed: one network topology; state_based: topology and objective depend on the state",
    "potential": "Whether the potential equation has a solution, i.e. the game is an exact potential game",
    "potential_vector": "Structure vector of a potential function (particular solution, free variables zero)",
    "normalized_potential": "Potential shifted so its value at profile (1, ..., 1) is 0; potentials are unique up to a constant",
    "normalization_shift": "Constant added to the potential vector to normalize it",
    "objective_is_potential": "Whether the system objective itself is a potential of the game",
    "neighborhood_determinant": "Whether every utility depends only on the player's own neighborhood",
    "nash_equilibria": "Pure Nash equilibria, by exhaustive scan of unilateral deviations",
    "verdict": "Overall outcome of the command; --strict turns a negative verdict into exit code 1",
    "sep": "State evolutionary process: sep1 moves to strict improvers only, sep2 uniformly to weak improvers",
    "epsilon": "Inertia: probability of keeping the previous strategy when a better reply exists",
    "utility_differences_match": "Unilateral utility differences equal objective differences in every state",
    "state_process_monotone": "The state process never moves to a state with a lower objective value",
    "state_based_potential": "Both state based potential conditions hold",
    "violations": "Number of failed checks",
    "first_violation": "First failed check, naming where it failed",
    "designable": "Whether local-information utilities with the objective as potential exist",
    "designed_utilities_verified": "Designed utilities re-checked exhaustively against the objective",
    "utility": "Designed local utility: neighborhood and structure vector over its sub-profile",
    "seed": "Base seed of the run; replicas derive their seeds from it",
    "steps": "Maximum number of update steps per run",
    "cadence": "Which players update per step: all (simultaneous), one in turn (roundrobin) or one at random",
    "information": "global: best responses use the full profile; local: only the neighborhood",
    "initial": "Initial state and strategy profile",
    "converged_at": "First step at which the run reached a profile it can never leave (empty: not within steps)",
    "final": "State and profile at the end of the run",
    "first_revisit": "First step that revisited an earlier (state, profile) without converging",
    "converged": "Runs converged within the step limit",
    "converged_fraction": "Fraction of runs converged within the step limit",
    "converged_ci95": "Exact 95% binomial confidence interval of the converged fraction",
    "mean_converged_at": "Mean convergence step over converged runs",
    "recurrent_state_equilibria": "Number of actions that form recurrent state equilibria",
    "rse": "Equilibrium action and the states at which it is a recurrent state equilibrium",
    "closed_classes": "Closed communicating classes of the chain",
    "stationary": "Exact stationary distribution on a closed class",
    "absorption": "Exact probability of ending in each closed class from this starting point",
    "hitting_time": "Expected number of steps before entering a closed class",
    "l_fixed_points": "Profiles that the MBRA transition matrix maps to themselves",
    "example": "Reproduced example",
    "check": "Golden check outcome",
    "passed": "Whether every golden check passed",
    "out": "Where the output files were written",
    "traces_written": "Number of CSV trace files written, one per (initial condition, run)",
}


def format_profile(a: Sequence[int]) -> str:
    return "(" + ", ".join(str(x) for x in a) + ")"


def format_pair(x: Optional[int], a: Sequence[int], definition: Optional[SystemDefinition] = None) -> str:
    """'label (a_1, ..., a_n)', or just the profile when there is no state."""
    if x is None:
        return format_profile(a)
    label = definition.states[x - 1].label if definition is not None and definition.states else f"x{x}"
    return f"{label} {format_profile(a)}"


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(format_value(v) for v in value) + "]"
    return str(value)


def render_report(report: Dict[str, Any]) -> str:
    """Stable `key: value` lines, one per report entry."""
    return "\n".join(f"{key}: {format_value(value)}" for key, value in report.items())


def _json_value(value: Any) -> Any:
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def build_report_response(report: Dict[str, Any]) -> Dict[str, Any]:
    """Report as key -> {value, explanation}, plus key_order for deterministic display.

    Unknown keys get an empty explanation.
    """
    entries = {}
    for key, value in report.items():
        base = re.sub(r"\[.*\]$", "", key)
        entries[key] = {"value": _json_value(value), "explanation": EXPLANATIONS.get(base, "")}
    return {"entries": entries, "key_order": list(report)}
