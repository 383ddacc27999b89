"""Export simulation traces as CSV and reports as JSON."""
import csv
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from .algebra.stp import Profile
from .data.types import SimulationTrace
from .report import build_report_response


@dataclass(frozen=True)
class TraceRow:
    t: int
    state: Optional[str]
    profile: Profile
    phi: Optional[Fraction]


def trace_header(n: int) -> List[str]:
    return ["t", "state"] + [f"a_{i}" for i in range(1, n + 1)] + ["phi"]


def trace_rows(trace: SimulationTrace, state_labels: Sequence[str] = ()) -> List[TraceRow]:
    """Rows with the state as its label (empty in fixed mode)."""
    rows = []
    for step in trace.steps:
        label = state_labels[step.state - 1] if step.state is not None and state_labels else None
        rows.append(TraceRow(step.t, label, step.profile, step.objective))
    return rows


def write_trace_csv(trace: SimulationTrace, path: Union[str, Path], n: int, state_labels: Sequence[str] = ()) -> None:
    """Write `t,state,a_1,...,a_n,phi` with LF line endings; state and phi may be empty."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(trace_header(n))
        for row in trace_rows(trace, state_labels):
            phi = "" if row.phi is None else str(row.phi)
            writer.writerow([row.t, row.state or "", *row.profile, phi])


def read_trace_csv(path: Union[str, Path]) -> List[TraceRow]:
    """Parse a CSV written by write_trace_csv.

    Raises:
        ValueError: If the header is not `t,state,a_1,...,a_n,phi`.
    """
    with open(Path(path), encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        n = len(header) - 3
        if n < 1 or header != trace_header(n):
            raise ValueError(f"unexpected trace header {header}")
        rows = []
        for record in reader:
            rows.append(TraceRow(
                t=int(record[0]),
                state=record[1] or None,
                profile=tuple(int(v) for v in record[2:2 + n]),
                phi=Fraction(record[-1]) if record[-1] else None,
            ))
    return rows


def trace_filename(system: str, condition: int, run: int) -> str:
    """One file per (initial condition, run), both 1-based."""
    safe = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in system)
    return f"{safe}_init{condition}_run{run}.csv"


def export_report_json(report: Dict[str, Any], path: Union[str, Path]) -> None:
    """Write the structured {value, explanation} report to a JSON file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(build_report_response(report), f, indent=2)
