"""Command-line entry point: verify, design, simulate, chain analysis and example reproduction.

Usage (from the project root):
  PYTHONPATH=. python script/main.py verify scenarios/prisoners_dilemma.json
  PYTHONPATH=. python script/main.py design scenarios/example_3_3_1.json --out output/designed.json
  PYTHONPATH=. python script/main.py simulate scenarios/example_4_3_1.json --runs 1000 --seed 7 --out output/traces
  PYTHONPATH=. python script/main.py chain scenarios/example_4_3_1.json
  PYTHONPATH=. python script/main.py repro 4.3.1

Exit codes: 0 success, 1 negative verdict under --strict or a failed repro check,
2 invalid definition or arguments, 3 missing prerequisite.
"""
import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

# Allow running from project root without PYTHONPATH
_root = Path(__file__).resolve().parent.parent
if str(_root) not in sys.path:
    sys.path.insert(0, str(_root))

from src.config import CADENCES, DEFAULT_CONFIG, INFORMATION_MODES, SEP_RULES  # noqa: E402
from src.data import DefinitionError, load_definition, write_definition  # noqa: E402
from src.export_trace import export_report_json, trace_filename, write_trace_csv  # noqa: E402
from src.repro import REPRO, run_repro  # noqa: E402
from src.report import render_report  # noqa: E402
from src.run_analysis import (  # noqa: E402
    MissingPrerequisiteError,
    resolve_config,
    run_chain,
    run_design,
    run_simulate,
    run_verify,
)

logger = logging.getLogger("script.main")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_SCHEMA = 2
EXIT_MISSING = 3


def _epsilon(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}") from e
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"epsilon must lie in (0, 1), got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from e
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from e
    if value < 0:
        raise argparse.ArgumentTypeError(f"seed must be non-negative, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging on stderr")
    common.add_argument("--strict", action="store_true", help="Exit 1 when the verdict is negative")
    common.add_argument("--report-json", type=str, default=None, metavar="PATH", help="Also write the report as JSON to PATH")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("definition", type=str, help="Path to a system definition JSON file")
    model.add_argument("--sep", choices=SEP_RULES, default=None, help="State evolutionary process (default: file, else sep2)")
    model.add_argument("--epsilon", type=_epsilon, default=None, metavar="P/Q", help="Inertia of better reply (default: file, else 1/10)")
    model.add_argument("--cadence", choices=CADENCES, default=None, help="MBRA update cadence (default: file, else roundrobin)")
    model.add_argument("--information", choices=INFORMATION_MODES, default=None, help="MBRA information mode (default: file, else global)")

    parser = argparse.ArgumentParser(description="Potential game utility design and learning dynamics")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify", parents=[common, model], help="Potential game verdict and normalized potential")

    design = sub.add_parser("design", parents=[common, model], help="Design local utilities with the objective as potential")
    design.add_argument("--out", type=str, default=None, metavar="PATH", help="Write the definition with designed utilities to PATH")

    simulate = sub.add_parser("simulate", parents=[common, model], help="Simulate MBRA or better reply with inertia")
    simulate.add_argument("--steps", type=_positive_int, default=None, help=f"Steps per run (default: {DEFAULT_CONFIG.max_steps})")
    simulate.add_argument("--runs", type=_positive_int, default=None, help="Runs per initial condition (default: 1)")
    simulate.add_argument("--seed", type=_seed, default=None, help="Base seed (default: file, else generated and reported)")
    simulate.add_argument("--workers", type=_positive_int, default=None, help="Worker processes for --runs (default: 1)")
    simulate.add_argument("--out", type=str, default="output", metavar="DIR", help="Directory for CSV traces (default: output)")

    sub.add_parser("chain", parents=[common, model], help="Recurrent state equilibria and exact Markov chain analysis")

    repro = sub.add_parser("repro", parents=[common], help="Golden checks of a worked example")
    repro.add_argument("example", choices=sorted(REPRO), help="Example id")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _write_traces(definition, grouped, out_dir: Path) -> int:
    labels = [s.label for s in definition.states]
    written = 0
    for c, traces in enumerate(grouped, start=1):
        for r, trace in enumerate(traces, start=1):
            write_trace_csv(trace, out_dir / trace_filename(definition.name, c, r), definition.players, labels)
            written += 1
    return written


def run_command(args: argparse.Namespace) -> int:
    if args.command == "repro":
        report = run_repro(args.example)
        print(render_report(report))
        if args.report_json:
            export_report_json(report, args.report_json)
        return EXIT_OK if report["passed"] else EXIT_NEGATIVE

    definition = load_definition(args.definition)
    config = resolve_config(
        definition,
        DEFAULT_CONFIG,
        sep=args.sep,
        epsilon=args.epsilon,
        cadence=args.cadence,
        information=args.information,
        max_steps=getattr(args, "steps", None),
        runs=getattr(args, "runs", None),
        seed=getattr(args, "seed", None),
        workers=getattr(args, "workers", None),
        strict=args.strict,
    )
    if args.command == "verify":
        report = run_verify(definition, config)
    elif args.command == "design":
        report, designed = run_design(definition, config)
        if designed is not None and args.out:
            write_definition(designed, args.out)
            report["out"] = args.out
    elif args.command == "simulate":
        report, grouped = run_simulate(definition, config)
        out_dir = Path(args.out)
        report["traces_written"] = _write_traces(definition, grouped, out_dir)
        report["out"] = str(out_dir)
    else:
        report = run_chain(definition, config)

    print(render_report(report))
    if args.report_json:
        export_report_json(report, args.report_json)
    if config.strict and report.get("verdict") is False:
        return EXIT_NEGATIVE
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return run_command(args)
    except (DefinitionError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except MissingPrerequisiteError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MISSING


if __name__ == "__main__":
    sys.exit(main())
