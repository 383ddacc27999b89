import json

import pytest

from script.main import EXIT_MISSING, EXIT_NEGATIVE, EXIT_OK, EXIT_SCHEMA, main
from src.data.load import load_definition
from src.scenarios import scenario_path


def _scenario(name: str) -> str:
    return str(scenario_path(name))


def test_verify_prints_the_verdict(capsys):
    assert main(["verify", _scenario("prisoners_dilemma")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "potential: yes" in out
    assert "normalized_potential: [0, 2, 2, 3]" in out
    assert "nash_equilibria: [(2, 2)]" in out


def test_strict_turns_a_negative_verdict_into_exit_one(capsys):
    assert main(["verify", _scenario("matching_pennies")]) == EXIT_OK
    assert main(["verify", "--strict", _scenario("matching_pennies")]) == EXIT_NEGATIVE
    assert "potential: no" in capsys.readouterr().out


def test_schema_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"players": 2, "cardinalities": [2, 1]}), encoding="utf-8")
    assert main(["verify", str(bad)]) == EXIT_SCHEMA
    assert "cardinalities[1]" in capsys.readouterr().err
    assert main(["verify", str(tmp_path / "missing.json")]) == EXIT_SCHEMA


def test_invalid_arguments_are_rejected_by_the_parser():
    with pytest.raises(SystemExit) as excinfo:
        main(["simulate", _scenario("prisoners_dilemma"), "--steps", "0"])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit):
        main(["verify", _scenario("example_4_3_1"), "--epsilon", "1"])


def test_missing_prerequisites_exit_three(capsys):
    assert main(["simulate", _scenario("line_counterexample")]) == EXIT_MISSING
    assert "initial condition" in capsys.readouterr().err


def test_design_writes_a_reloadable_definition(tmp_path, capsys):
    out = tmp_path / "designed.json"
    assert main(["design", _scenario("example_3_3_1"), "--out", str(out)]) == EXIT_OK
    text = capsys.readouterr().out
    assert "designable: yes" in text
    assert "designed_utilities_verified: yes" in text
    designed = load_definition(out)
    assert len(designed.utilities) == 4
    assert main(["verify", str(out)]) == EXIT_OK
    verified = capsys.readouterr().out
    assert "objective_is_potential: yes" in verified
    assert "neighborhood_determinant: yes" in verified


def test_design_reports_the_first_violation(capsys):
    assert main(["design", "--strict", _scenario("line_counterexample")]) == EXIT_NEGATIVE
    out = capsys.readouterr().out
    assert "designable[player 2]: yes" in out
    assert "first_violation: player=1" in out


def test_simulate_writes_one_csv_per_run(tmp_path, capsys):
    out_dir = tmp_path / "traces"
    code = main([
        "simulate", _scenario("example_4_3_1"), "--runs", "2", "--seed", "7", "--steps", "150", "--out", str(out_dir),
    ])
    assert code == EXIT_OK
    files = sorted(p.name for p in out_dir.glob("*.csv"))
    assert len(files) == 6
    assert files[0] == "example_4_3_1_init1_run1.csv"
    out = capsys.readouterr().out
    assert "seed: 7" in out
    assert "traces_written: 6" in out
    assert "converged_ci95[1]" in out


def test_chain_reports_the_closed_class(capsys):
    assert main(["chain", _scenario("example_4_3_1")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "recurrent_state_equilibria: 1" in out
    assert "rse[1]: a*=(1, 1, 1, 1) states=['x2', 'x3']" in out
    assert "closed_classes: [[x2 (1, 1, 1, 1), x3 (1, 1, 1, 1)]]" in out
    assert "stationary[1]: [1/2, 1/2]" in out
    assert "hitting_time[x1 (1, 1, 1, 1)]: 3/2" in out


def test_flags_override_the_definition(capsys):
    assert main(["verify", _scenario("example_4_3_1"), "--sep", "sep1", "--epsilon", "1/5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "sep: sep1" in out
    assert "state_based_potential: yes" in out


def test_repro_passes_and_exports_json(tmp_path, capsys):
    report_path = tmp_path / "repro.json"
    assert main(["repro", "3.3.1", "--report-json", str(report_path)]) == EXIT_OK
    assert "passed: yes" in capsys.readouterr().out
    exported = json.loads(report_path.read_text(encoding="utf-8"))
    assert exported["entries"]["passed"]["value"] is True
    assert exported["key_order"][0] == "example"
