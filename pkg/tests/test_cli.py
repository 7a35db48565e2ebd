"""Testy interfejsu CLI."""

from __future__ import annotations

import json
from pathlib import Path
from types import SimpleNamespace

from poisson_eigenpath.cli import (
    EXIT_INVALID,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
    _build_parser,
    main,
)
from poisson_eigenpath.experiments import CheckResult, SuiteResult, VerificationReport
from poisson_eigenpath.shared import NumericalError

LIOUVILLE = "preset:grover-liouville-constant"
FAST = ["--set", "bounds.points=101"]


def test_parser_run_defaults() -> None:
    parser = _build_parser()
    args = parser.parse_args(["run", "--config", LIOUVILLE])
    assert args.command == "run"
    assert args.overrides == []
    assert args.seed is None
    assert args.threads is None
    assert args.allow_violations is False


def test_parser_collects_overrides_and_values() -> None:
    parser = _build_parser()
    args = parser.parse_args(
        [
            "sweep",
            "--config",
            LIOUVILLE,
            "--axis",
            "lambda",
            "--values",
            "10,20, 40",
            "--set",
            "instance.N=16",
            "--set",
            "outputs.stem=x",
        ]
    )
    assert args.values == [10.0, 20.0, 40.0]
    assert args.overrides == ["instance.N=16", "outputs.stem=x"]


def test_parser_verify_defaults() -> None:
    parser = _build_parser()
    args = parser.parse_args(["verify"])
    assert args.suite == "all"
    assert args.seed == 0
    assert args.out == Path("results")
    assert args.quick is False


def test_run_writes_outputs(tmp_path: Path, capsys) -> None:
    code = main(["run", "--config", LIOUVILLE, "--out", str(tmp_path), *FAST])

    assert code == EXIT_OK
    assert (tmp_path / "run.json").exists()
    assert (tmp_path / "run_bound.json").exists()
    assert (tmp_path / "run_fidelity.csv").exists()
    printed = capsys.readouterr().out.splitlines()
    assert str(tmp_path / "run.json") in printed


def test_invalid_config_writes_nothing(tmp_path: Path) -> None:
    out = tmp_path / "out"
    code = main(["run", "--config", LIOUVILLE, "--out", str(out), "--set", "schedule.value=-1"])

    assert code == EXIT_INVALID
    assert not out.exists()


def test_missing_config_and_unknown_preset(tmp_path: Path) -> None:
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == EXIT_INVALID
    assert main(["run", "--config", "preset:nope"]) == EXIT_INVALID


def test_numerical_failure_writes_error_report(monkeypatch, tmp_path: Path, error_dir) -> None:
    def _fail(*_args, **_kwargs):
        raise NumericalError("step size underflow")

    monkeypatch.setattr("poisson_eigenpath.cli.run_experiment", _fail)

    code = main(["run", "--config", LIOUVILLE, "--out", str(tmp_path)])

    assert code == EXIT_NUMERICAL
    reports = list(error_dir.glob("error_*.txt"))
    assert len(reports) == 1
    text = reports[0].read_text(encoding="utf-8")
    assert "step size underflow" in text
    assert LIOUVILLE in text


def test_violated_bound_exit_code(monkeypatch) -> None:
    outcome = SimpleNamespace(violated=True, infidelity=0.5, bound=SimpleNamespace(bound_value=0.1))
    monkeypatch.setattr("poisson_eigenpath.cli.run_experiment", lambda *_a, **_k: outcome)
    monkeypatch.setattr("poisson_eigenpath.cli.write_outputs", lambda _outcome: [])

    assert main(["run", "--config", LIOUVILLE]) == EXIT_NUMERICAL
    assert main(["run", "--config", LIOUVILLE, "--allow-violations"]) == EXIT_OK


def test_sweep_writes_csv(tmp_path: Path) -> None:
    code = main(
        [
            "sweep",
            "--config",
            LIOUVILLE,
            "--axis",
            "lambda",
            "--values",
            "10,20",
            "--out",
            str(tmp_path),
            *FAST,
        ]
    )

    assert code == EXIT_OK
    assert (tmp_path / "run_sweep_lambda.csv").exists()


def test_sweep_axis_mismatch_is_invalid(tmp_path: Path) -> None:
    code = main(
        ["sweep", "--config", LIOUVILLE, "--axis", "kappa", "--values", "2,4", "--out", str(tmp_path)]
    )

    assert code == EXIT_INVALID
    assert not (tmp_path / "run_sweep_kappa.csv").exists()


def test_trajectory_runs_are_reproducible(tmp_path: Path) -> None:
    arguments = [
        "run",
        "--config",
        "preset:grover-phase-trajectories",
        "--seed",
        "11",
        "--set",
        "execution.n_traj=20",
        *FAST,
        "--allow-violations",
    ]

    assert main([*arguments, "--out", str(tmp_path / "a"), "--threads", "1"]) == EXIT_OK
    assert main([*arguments, "--out", str(tmp_path / "b"), "--threads", "3"]) == EXIT_OK
    jsonl = "run_trajectories.jsonl"
    assert (tmp_path / "a" / jsonl).read_bytes() == (tmp_path / "b" / jsonl).read_bytes()
    first, second = (json.loads((tmp_path / d / "run.json").read_text(encoding="utf-8")) for d in "ab")
    assert first["final_fidelity"] == second["final_fidelity"]
    assert first["monte_carlo"] == second["monte_carlo"]


def test_verify_quick(tmp_path: Path) -> None:
    code = main(["verify", "--suite", "appendix_a", "--quick", "--out", str(tmp_path)])

    assert code == EXIT_OK
    assert (tmp_path / "verification.json").exists()
    assert (tmp_path / "verification.md").exists()


def test_verify_reports_violations(monkeypatch, tmp_path: Path) -> None:
    failing = VerificationReport(
        suite="dynamics",
        seed=0,
        suites=(SuiteResult("dynamics", (CheckResult("rhs_trace_free:liouville", False, -1.0, 1),)),),
    )
    monkeypatch.setattr("poisson_eigenpath.cli.verify", lambda *_a, **_k: failing)

    code = main(["verify", "--suite", "dynamics", "--out", str(tmp_path)])

    assert code == EXIT_VERIFICATION_FAILED
