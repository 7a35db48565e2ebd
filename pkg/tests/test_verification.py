"""Testy zestawów weryfikacyjnych i ich raportów."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from poisson_eigenpath.experiments import (
    SuiteOptions,
    UnknownSuite,
    run_suite,
    verify,
    write_verification,
)

TINY = SuiteOptions(instances=4, suzuki_cases=4, quick=True)


def test_reduced_options() -> None:
    options = SuiteOptions.reduced()

    assert options.quick
    assert options.instances < SuiteOptions().instances
    assert options.trajectories < SuiteOptions().trajectories


def test_unknown_suite() -> None:
    with pytest.raises(UnknownSuite):
        verify("everything", 0)
    with pytest.raises(UnknownSuite):
        run_suite("all", 0)


def test_calculus_suite_passes() -> None:
    result = run_suite("appendix_a", 0, TINY)

    assert result.violations == 0, [c.to_dict() for c in result.checks if not c.passed]
    names = {check.name for check in result.checks}
    assert {"twiddle_identity", "twiddle_off_diagonal", "twiddle_routes_agree"} <= names
    assert any(name.startswith("projector_second_derivative:") for name in names)


def test_dynamics_suite_passes() -> None:
    result = run_suite("dynamics", 1, TINY)

    assert result.violations == 0, [c.to_dict() for c in result.checks if not c.passed]
    assert any(check.name == "phase_channel_cross_blocks" for check in result.checks)


def test_broken_generator_is_reported(monkeypatch) -> None:
    monkeypatch.setattr(
        "poisson_eigenpath.experiments.verification.rhs",
        lambda gen, s, rho: np.asarray(rho, dtype=np.complex128),
    )

    report = verify("dynamics", 1, TINY)

    assert report.violations > 0
    assert not report.passed
    failed = [check.name for check in report.suites[0].checks if not check.passed]
    assert any(name.startswith("rhs_trace_free:") for name in failed)


def test_reports_are_byte_identical_for_same_seed(tmp_path: Path) -> None:
    first = write_verification(verify("appendix_a", 7, TINY), output_dir=tmp_path / "a")
    second = write_verification(verify("appendix_a", 7, TINY), output_dir=tmp_path / "b")

    assert [path.name for path in first] == ["verification.json", "verification.md"]
    for left, right in zip(first, second):
        assert left.read_bytes() == right.read_bytes()


def test_write_verification_csv(tmp_path: Path) -> None:
    report = verify("appendix_a", 3, TINY)

    written = write_verification(report, output_dir=tmp_path, formats=("csv",))

    header = written[0].read_text(encoding="utf-8").splitlines()[0]
    assert header == "suite,name,passed,worst_margin,count,detail"


@pytest.mark.slow
@pytest.mark.parametrize("suite", ["stochastic", "bounds"])
def test_slow_suites_pass_in_reduced_mode(suite: str) -> None:
    result = run_suite(suite, 0, SuiteOptions.reduced())

    assert result.violations == 0, [c.to_dict() for c in result.checks if not c.passed]
