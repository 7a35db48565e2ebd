"""Testy ustawień uruchomieniowych i hierarchii wyjątków."""

from __future__ import annotations

from pathlib import Path

from poisson_eigenpath.shared import EigenpathError, InstanceError, NumericalError, RuntimeSettings


def test_settings_defaults(monkeypatch) -> None:
    monkeypatch.delenv("POISSON_EIGENPATH_THREADS", raising=False)
    monkeypatch.delenv("POISSON_EIGENPATH_ERROR_DIR", raising=False)

    settings = RuntimeSettings.from_env()

    assert settings.threads == 1
    assert settings.error_dir is None


def test_settings_read_environment(monkeypatch, tmp_path: Path) -> None:
    monkeypatch.setenv("POISSON_EIGENPATH_THREADS", "6")
    monkeypatch.setenv("POISSON_EIGENPATH_ERROR_DIR", str(tmp_path))

    settings = RuntimeSettings.from_env()

    assert settings.threads == 6
    assert settings.error_dir == tmp_path


def test_settings_ignore_garbage_and_clamp(monkeypatch) -> None:
    monkeypatch.setenv("POISSON_EIGENPATH_THREADS", "many")
    assert RuntimeSettings.from_env().threads == 1

    monkeypatch.setenv("POISSON_EIGENPATH_THREADS", "-3")
    assert RuntimeSettings.from_env().threads == 1


def test_threads_flag_overrides_environment(monkeypatch) -> None:
    monkeypatch.setenv("POISSON_EIGENPATH_THREADS", "6")
    settings = RuntimeSettings.from_env()

    assert settings.with_threads(None).threads == 6
    assert settings.with_threads(2).threads == 2
    assert settings.with_threads(0).threads == 1


def test_error_hierarchy_exit_codes() -> None:
    assert issubclass(InstanceError, ValueError)
    assert issubclass(NumericalError, EigenpathError)
    assert EigenpathError.exit_code == 1
    assert InstanceError.exit_code == 2
    assert NumericalError.exit_code == 3
