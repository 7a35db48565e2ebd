"""Pytest configuration, shared fixtures and a structlog fallback.

structlog is a declared dependency; when it is missing the numerical tests still
run against a no-op module that accepts every logging call.
"""

from __future__ import annotations

import logging
import sys
import types

import numpy as np
import pytest


class _NoOp:
    def __init__(self, *_args: object, **_kwargs: object) -> None:
        pass

    def __call__(self, *_args: object, **_kwargs: object) -> "_NoOp":
        return self

    def __getattr__(self, _name: str) -> "_NoOp":
        return self


class _NoOpModule(types.ModuleType):
    def __getattr__(self, name: str) -> _NoOp:
        if name.startswith("__"):
            raise AttributeError(name)
        return _NoOp()


class _ProcessorFormatter(logging.Formatter):
    def __init__(self, *_args: object, **_kwargs: object) -> None:
        super().__init__()

    wrap_for_formatter = staticmethod(_NoOp())
    remove_processors_meta = staticmethod(_NoOp())


def _install_structlog_stub() -> None:
    try:
        import structlog  # noqa: F401

        return
    except ImportError:
        pass

    root = _NoOpModule("structlog")
    for name in ("processors", "stdlib", "dev", "contextvars"):
        module = _NoOpModule(f"structlog.{name}")
        setattr(root, name, module)
        sys.modules.setdefault(f"structlog.{name}", module)
    root.stdlib.ProcessorFormatter = _ProcessorFormatter  # type: ignore[attr-defined]
    sys.modules.setdefault("structlog", root)


_install_structlog_stub()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def grover8():
    from poisson_eigenpath.paths import grover_path

    return grover_path(8, [3])


@pytest.fixture
def qlsp_small():
    A = np.array([[1.0, 0.2, 0.0], [0.2, 0.6, 0.1], [0.0, 0.1, -0.5]])
    b = np.array([1.0, 0.5, -0.25])
    return A, b


@pytest.fixture
def error_dir(monkeypatch, tmp_path):
    target = tmp_path / "error_reports"
    monkeypatch.setenv("POISSON_EIGENPATH_ERROR_DIR", str(target))
    return target
