"""Pochodne rzutu spektralnego wzdłuż ścieżki operatorów."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from poisson_eigenpath.linalg.decomposition import ComplexMatrix

from .twiddle import twiddle_derivative, twiddle_spectral
from .windows import ProjectorPair, window_projector

if TYPE_CHECKING:
    from poisson_eigenpath.paths.base import OperatorPath

FIRST_DIFFERENCE_STEP = 1e-5
SECOND_DIFFERENCE_STEP = 1e-4


def projector_derivative(
    path: "OperatorPath", s: float, pp: ProjectorPair | None = None
) -> ComplexMatrix:
    """P'(s) = twiddle(A'(s))."""

    sample = path.sample(s)
    pair = pp if pp is not None else path.projector(s)
    return twiddle_spectral(sample.value, pair, sample.first)


def projector_second_derivative(
    path: "OperatorPath", s: float, pp: ProjectorPair | None = None
) -> ComplexMatrix:
    """P''(s) jako pochodna twiddle(A') przy X = A'.

    Rozpisane: P'' = twiddle(A'') + (Q − P)(2(P')² + 2·twiddle([A', P'])).
    """

    sample = path.sample(s)
    pair = pp if pp is not None else path.projector(s)
    return twiddle_derivative(sample.value, sample.first, pair, sample.first, sample.second)


def _projector_at(path: "OperatorPath", s: float) -> ComplexMatrix:
    return window_projector(path.value(s), path.window(s), hermitian_hint=path.hermitian).P


def finite_difference_projector(
    path: "OperatorPath",
    s: float,
    *,
    order: int = 1,
    step: float | None = None,
) -> ComplexMatrix:
    """Centralna różnica skończona rzutu (pierwszego lub drugiego rzędu)."""

    if order == 1:
        h = FIRST_DIFFERENCE_STEP if step is None else step
        return (_projector_at(path, s + h) - _projector_at(path, s - h)) / (2 * h)
    if order == 2:
        h = SECOND_DIFFERENCE_STEP if step is None else step
        return (
            _projector_at(path, s + h) - 2 * _projector_at(path, s) + _projector_at(path, s - h)
        ) / (h * h)
    raise ValueError(f"Obsługiwane rzędy różnic to 1 i 2 (otrzymano {order})")


def projector_residuals(pp: ProjectorPair) -> dict[str, float]:
    """Residua P² = P, P* = P oraz Σ_k P_k = P."""

    P = pp.P
    total = sum((block for _, block in pp.inside_eigs), np.zeros_like(P))
    return {
        "idempotence": float(np.linalg.norm(P @ P - P, 2)),
        "self_adjoint": float(np.linalg.norm(P - P.conj().T, 2)),
        "cluster_sum": float(np.linalg.norm(total - P, 2)),
    }
