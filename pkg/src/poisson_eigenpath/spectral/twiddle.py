"""Operacja "twiddle": jedyne pozadiagonalne X̃ spełniające [A, X̃] = [P, X].

Trzy niezależne realizacje (rozkład spektralny, kwadratura konturowa, równanie
Sylvestra) oraz pochodna X̃ wzdłuż ścieżki A(s).
"""

from __future__ import annotations

import math

import numpy as np
import numpy.typing as npt

from poisson_eigenpath.linalg.decomposition import (
    ComplexMatrix,
    DimensionMismatch,
    commutator,
    square_matrix,
)
from poisson_eigenpath.linalg.sylvester import sylvester_block_solve
from poisson_eigenpath.shared.errors import NumericalError

from .windows import (
    ProjectorPair,
    SpectralWindow,
    WindowKind,
    default_contour,
    window_projector,
)

RESOLVENT_LIMIT = 1e12
DEFAULT_QUAD_POINTS = 64
MAX_QUAD_POINTS = 4096


class ResolventBlowup(NumericalError):
    """Rezolwenta w węźle kwadratury ma zbyt dużą normę."""

    def __init__(self, node: complex, norm: float) -> None:
        super().__init__(f"‖R_A(z)‖ = {norm:.3e} w węźle z = {node:.6g}")
        self.node = node
        self.norm = norm


def _check_dimension(pp: ProjectorPair, X: ComplexMatrix) -> None:
    if X.shape != pp.P.shape:
        raise DimensionMismatch(pp.P.shape, X.shape, what="twiddle")


def twiddle_spectral(A: npt.ArrayLike, pp: ProjectorPair, X: npt.ArrayLike) -> ComplexMatrix:
    """X̃ = Σ_k (ω_k − A)⁺ Q X P_k + P_k X Q (ω_k − A)⁺ liczone w bazie własnej A."""

    matrix = square_matrix(A)
    Xm = square_matrix(X)
    _check_dimension(pp, Xm)
    if matrix.shape != Xm.shape:
        raise DimensionMismatch(matrix.shape, Xm.shape, what="twiddle")

    decomp = pp.decomposition
    inside = pp.inside_mask
    Xe = decomp.to_eigenbasis(Xm)
    values = decomp.eigenvalues
    tracked = np.where(inside, pp.tracked_values, 0.0)

    # kolumny w oknie, wiersze poza nim: dzielnik ω_c(l) − ω_j
    denominator = tracked[np.newaxis, :] - values[:, np.newaxis]
    lower = np.outer(~inside, inside)
    Ye = np.zeros_like(Xe)
    Ye[lower] = Xe[lower] / denominator[lower]
    upper = lower.T
    Ye[upper] = Xe[upper] / denominator.T[upper]
    return decomp.from_eigenbasis(Ye)


def _contour_radii(pp: ProjectorPair, window: SpectralWindow) -> tuple[float, float]:
    inside = np.abs(pp.inside_values - window.center)
    outside = np.abs(pp.outside_values - window.center)
    r_in = float(inside.max())
    r_out = float(outside.min()) if outside.size else math.inf
    return r_in, r_out


def quad_points_for(pp: ProjectorPair, window: SpectralWindow, tol: float = 1e-12) -> int:
    """Liczba węzłów reguły trapezów dająca błąd rzędu `tol` dla danego konturu.

    Błąd maleje geometrycznie z ilorazem max(r_in/r, r/r_out).
    """

    if window.kind is not WindowKind.CONTOUR:
        window = default_contour(pp)
    r_in, r_out = _contour_radii(pp, window)
    ratio = max(r_in / window.radius, window.radius / r_out if math.isfinite(r_out) else 0.0)
    if ratio >= 1.0:
        return MAX_QUAD_POINTS
    if ratio <= 0.0:
        return 16
    needed = math.ceil(math.log(tol) / math.log(ratio)) + 8
    return int(min(MAX_QUAD_POINTS, max(16, 8 * math.ceil(needed / 8))))


def twiddle_contour(
    A: npt.ArrayLike,
    w: SpectralWindow,
    X: npt.ArrayLike,
    quad_points: int = DEFAULT_QUAD_POINTS,
    *,
    pp: ProjectorPair | None = None,
) -> ComplexMatrix:
    """(1/2πi)∮ R_A(z) X R_A(z) dz regułą trapezów na okręgu.

    Dla okna przedziałowego używany jest kontur domyślny: okrąg w połowie przerwy
    wokół śledzonych wartości własnych.
    """

    matrix = square_matrix(A)
    Xm = square_matrix(X)
    if matrix.shape != Xm.shape:
        raise DimensionMismatch(matrix.shape, Xm.shape, what="twiddle")
    if quad_points < 1:
        raise ValueError(f"quad_points musi być dodatnie (otrzymano {quad_points})")

    if w.kind is WindowKind.INTERVAL:
        pair = pp if pp is not None else window_projector(matrix, w)
        w = default_contour(pair)

    n = matrix.shape[0]
    theta = 2.0 * np.pi * np.arange(quad_points) / quad_points
    offsets = w.radius * np.exp(1j * theta)
    nodes = w.center + offsets
    shifted = nodes[:, np.newaxis, np.newaxis] * np.eye(n)[np.newaxis, :, :] - matrix
    resolvents = np.linalg.inv(shifted)
    norms = np.linalg.norm(resolvents, ord=2, axis=(1, 2))
    worst = int(np.argmax(norms))
    if norms[worst] > RESOLVENT_LIMIT:
        raise ResolventBlowup(complex(nodes[worst]), float(norms[worst]))

    weights = offsets / quad_points
    sandwiched = resolvents @ Xm @ resolvents
    return np.asarray(np.tensordot(weights, sandwiched, axes=1), dtype=np.complex128)


def twiddle_sylvester(A: npt.ArrayLike, pp: ProjectorPair, X: npt.ArrayLike) -> ComplexMatrix:
    """X̃ z blokowego równania Sylvestra dla rzutów pary `pp`."""

    return sylvester_block_solve(A, pp.P, pp.Q, X)


def twiddle_derivative(
    A: npt.ArrayLike,
    dA: npt.ArrayLike,
    pp: ProjectorPair,
    X: npt.ArrayLike,
    dX: npt.ArrayLike,
) -> ComplexMatrix:
    """Pochodna (X̃)' wzdłuż ścieżki A(s), X(s).

    (X̃)' = twiddle(X') + (Q − P)(P'X̃ + X̃P' + twiddle([A', X̃]) − twiddle([P', X])),
    gdzie P' = twiddle(A').
    """

    matrix = square_matrix(A)
    dAm = square_matrix(dA)
    Xm = square_matrix(X)
    dXm = square_matrix(dX)

    dP = twiddle_spectral(matrix, pp, dAm)
    Xt = twiddle_spectral(matrix, pp, Xm)
    inner = (
        dP @ Xt
        + Xt @ dP
        + twiddle_spectral(matrix, pp, commutator(dAm, Xt))
        - twiddle_spectral(matrix, pp, commutator(dP, Xm))
    )
    return twiddle_spectral(matrix, pp, dXm) + (pp.Q - pp.P) @ inner
