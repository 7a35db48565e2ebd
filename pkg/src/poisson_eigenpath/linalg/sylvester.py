"""Blokowe rozwiązanie równania Sylvestra dla części pozadiagonalnej."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt
import scipy.linalg

from poisson_eigenpath.shared.errors import NumericalError

from .decomposition import ComplexMatrix, dagger, operator_norm, square_matrix

SEPARATION_TOL = 1e-8


class SingularOperator(NumericalError):
    """Widma bloków PAP i QAQ nie są rozłączne."""

    def __init__(self, separation: float) -> None:
        super().__init__(f"Widma bloków nie są rozłączne (odległość {separation:.3e})")
        self.separation = separation


def range_basis(P: ComplexMatrix) -> ComplexMatrix:
    """Ortonormalna baza obrazu rzutu ortogonalnego P."""

    values, vectors = scipy.linalg.eigh((P + dagger(P)) / 2)
    return np.asarray(vectors[:, values > 0.5], dtype=np.complex128)


def block_separation(A: ComplexMatrix, Up: ComplexMatrix, Uq: ComplexMatrix) -> float:
    spectrum_p = np.linalg.eigvals(dagger(Up) @ A @ Up)
    spectrum_q = np.linalg.eigvals(dagger(Uq) @ A @ Uq)
    return float(np.min(np.abs(spectrum_p[:, np.newaxis] - spectrum_q[np.newaxis, :])))


def sylvester_block_solve(
    A: npt.ArrayLike,
    P: npt.ArrayLike,
    Q: npt.ArrayLike,
    RHS: npt.ArrayLike,
    *,
    separation_tol: float = SEPARATION_TOL,
) -> ComplexMatrix:
    """Jedyne pozadiagonalne Y spełniające [A, Y] = [P, RHS].

    Blok PYQ rozwiązuje A_P·Z − Z·A_Q = PXQ, a blok QYP równanie
    A_Q·W − W·A_P = −QXP (w bazach obrazów P i Q).
    """

    matrix = square_matrix(A)
    X = square_matrix(RHS)
    Up = range_basis(square_matrix(P))
    Uq = range_basis(square_matrix(Q))
    result = np.zeros_like(matrix)
    if Up.shape[1] == 0 or Uq.shape[1] == 0:
        return result

    separation = block_separation(matrix, Up, Uq)
    if separation < separation_tol * max(1.0, operator_norm(matrix)):
        raise SingularOperator(separation)

    Ap = dagger(Up) @ matrix @ Up
    Aq = dagger(Uq) @ matrix @ Uq
    Z = scipy.linalg.solve_sylvester(Ap, -Aq, dagger(Up) @ X @ Uq)
    W = scipy.linalg.solve_sylvester(Aq, -Ap, -(dagger(Uq) @ X @ Up))
    result = Up @ Z @ dagger(Uq) + Uq @ W @ dagger(Up)
    return np.asarray(result, dtype=np.complex128)
