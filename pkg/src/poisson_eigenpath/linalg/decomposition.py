"""Rozkład spektralny macierzy normalnych i funkcje macierzowe."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.typing as npt
import scipy.linalg

from poisson_eigenpath.shared.errors import InstanceError, NumericalError

ComplexMatrix = npt.NDArray[np.complex128]
ComplexVector = npt.NDArray[np.complex128]
ScalarMap = Callable[[npt.NDArray[np.complex128]], npt.ArrayLike]

HERMITIAN_TOL = 1e-12
NORMALITY_TOL = 1e-10
SCHUR_TOL = 1e-8
PSEUDO_INVERSE_RTOL = 1e-10


class NonNormal(NumericalError):
    """Macierz nie jest normalna (lub nie jest hermitowska mimo deklaracji)."""

    def __init__(self, residual: float, scale: float) -> None:
        super().__init__(f"Residuum normalności {residual:.3e} przekracza tolerancję (skala {scale:.3e})")
        self.residual = residual


class NoConvergence(NumericalError):
    """Solver wartości własnych nie zbiegł."""


class DimensionMismatch(InstanceError):
    """Niezgodne wymiary operandów."""

    def __init__(self, expected: object, actual: object, *, what: str = "macierz") -> None:
        super().__init__(f"Niezgodny wymiar ({what}): oczekiwano {expected}, otrzymano {actual}")


def as_matrix(A: npt.ArrayLike) -> ComplexMatrix:
    """Konwertuje dane wejściowe na gęstą macierz zespoloną."""

    matrix = np.asarray(A, dtype=np.complex128)
    if matrix.ndim != 2:
        raise DimensionMismatch("2 wymiary", matrix.ndim)
    return matrix


def square_matrix(A: npt.ArrayLike) -> ComplexMatrix:
    matrix = as_matrix(A)
    if matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatch("macierz kwadratowa", matrix.shape)
    return matrix


def dagger(A: ComplexMatrix) -> ComplexMatrix:
    return A.conj().T


def operator_norm(A: npt.ArrayLike) -> float:
    """Norma operatorowa: największa wartość osobliwa."""

    matrix = np.asarray(A, dtype=np.complex128)
    if matrix.size == 0:
        return 0.0
    if matrix.ndim == 1:
        return float(np.linalg.norm(matrix))
    return float(np.linalg.norm(matrix, 2))


def is_hermitian(A: ComplexMatrix, tol: float = HERMITIAN_TOL) -> bool:
    return operator_norm(A - dagger(A)) <= tol * operator_norm(A)


def commutator(A: ComplexMatrix, B: ComplexMatrix) -> ComplexMatrix:
    return A @ B - B @ A


@dataclass(frozen=True, slots=True)
class SpectralDecomposition:
    """Wartości własne (posortowane po części rzeczywistej, potem urojonej) i unitarna baza."""

    eigenvalues: npt.NDArray[np.complex128]
    eigenvectors: ComplexMatrix
    hermitian: bool = False

    @property
    def dimension(self) -> int:
        return int(self.eigenvalues.shape[0])

    def apply(self, values: npt.ArrayLike) -> ComplexMatrix:
        """Zwraca V·diag(values)·V*."""

        diagonal = np.asarray(values, dtype=np.complex128)
        V = self.eigenvectors
        return (V * diagonal[np.newaxis, :]) @ dagger(V)

    def to_eigenbasis(self, X: ComplexMatrix) -> ComplexMatrix:
        return dagger(self.eigenvectors) @ X @ self.eigenvectors

    def from_eigenbasis(self, X: ComplexMatrix) -> ComplexMatrix:
        return self.eigenvectors @ X @ dagger(self.eigenvectors)

    def reconstruct(self) -> ComplexMatrix:
        return self.apply(self.eigenvalues)


def eig_normal(
    A: npt.ArrayLike,
    hermitian_hint: bool | None = None,
    *,
    hermitian_tol: float = HERMITIAN_TOL,
    normality_tol: float = NORMALITY_TOL,
    schur_tol: float = SCHUR_TOL,
) -> SpectralDecomposition:
    """Rozkład spektralny macierzy normalnej.

    Dla macierzy hermitowskich używa `scipy.linalg.eigh`, w pozostałych przypadkach
    zespolonego rozkładu Schura z kontrolą, że czynnik trójkątny jest diagonalny.
    `hermitian_hint=None` oznacza automatyczne wykrycie.
    """

    matrix = square_matrix(A)
    hermitian = is_hermitian(matrix, hermitian_tol) if hermitian_hint is None else hermitian_hint

    if hermitian:
        skew = matrix - dagger(matrix)
        try:
            values, vectors = scipy.linalg.eigh((matrix + dagger(matrix)) / 2)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise NoConvergence(str(exc)) from exc
        # ‖·‖₂ ≤ ‖·‖_F: dokładna norma tylko gdy tanie oszacowanie nie rozstrzyga
        spectral_norm = float(np.max(np.abs(values))) if values.size else 0.0
        if np.linalg.norm(skew) > hermitian_tol * spectral_norm:
            asymmetry, norm = operator_norm(skew), operator_norm(matrix)
            if asymmetry > hermitian_tol * norm:
                raise NonNormal(asymmetry, norm)
        return SpectralDecomposition(
            eigenvalues=values.astype(np.complex128),
            eigenvectors=np.asarray(vectors, dtype=np.complex128),
            hermitian=True,
        )

    norm = operator_norm(matrix)
    residual = operator_norm(matrix @ dagger(matrix) - dagger(matrix) @ matrix)
    if residual > normality_tol * norm * norm:
        raise NonNormal(residual, norm * norm)
    try:
        T, Z = scipy.linalg.schur(matrix, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NoConvergence(str(exc)) from exc

    eigenvalues = np.diag(T).copy()
    off_diagonal = operator_norm(T - np.diag(eigenvalues))
    if off_diagonal > schur_tol * max(norm, np.finfo(float).tiny):
        raise NonNormal(off_diagonal, norm)

    order = np.lexsort((eigenvalues.imag, eigenvalues.real))
    return SpectralDecomposition(
        eigenvalues=eigenvalues[order],
        eigenvectors=np.asarray(Z, dtype=np.complex128)[:, order],
        hermitian=False,
    )


def matrix_function(
    A: npt.ArrayLike,
    f: ScalarMap,
    hermitian_hint: bool | None = None,
    *,
    decomposition: SpectralDecomposition | None = None,
) -> ComplexMatrix:
    """V·diag(f(ω_k))·V* dla macierzy normalnej A."""

    decomp = decomposition if decomposition is not None else eig_normal(A, hermitian_hint)
    return decomp.apply(np.asarray(f(decomp.eigenvalues), dtype=np.complex128))


def pseudo_reciprocal(threshold: float) -> ScalarMap:
    """1/x poza otoczeniem zera o promieniu `threshold`, 0 wewnątrz (konwencja f(0)=0)."""

    def _reciprocal(values: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
        out = np.zeros_like(values, dtype=np.complex128)
        mask = np.abs(values) > threshold
        out[mask] = 1.0 / values[mask]
        return out

    return _reciprocal


def pseudo_inverse(
    A: npt.ArrayLike,
    *,
    rtol: float = PSEUDO_INVERSE_RTOL,
    hermitian_hint: bool | None = None,
) -> ComplexMatrix:
    """Pseudoodwrotność macierzy normalnej; wartości poniżej rtol·‖A‖ traktowane jako zero."""

    matrix = square_matrix(A)
    return matrix_function(matrix, pseudo_reciprocal(rtol * operator_norm(matrix)), hermitian_hint)
