"""Ścieżki hamiltonianów: interpolacja liniowa, wyszukiwanie Grovera i układy liniowe."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Literal, Sequence

import numpy as np
import numpy.typing as npt
import structlog

from poisson_eigenpath.linalg.decomposition import (
    ComplexMatrix,
    ComplexVector,
    DimensionMismatch,
    as_matrix,
    is_hermitian,
    operator_norm,
    square_matrix,
)
from poisson_eigenpath.shared.errors import InstanceError
from poisson_eigenpath.spectral.windows import (
    SpectralWindow,
    WindowFunction,
    ranked_interval_window,
)

from .base import BatchFunction, GapModel, OperatorPath, PathKind, PathSample, cached_sampler

logger = structlog.get_logger(__name__)

HERMITIAN_PATH_TOL = 1e-10
SINGULAR_RTOL = 1e-12
MIN_MODEL_KAPPA = 2.0
FULL_GROVER_LIMIT = 64

GroverSubspace = Literal["auto", "full", "symmetric"]


class InvalidMarkedSet(InstanceError):
    """Zbiór oznaczonych elementów jest pusty, pełny lub wychodzi poza zakres."""


class SingularA(InstanceError):
    """Macierz układu jest osobliwa (lub numerycznie osobliwa)."""


class NonHermitianMatrix(InstanceError):
    """Ścieżka układu liniowego wymaga macierzy hermitowskiej."""


class KappaTooSmall(InstanceError):
    """Zadeklarowany współczynnik uwarunkowania jest mniejszy niż 2."""

    def __init__(self, kappa: float) -> None:
        super().__init__(f"kappa_hint={kappa:g} < {MIN_MODEL_KAPPA:g}: dolne ograniczenie przerwy nie obowiązuje")
        self.kappa = kappa


def _hermitian(A: npt.ArrayLike, *, what: str) -> ComplexMatrix:
    matrix = square_matrix(A)
    if not is_hermitian(matrix, HERMITIAN_PATH_TOL):
        raise NonHermitianMatrix(f"{what} nie jest hermitowska")
    return (matrix + matrix.conj().T) / 2


def _linear_sampler(H0: ComplexMatrix, H1: ComplexMatrix) -> Callable[[float], PathSample]:
    slope = H1 - H0
    zero = np.zeros_like(H0)

    def _sample(s: float) -> PathSample:
        return PathSample(value=(1 - s) * H0 + s * H1, first=slope, second=zero)

    return _sample


def _linear_batch(H0: ComplexMatrix, H1: ComplexMatrix) -> BatchFunction:
    def _values(points: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
        s = points[:, np.newaxis, np.newaxis]
        return (1 - s) * H0 + s * H1

    return _values


def linear_path(
    H0: npt.ArrayLike,
    H1: npt.ArrayLike,
    window_fn: WindowFunction | None = None,
    *,
    metadata: dict[str, Any] | None = None,
) -> OperatorPath:
    """H(s) = (1 − s)H₀ + sH₁.

    Bez `window_fn` śledzony jest stan podstawowy (najmniejsza wartość własna).
    """

    first = _hermitian(H0, what="H0")
    last = _hermitian(H1, what="H1")
    if first.shape != last.shape:
        raise DimensionMismatch(first.shape, last.shape, what="H1")

    sampler = cached_sampler(_linear_sampler(first, last))
    if window_fn is None:
        window_fn = ranked_interval_window(lambda s: sampler(s).value, (0,))
    info: dict[str, Any] = {"name": "linear"}
    info.update(metadata or {})
    return OperatorPath(
        kind=PathKind.HERMITIAN,
        dimension=int(first.shape[0]),
        sampler=sampler,
        window_fn=window_fn,
        metadata=info,
        batch_fn=_linear_batch(first, last),
    )


def _validate_marked(N: int, marked: Sequence[int]) -> tuple[int, ...]:
    indices = tuple(sorted(int(i) for i in marked))
    if N < 2:
        raise InvalidMarkedSet(f"N musi wynosić co najmniej 2 (N={N})")
    if len(set(indices)) != len(indices):
        raise InvalidMarkedSet(f"Powtórzone indeksy w zbiorze oznaczonym: {list(marked)}")
    if not 1 <= len(indices) < N:
        raise InvalidMarkedSet(f"Wymagane 1 ≤ M < N (M={len(indices)}, N={N})")
    if indices[0] < 0 or indices[-1] >= N:
        raise InvalidMarkedSet(f"Indeksy spoza zakresu [0, {N}): {list(indices)}")
    return indices


def grover_gap(ratio: float) -> Callable[[Any], Any]:
    """g(s) = √(1 − 4(1 − M/N)s(1 − s))."""

    def _gap(s: Any) -> Any:
        return np.sqrt(1.0 - 4.0 * (1.0 - ratio) * s * (1.0 - s))

    return _gap


def grover_gap_model(N: int, M: int, *, p: float = 1.5) -> GapModel:
    ratio = M / N
    gap = grover_gap(ratio)
    return GapModel(
        g0=gap,
        g0m=math.sqrt(ratio),
        dg0_bound=2.0,
        dg0=lambda s: -2.0 * (1.0 - ratio) * (1.0 - 2.0 * s) / gap(s),
        p=p,
        label=f"grover:N={N},M={M}",
    )


def grover_embedding(N: int, marked: Sequence[int]) -> ComplexMatrix:
    """Izometria N×2 o kolumnach |m̄⟩ (oznaczone) i |w̄⟩ (pozostałe)."""

    indices = _validate_marked(N, marked)
    mask = np.zeros(N, dtype=bool)
    mask[list(indices)] = True
    columns = np.zeros((N, 2), dtype=np.complex128)
    columns[mask, 0] = 1 / math.sqrt(mask.sum())
    columns[~mask, 1] = 1 / math.sqrt((~mask).sum())
    return columns


def grover_path(
    N: int,
    marked: Sequence[int],
    *,
    subspace: GroverSubspace = "auto",
    p: float = 1.5,
) -> tuple[OperatorPath, GapModel]:
    """Ścieżka H(s) = (1 − s)(1 − |u⟩⟨u|) + s(1 − P_M) i jej model przerwy.

    `subspace="symmetric"` ogranicza ścieżkę do dwuwymiarowej przestrzeni
    niezmienniczej rozpiętej przez |m̄⟩ i |w̄⟩, w której pozostaje ewolucja z |u⟩.
    """

    indices = _validate_marked(N, marked)
    M = len(indices)
    ratio = M / N
    if subspace == "auto":
        subspace = "full" if M == 1 and N <= FULL_GROVER_LIMIT else "symmetric"

    if subspace == "full":
        uniform = np.full(N, 1 / math.sqrt(N), dtype=np.complex128)
        marked_projector = np.zeros((N, N), dtype=np.complex128)
        marked_projector[list(indices), list(indices)] = 1.0
        identity = np.eye(N, dtype=np.complex128)
        H0 = identity - np.outer(uniform, uniform.conj())
        H1 = identity - marked_projector
        initial = uniform
    elif subspace == "symmetric":
        uniform = np.array([math.sqrt(ratio), math.sqrt(1 - ratio)], dtype=np.complex128)
        H0 = np.eye(2, dtype=np.complex128) - np.outer(uniform, uniform.conj())
        H1 = np.diag([0.0, 1.0]).astype(np.complex128)
        initial = uniform
    else:
        raise InstanceError(f"Nieznana podprzestrzeń Grovera: {subspace!r}")

    model = grover_gap_model(N, M, p=p)
    gap = model.g0

    def _window(s: float) -> SpectralWindow:
        g = float(gap(s))
        ground = 0.5 * (1 - g)
        return SpectralWindow.interval(ground - g / 2, ground + g / 2)

    path = OperatorPath(
        kind=PathKind.HERMITIAN,
        dimension=int(H0.shape[0]),
        sampler=cached_sampler(_linear_sampler(H0, H1)),
        batch_fn=_linear_batch(H0, H1),
        window_fn=_window,
        metadata={
            "name": "grover",
            "N": N,
            "M": M,
            "marked": list(indices),
            "subspace": subspace,
            "initial_state": initial,
        },
    )
    logger.debug("grover-path-built", N=N, M=M, subspace=subspace, dimension=path.dimension)
    return path, model


def hermitian_dilation(
    A: npt.ArrayLike, b: npt.ArrayLike
) -> tuple[ComplexMatrix, ComplexVector]:
    """[[0, A], [A*, 0]] z prawą stroną (b, 0).

    Rozwiązanie rozszerzonego układu ma postać (0, A⁻¹b); zob. `dilation_solution`.
    """

    matrix = as_matrix(A)
    rows, cols = matrix.shape
    vector = np.asarray(b, dtype=np.complex128).reshape(-1)
    if vector.shape[0] != rows:
        raise DimensionMismatch(rows, vector.shape[0], what="wektor b")
    dilated = np.zeros((rows + cols, rows + cols), dtype=np.complex128)
    dilated[:rows, rows:] = matrix
    dilated[rows:, :rows] = matrix.conj().T
    rhs = np.concatenate([vector, np.zeros(cols, dtype=np.complex128)])
    return dilated, rhs


def dilation_solution(y: npt.ArrayLike, rows: int) -> ComplexVector:
    """Wydobywa A⁻¹b (drugi blok) z rozwiązania układu rozszerzonego."""

    return np.asarray(y, dtype=np.complex128).reshape(-1)[rows:]


def condition_number(A: npt.ArrayLike) -> float:
    singular = np.linalg.svd(as_matrix(A), compute_uv=False)
    if singular[-1] <= SINGULAR_RTOL * singular[0]:
        return math.inf
    return float(singular[0] / singular[-1])


def qlsp_gap(kappa: float) -> Callable[[Any], Any]:
    """g(s) = √((1 − s)² + (s/κ)²)."""

    def _gap(s: Any) -> Any:
        return np.sqrt((1.0 - s) ** 2 + (s / kappa) ** 2)

    return _gap


def qlsp_gap_model(kappa: float, *, p: float = 1.5) -> GapModel:
    gap = qlsp_gap(kappa)
    return GapModel(
        g0=gap,
        g0m=1.0 / (2.0 * kappa),
        dg0_bound=math.sqrt(1.0 + 1.0 / kappa**2),
        dg0=lambda s: (s - 1.0 + s / kappa**2) / gap(s),
        p=p,
        label=f"qlsp:kappa={kappa:g}",
    )


@dataclass(frozen=True, slots=True, eq=False)
class SolutionExtractor:
    """Wierność stanu końcowego z |0⟩⊗|x(1)⟩, gdzie x(1) ∝ |+⟩⊗Â⁻¹|b⟩."""

    target: ComplexVector

    def __call__(self, rho: npt.ArrayLike) -> float:
        matrix = np.asarray(rho, dtype=np.complex128)
        if matrix.ndim == 1:
            return float(abs(np.vdot(self.target, matrix)) ** 2)
        return float(np.real(np.vdot(self.target, matrix @ self.target)))


def qlsp_path(
    A: npt.ArrayLike,
    b: npt.ArrayLike,
    kappa_hint: float | None = None,
    *,
    p: float = 1.5,
) -> tuple[OperatorPath, GapModel, SolutionExtractor]:
    """Ścieżka H(s) = σ₊⊗(A(s)Q) + σ₋⊗(QA(s)) dla A(s) = (1−s)σ_z⊗1 + sσ_x⊗Â.

    Â = A/‖A‖, Q = 1 − |+,b⟩⟨+,b|. Śledzona jest wartość własna 0, której
    przestrzeń zawiera |0⟩⊗|x(s)⟩ i |1⟩⊗|+,b⟩.
    """

    matrix = square_matrix(A)
    if not is_hermitian(matrix, HERMITIAN_PATH_TOL):
        raise NonHermitianMatrix("Macierz A nie jest hermitowska; użyj hermitian_dilation")
    matrix = (matrix + matrix.conj().T) / 2
    n = matrix.shape[0]
    vector = np.asarray(b, dtype=np.complex128).reshape(-1)
    if vector.shape[0] != n:
        raise DimensionMismatch(n, vector.shape[0], what="wektor b")
    norm_b = float(np.linalg.norm(vector))
    if norm_b == 0.0:
        raise InstanceError("Wektor b nie może być zerowy")
    vector = vector / norm_b

    kappa_true = condition_number(matrix)
    if not math.isfinite(kappa_true):
        raise SingularA(f"Macierz A jest osobliwa (‖A‖={operator_norm(matrix):.3e})")
    if kappa_hint is not None and kappa_hint < MIN_MODEL_KAPPA:
        raise KappaTooSmall(kappa_hint)
    kappa = max(kappa_true, MIN_MODEL_KAPPA)
    if kappa_hint is not None:
        if kappa_hint < kappa_true:
            logger.warning("kappa-hint-below-true", kappa_hint=kappa_hint, kappa_true=kappa_true)
        else:
            kappa = kappa_hint

    scaled = matrix / operator_norm(matrix)
    identity = np.eye(n, dtype=np.complex128)
    sigma_z = np.diag([1.0, -1.0]).astype(np.complex128)
    sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    plus = np.array([1.0, 1.0], dtype=np.complex128) / math.sqrt(2)
    minus = np.array([1.0, -1.0], dtype=np.complex128) / math.sqrt(2)
    plus_b = np.kron(plus, vector)
    Q = np.eye(2 * n, dtype=np.complex128) - np.outer(plus_b, plus_b.conj())

    A0 = np.kron(sigma_z, identity)
    A1 = np.kron(sigma_x, scaled)

    def _hamiltonian(block: ComplexMatrix) -> ComplexMatrix:
        zero = np.zeros_like(block)
        return np.block([[zero, block @ Q], [Q @ block, zero]])

    H0 = _hamiltonian(A0)
    H1 = _hamiltonian(A1)
    model = qlsp_gap_model(kappa, p=p)
    gap = model.g0

    def _window(s: float) -> SpectralWindow:
        half = float(gap(s)) / 2
        return SpectralWindow.interval(-half, half)

    zero_qubit = np.array([1.0, 0.0], dtype=np.complex128)
    initial = np.kron(zero_qubit, np.kron(minus, vector))
    solution = np.linalg.solve(scaled, vector)
    solution = solution / np.linalg.norm(solution)
    target = np.kron(zero_qubit, np.kron(plus, solution))

    path = OperatorPath(
        kind=PathKind.HERMITIAN,
        dimension=4 * n,
        sampler=cached_sampler(_linear_sampler(H0, H1)),
        batch_fn=_linear_batch(H0, H1),
        window_fn=_window,
        metadata={
            "name": "qlsp",
            "n": n,
            "kappa": kappa,
            "kappa_true": kappa_true,
            "initial_state": initial,
        },
    )
    logger.debug("qlsp-path-built", n=n, kappa=kappa, kappa_true=kappa_true)
    return path, model, SolutionExtractor(target=target)


def qlsp_state(A: npt.ArrayLike, b: npt.ArrayLike, s: float) -> ComplexVector:
    """|x(s)⟩ ∝ A(s)⁻¹|+,b⟩ dla A(s) = (1−s)σ_z⊗1 + sσ_x⊗Â."""

    matrix = square_matrix(A)
    n = matrix.shape[0]
    vector = np.asarray(b, dtype=np.complex128).reshape(-1)
    vector = vector / np.linalg.norm(vector)
    scaled = matrix / operator_norm(matrix)
    sigma_z = np.diag([1.0, -1.0]).astype(np.complex128)
    sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    plus_b = np.kron(np.array([1.0, 1.0]) / math.sqrt(2), vector)
    A_s = (1 - s) * np.kron(sigma_z, np.eye(n)) + s * np.kron(sigma_x, scaled)
    x = np.linalg.solve(A_s, plus_b)
    return np.asarray(x / np.linalg.norm(x), dtype=np.complex128)


def random_hermitian(
    dim: int, rng: np.random.Generator, *, scale: float = 1.0
) -> ComplexMatrix:
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (raw + raw.conj().T) / 2


def random_unitary(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(raw)
    phases = np.diag(r) / np.abs(np.diag(r))
    return np.asarray(q * phases[np.newaxis, :], dtype=np.complex128)


def random_qlsp_instance(
    dim: int, kappa: float, rng: np.random.Generator
) -> tuple[ComplexMatrix, ComplexVector]:
    """Losowa hermitowska macierz o widmie w ±[1/κ, 1] (z oboma końcami) i losowe b."""

    if kappa < 1:
        raise InstanceError(f"kappa musi być ≥ 1 (kappa={kappa})")
    magnitudes = np.concatenate([[1.0, 1.0 / kappa], rng.uniform(1.0 / kappa, 1.0, dim - 2)])
    signs = rng.choice([-1.0, 1.0], size=dim)
    V = random_unitary(dim, rng)
    A = (V * (signs * magnitudes)[np.newaxis, :]) @ V.conj().T
    b = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return (A + A.conj().T) / 2, b / np.linalg.norm(b)
