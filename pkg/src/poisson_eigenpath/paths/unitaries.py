"""Ścieżki unitarne budowane ze ścieżek hamiltonianów.

Kubityzacja U = [[H, −√(1−H²)], [√(1−H²), H]], krok e^{−iπH/2} oraz kroki
Trottera pierwszego i drugiego rzędu dla H(s) = (1 − s)H₀ + sH₁.
"""

from __future__ import annotations

import math
from typing import Any, Callable

import numpy as np
import numpy.typing as npt
import structlog

from poisson_eigenpath.linalg.decomposition import (
    ComplexMatrix,
    DimensionMismatch,
    eig_normal,
    operator_norm,
    square_matrix,
)
from poisson_eigenpath.linalg.functions import (
    HALF_PI_ROTATION,
    SQRT_COMPLEMENT,
    function_derivatives,
)
from poisson_eigenpath.shared.errors import InstanceError
from poisson_eigenpath.spectral.windows import (
    SpectralWindow,
    WindowFunction,
    contour_around,
    ranked_interval_window,
    window_projector,
)

from .base import GapModel, OperatorPath, PathKind, PathSample, cached_sampler

logger = structlog.get_logger(__name__)

QUBITISATION_MARGIN = 1e-6
EXP_STEP_NORM = 0.5
TROTTER_NORM = 1.0
NORM_SLACK = 1e-12
GRID_POINTS = 101


class NormTooLarge(InstanceError):
    """Norma hamiltonianu przekracza dopuszczalną wartość dla danej konstrukcji."""

    def __init__(self, norm: float, limit: float, *, s: float | None = None) -> None:
        where = "" if s is None else f" w s={s:.4f}"
        super().__init__(f"‖H‖ = {norm:.6g} > {limit:.6g}{where}")
        self.norm = norm
        self.limit = limit


class StepTooLarge(InstanceError):
    """Krok Trottera h nie spełnia 0 < h < √g."""

    def __init__(self, h: float, gap: float) -> None:
        super().__init__(f"Krok h={h:.6g} ≥ √g={math.sqrt(max(gap, 0.0)):.6g}")
        self.h = h
        self.gap = gap


def _require_hermitian(path: OperatorPath) -> None:
    if not path.hermitian:
        raise InstanceError(f"Ścieżka {path.name!r} musi być hermitowska")


def scale_path(path: OperatorPath, factor: float) -> OperatorPath:
    """Ścieżka c·A(s) z przeskalowanym oknem."""

    if factor <= 0:
        raise InstanceError(f"Czynnik skalowania musi być dodatni (c={factor})")
    source = path.sample
    source_window = path.window_fn

    def _sample(s: float) -> PathSample:
        sample = source(s)
        return PathSample(
            value=factor * sample.value,
            first=factor * sample.first,
            second=factor * sample.second,
        )

    def _window(s: float) -> SpectralWindow:
        return source_window(s).scaled(factor)

    metadata = dict(path.metadata)
    metadata["scale"] = factor * float(path.metadata.get("scale", 1.0))
    return OperatorPath(
        kind=path.kind,
        dimension=path.dimension,
        sampler=cached_sampler(_sample),
        window_fn=_window,
        metadata=metadata,
        value_fn=lambda s: factor * path.value(s),
        batch_fn=lambda points: factor * path.values(points),
    )


def _mapped_window(
    source: OperatorPath, spectrum_map: Callable[[npt.NDArray[np.complex128]], Any]
) -> WindowFunction:
    """Kontur wokół obrazów śledzonych wartości własnych H przy odwzorowaniu widma."""

    def _window(s: float) -> SpectralWindow:
        pair = source.projector(s)
        inside = np.asarray(spectrum_map(pair.inside_values), dtype=np.complex128)
        outside = np.asarray(spectrum_map(pair.outside_values), dtype=np.complex128)
        return contour_around(inside, outside)

    return _window


def _max_norm(path: OperatorPath, points: int = GRID_POINTS) -> tuple[float, float]:
    grid = np.linspace(0.0, 1.0, points)
    norms = np.array([operator_norm(path.value(float(s))) for s in grid])
    worst = int(np.argmax(norms))
    return float(norms[worst]), float(grid[worst])


def _stacked_eigh(
    path: OperatorPath, points: npt.NDArray[np.float64]
) -> tuple[npt.NDArray[np.complex128], npt.NDArray[np.float64], npt.NDArray[np.complex128]]:
    """H(s) na siatce wraz z rozkładem własnym całego stosu (jedno wywołanie eigh)."""

    H = path.values(points)
    omega, V = np.linalg.eigh((H + np.conj(np.swapaxes(H, -1, -2))) / 2)
    return H, omega, V


def _stacked_apply(
    V: npt.NDArray[np.complex128], diagonal: npt.NDArray[np.complex128]
) -> npt.NDArray[np.complex128]:
    return (V * diagonal[:, np.newaxis, :]) @ np.conj(np.swapaxes(V, -1, -2))


def _embed_state(metadata: dict[str, Any], isometry: ComplexMatrix | None) -> None:
    state = metadata.get("initial_state")
    if state is not None and isometry is not None:
        metadata["initial_state"] = isometry @ np.asarray(state, dtype=np.complex128)


def qubitised_path(h: OperatorPath) -> OperatorPath:
    """U(s) = 1⊗H + (−iσ_y)⊗√(1 − H²); śledzona gałąź ω + i√(1 − ω²) na |y−⟩."""

    _require_hermitian(h)
    limit = 1.0 - QUBITISATION_MARGIN
    norm, where = _max_norm(h)
    if norm > limit:
        raise NormTooLarge(norm, limit, s=where)

    rotation = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=np.complex128)
    identity = np.eye(2, dtype=np.complex128)
    source = h.sample

    def _sample(s: float) -> PathSample:
        sample = source(s)
        decomposition = eig_normal(sample.value, hermitian_hint=True)
        largest = float(np.max(np.abs(decomposition.eigenvalues)))
        if largest > limit:
            raise NormTooLarge(largest, limit, s=s)
        S, dS, ddS = function_derivatives(decomposition, SQRT_COMPLEMENT, sample.first, sample.second)
        assert ddS is not None
        return PathSample(
            value=np.kron(identity, sample.value) + np.kron(rotation, S),
            first=np.kron(identity, sample.first) + np.kron(rotation, dS),
            second=np.kron(identity, sample.second) + np.kron(rotation, ddS),
        )

    def _value(s: float) -> ComplexMatrix:
        decomposition = eig_normal(h.value(s), hermitian_hint=True)
        omega = np.real(decomposition.eigenvalues)
        S = decomposition.apply(np.sqrt(np.clip(1.0 - omega**2, 0.0, None)))
        return np.kron(identity, h.value(s)) + np.kron(rotation, S)

    def _values(points: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
        H, omega, V = _stacked_eigh(h, points)
        S = _stacked_apply(V, np.sqrt(np.clip(1.0 - omega**2, 0.0, None)).astype(np.complex128))
        d = h.dimension
        U = np.empty((points.size, 2 * d, 2 * d), dtype=np.complex128)
        U[:, :d, :d] = H
        U[:, d:, d:] = H
        U[:, :d, d:] = -S
        U[:, d:, :d] = S
        return U

    def _branch(values: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
        omega = np.real(values)
        return omega + 1j * np.sqrt(1.0 - omega**2)

    def _window(s: float) -> SpectralWindow:
        pair = h.projector(s)
        inside = _branch(pair.inside_values)
        outside = np.concatenate(
            [_branch(pair.outside_values), np.conj(_branch(pair.decomposition.eigenvalues))]
        )
        return contour_around(inside, outside)

    y_minus = np.array([1.0, -1j], dtype=np.complex128) / math.sqrt(2)
    isometry = np.kron(y_minus[:, np.newaxis], np.eye(h.dimension, dtype=np.complex128))
    metadata = dict(h.metadata)
    metadata.update({"name": f"qubitised({h.name})", "source": h.name, "embedding": isometry})
    _embed_state(metadata, isometry)
    return OperatorPath(
        kind=PathKind.UNITARY,
        dimension=2 * h.dimension,
        sampler=cached_sampler(_sample),
        window_fn=_window,
        metadata=metadata,
        value_fn=_value,
        batch_fn=_values,
    )


def exp_path(h: OperatorPath) -> OperatorPath:
    """U(s) = e^{−iπH(s)/2} dla ‖H(s)‖ ≤ 1/2; przestrzenie własne jak dla H."""

    _require_hermitian(h)
    norm, where = _max_norm(h)
    if norm > EXP_STEP_NORM + NORM_SLACK:
        raise NormTooLarge(norm, EXP_STEP_NORM, s=where)
    source = h.sample

    def _sample(s: float) -> PathSample:
        sample = source(s)
        decomposition = eig_normal(sample.value, hermitian_hint=True)
        U, dU, ddU = function_derivatives(decomposition, HALF_PI_ROTATION, sample.first, sample.second)
        assert ddU is not None
        return PathSample(value=U, first=dU, second=ddU)

    def _value(s: float) -> ComplexMatrix:
        decomposition = eig_normal(h.value(s), hermitian_hint=True)
        return decomposition.apply(np.exp(-0.5j * math.pi * decomposition.eigenvalues))

    def _values(points: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
        _, omega, V = _stacked_eigh(h, points)
        return _stacked_apply(V, np.exp(-0.5j * math.pi * omega))

    metadata = dict(h.metadata)
    metadata.update(
        {
            "name": f"exp({h.name})",
            "source": h.name,
            "embedding": np.eye(h.dimension, dtype=np.complex128),
        }
    )
    return OperatorPath(
        kind=PathKind.UNITARY,
        dimension=h.dimension,
        sampler=cached_sampler(_sample),
        window_fn=_mapped_window(h, lambda w: np.exp(-0.5j * math.pi * np.real(w))),
        metadata=metadata,
        value_fn=_value,
        batch_fn=_values,
    )


class _FactorExponential:
    """e^{c(s)·H} dla c(s) liniowego w s, z rozkładu własnego H."""

    def __init__(self, H: ComplexMatrix, offset: complex, slope: complex) -> None:
        decomposition = eig_normal(H, hermitian_hint=True)
        self._values = decomposition.eigenvalues
        self._vectors = decomposition.eigenvectors
        self._offset = offset
        self._slope = slope

    def value(self, s: float) -> ComplexMatrix:
        phases = np.exp((self._offset + self._slope * s) * self._values)
        return (self._vectors * phases[np.newaxis, :]) @ self._vectors.conj().T

    def __call__(self, s: float) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
        coefficient = self._offset + self._slope * s
        phases = np.exp(coefficient * self._values)
        V = self._vectors
        value = (V * phases[np.newaxis, :]) @ V.conj().T
        first = (V * (self._slope * self._values * phases)[np.newaxis, :]) @ V.conj().T
        second = (V * ((self._slope * self._values) ** 2 * phases)[np.newaxis, :]) @ V.conj().T
        return value, first, second


def _product_rule(
    factors: list[tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]],
) -> PathSample:
    value, first, second = factors[0]
    for next_value, next_first, next_second in factors[1:]:
        second = second @ next_value + 2 * first @ next_first + value @ next_second
        first = first @ next_value + value @ next_first
        value = value @ next_value
    return PathSample(value=value, first=first, second=second)


class _TrotterProduct:
    """Iloczyn czynników e^{c(s)H_i}: U₁,ₕ = e^{A}e^{B}, U₂,ₕ = e^{A/2}e^{B}e^{A/2}."""

    def __init__(self, H0: ComplexMatrix, H1: ComplexMatrix, h: float, order: int) -> None:
        c = -0.5j * math.pi * h
        if order == 1:
            self._factors = [_FactorExponential(H0, c, -c), _FactorExponential(H1, 0.0, c)]
        elif order == 2:
            outer = _FactorExponential(H0, c / 2, -c / 2)
            self._factors = [outer, _FactorExponential(H1, 0.0, c), outer]
        else:
            raise InstanceError(f"Rząd kroku Trottera musi wynosić 1 lub 2 (order={order})")

    def sample(self, s: float) -> PathSample:
        return _product_rule([factor(s) for factor in self._factors])

    def value(self, s: float) -> ComplexMatrix:
        product = self._factors[0].value(s)
        for factor in self._factors[1:]:
            product = product @ factor.value(s)
        return product


def trotter_step(H0: ComplexMatrix, H1: ComplexMatrix, s: float, h: float, order: int) -> ComplexMatrix:
    """U₁,ₕ(s) lub U₂,ₕ(s) w jednym punkcie (bez pochodnych)."""

    return _TrotterProduct(square_matrix(H0), square_matrix(H1), h, order).value(s)


def suzuki_deviation(H0: npt.ArrayLike, H1: npt.ArrayLike, s: float, h: float) -> float:
    """‖U₂,ₕ(s) − e^{−iπhH(s)/2}‖."""

    first = square_matrix(H0)
    last = square_matrix(H1)
    H = (1 - s) * first + s * last
    decomposition = eig_normal(H, hermitian_hint=True)
    exact = decomposition.apply(np.exp(-0.5j * math.pi * h * decomposition.eigenvalues))
    return operator_norm(trotter_step(first, last, s, h, 2) - exact)


def trotter_path(
    H0: npt.ArrayLike,
    H1: npt.ArrayLike,
    h: float,
    order: int,
    *,
    window_fn: WindowFunction | None = None,
) -> OperatorPath:
    """Krok Trottera dla H(s) = (1 − s)H₀ + sH₁ z długością kroku h.

    `window_fn` określa śledzone wartości własne H(s) (domyślnie stan podstawowy).
    Okno U to kontur wokół wartości własnych U najbliższych e^{−iπhω/2} dla
    śledzonych ω; przestrzenie własne U różnią się od przestrzeni H.
    """

    first = square_matrix(H0)
    last = square_matrix(H1)
    if first.shape != last.shape:
        raise DimensionMismatch(first.shape, last.shape, what="H1")
    if not h > 0:
        raise InstanceError(f"Krok Trottera musi być dodatni (h={h})")
    for matrix in (first, last):
        norm = operator_norm(matrix)
        if norm > TROTTER_NORM + NORM_SLACK:
            raise NormTooLarge(norm, TROTTER_NORM)

    def _hamiltonian(s: float) -> ComplexMatrix:
        return (1 - s) * first + s * last

    source_window = window_fn or ranked_interval_window(_hamiltonian, (0,))
    grid = np.linspace(0.0, 1.0, GRID_POINTS)
    minimum_gap = min(
        window_projector(_hamiltonian(float(s)), source_window(float(s)), hermitian_hint=True).gap
        for s in grid
    )
    if h * h >= minimum_gap:
        raise StepTooLarge(h, minimum_gap)

    product = _TrotterProduct(first, last, h, order)
    sampler = cached_sampler(product.sample)

    def _window(s: float) -> SpectralWindow:
        pair = window_projector(_hamiltonian(s), source_window(s), hermitian_hint=True)
        reference = np.exp(-0.5j * math.pi * h * np.real(pair.decomposition.eigenvalues))
        spectrum = eig_normal(sampler(s).value, hermitian_hint=False).eigenvalues
        nearest = np.argmin(np.abs(spectrum[:, np.newaxis] - reference[np.newaxis, :]), axis=1)
        tracked = pair.inside_mask[nearest]
        return contour_around(spectrum[tracked], spectrum[~tracked])

    logger.debug("trotter-path-built", h=h, order=order, minimum_gap=minimum_gap)
    return OperatorPath(
        kind=PathKind.UNITARY,
        dimension=int(first.shape[0]),
        sampler=sampler,
        window_fn=_window,
        metadata={
            "name": f"trotter{order}",
            "h": h,
            "order": order,
            "embedding": np.eye(first.shape[0], dtype=np.complex128),
        },
        value_fn=product.value,
    )


def trotter_gap_model(model: GapModel, h: float) -> GapModel:
    """Dolne ograniczenie przerwy U: h(g₀(s) − h²)."""

    if h * h >= model.g0m:
        raise StepTooLarge(h, model.g0m)
    g0 = model.g0
    dg0 = model.dg0
    return GapModel(
        g0=lambda s: h * (g0(s) - h * h),
        g0m=h * (model.g0m - h * h),
        dg0_bound=h * model.dg0_bound,
        dg0=None if dg0 is None else (lambda s: h * dg0(s)),
        p=model.p,
        label=f"trotter:{model.label}:h={h:g}",
    )
