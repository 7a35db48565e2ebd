"""Pochodne funkcji operatorowych f(H(s)) liczone w bazie własnej H.

Pierwsza pochodna to ilorazy różnicowe f[ω_j, ω_k] pomnożone po współrzędnych
przez H'; druga dokłada składnik 2·Σ_l f[ω_j, ω_l, ω_k]·H'_{jl}·H'_{lk}.
Dla √(1−x²) i exp(−iπx/2) pokrywa się to ze wzorami całkowymi na pochodne
pierwiastka i eksponenty, ale jest dokładne co do precyzji maszynowej.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.typing as npt

from .decomposition import ComplexMatrix, SpectralDecomposition

ArrayMap = Callable[[npt.NDArray[np.complex128]], npt.NDArray[np.complex128]]

COINCIDENCE_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class DifferentiableFunction:
    """Funkcja skalarna wraz z pierwszą i drugą pochodną (wektoryzowane)."""

    name: str
    value: ArrayMap
    first: ArrayMap
    second: ArrayMap


def _sqrt_complement(x: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
    return np.sqrt(1.0 - np.real(x) ** 2).astype(np.complex128)


def _sqrt_complement_first(x: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
    real = np.real(x)
    return (-real / np.sqrt(1.0 - real**2)).astype(np.complex128)


def _sqrt_complement_second(x: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
    real = np.real(x)
    return (-1.0 / (1.0 - real**2) ** 1.5).astype(np.complex128)


SQRT_COMPLEMENT = DifferentiableFunction(
    name="sqrt(1-x^2)",
    value=_sqrt_complement,
    first=_sqrt_complement_first,
    second=_sqrt_complement_second,
)


def exponential(coefficient: complex) -> DifferentiableFunction:
    """exp(c·x) z pochodnymi c·exp(c·x) i c²·exp(c·x)."""

    c = complex(coefficient)
    return DifferentiableFunction(
        name=f"exp({c}*x)",
        value=lambda x: np.exp(c * x),
        first=lambda x: c * np.exp(c * x),
        second=lambda x: c * c * np.exp(c * x),
    )


HALF_PI_ROTATION = exponential(-0.5j * math.pi)


def first_divided_differences(
    fn: DifferentiableFunction,
    eigenvalues: npt.NDArray[np.complex128],
    *,
    tol: float = COINCIDENCE_TOL,
) -> ComplexMatrix:
    """Macierz f[ω_j, ω_k] (f'(ω) dla par pokrywających się w granicach `tol`)."""

    w = np.asarray(eigenvalues, dtype=np.complex128)
    diff = w[:, np.newaxis] - w[np.newaxis, :]
    values = fn.value(w)
    close = np.abs(diff) <= tol * max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    safe = np.where(close, 1.0, diff)
    quotient = (values[:, np.newaxis] - values[np.newaxis, :]) / safe
    midpoint = (w[:, np.newaxis] + w[np.newaxis, :]) / 2
    return np.where(close, fn.first(midpoint), quotient)


def second_divided_differences(
    fn: DifferentiableFunction,
    eigenvalues: npt.NDArray[np.complex128],
    *,
    tol: float = COINCIDENCE_TOL,
) -> npt.NDArray[np.complex128]:
    """Tensor f[ω_j, ω_l, ω_k] indeksowany [j, l, k]."""

    w = np.asarray(eigenvalues, dtype=np.complex128)
    scale = max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    first = first_divided_differences(fn, w, tol=tol)
    derivative = fn.first(w)
    curvature = fn.second(w)

    wj = w[:, np.newaxis, np.newaxis]
    wl = w[np.newaxis, :, np.newaxis]
    wk = w[np.newaxis, np.newaxis, :]
    outer_close = np.abs(wj - wk) <= tol * scale
    inner_close = np.abs(wj - wl) <= tol * scale

    # j ≠ k: (f[ω_j, ω_l] − f[ω_l, ω_k]) / (ω_j − ω_k)
    generic = (first[:, :, np.newaxis] - first[np.newaxis, :, :]) / np.where(
        outer_close, 1.0, wj - wk
    )
    # j ≈ k, l różne: (f'(ω_j) − f[ω_j, ω_l]) / (ω_j − ω_l)
    repeated = (derivative[:, np.newaxis, np.newaxis] - first[:, :, np.newaxis]) / np.where(
        inner_close, 1.0, wj - wl
    )
    triple = np.broadcast_to(curvature[:, np.newaxis, np.newaxis] / 2, generic.shape)

    return np.where(outer_close, np.where(inner_close, triple, repeated), generic)


def function_derivatives(
    decomposition: SpectralDecomposition,
    fn: DifferentiableFunction,
    dA: ComplexMatrix,
    ddA: ComplexMatrix | None = None,
) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix | None]:
    """Zwraca (f(A), d/ds f(A), d²/ds² f(A)) dla normalnego A(s) o pochodnych dA, ddA."""

    w = decomposition.eigenvalues
    value = decomposition.apply(fn.value(w))
    first = first_divided_differences(fn, w)
    dA_e = decomposition.to_eigenbasis(dA)
    derivative = decomposition.from_eigenbasis(first * dA_e)
    if ddA is None:
        return value, derivative, None

    second = second_divided_differences(fn, w)
    ddA_e = decomposition.to_eigenbasis(ddA)
    quadratic = 2.0 * np.einsum("jlk,jl,lk->jk", second, dA_e, dA_e)
    second_derivative = decomposition.from_eigenbasis(quadratic + first * ddA_e)
    return value, derivative, second_derivative
