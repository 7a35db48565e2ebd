"""Rozkłady czasu τ randomizacji fazy i ich funkcje charakterystyczne.

Rozkłady opisane są w zmiennej bezwymiarowej u = g₀·τ, więc φ(ω) zależy tylko
od ω/g₀, a τ = u/g₀.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Protocol

import numpy as np
import numpy.typing as npt
import scipy.integrate
import structlog

from poisson_eigenpath.shared.errors import InstanceError

logger = structlog.get_logger(__name__)

SUPPORT_LIMIT = 200.0
TABLE_SPACING = 0.01
FEJER_MODEL_T0 = 2.32132
CHARACTERISTIC_POINTS = 4001
CHARACTERISTIC_RANGE = 16.0


class InvalidPhaseDistribution(InstanceError):
    """Gęstość rozkładu τ jest ujemna, pusta lub nie normuje się."""


class PhaseDistribution(Protocol):
    """Rozkład u = g₀τ z funkcją charakterystyczną znikającą poza przerwą."""

    name: str

    def characteristic(self, omega: npt.ArrayLike, g0: float) -> npt.NDArray[np.float64]:
        """φ(ω) dla przerwy g₀."""

    def sample_scaled(self, rng: np.random.Generator, size: int | None = None) -> npt.NDArray[np.float64]:
        """Próbki u = g₀τ."""

    def mean_abs_scaled(self) -> float:
        """E|u| na obciętym nośniku."""


@dataclass(frozen=True, slots=True, eq=False)
class InverseCdfTable:
    """Dystrybuanta odwracana interpolacją liniową."""

    grid: npt.NDArray[np.float64]
    cdf: npt.NDArray[np.float64]
    mean_abs: float

    def sample(self, rng: np.random.Generator, size: int | None = None) -> npt.NDArray[np.float64]:
        uniform = rng.random(size)
        return np.asarray(np.interp(uniform, self.cdf, self.grid), dtype=float)


def _build_table(grid: npt.NDArray[np.float64], density: npt.NDArray[np.float64]) -> InverseCdfTable:
    cumulative = scipy.integrate.cumulative_trapezoid(density, grid, initial=0.0)
    total = float(cumulative[-1])
    if not total > 0:
        raise InvalidPhaseDistribution("Gęstość rozkładu τ ma zerową masę")
    cdf = cumulative / total
    # interp wymaga ściśle rosnącej dystrybuanty
    keep = np.concatenate([[True], np.diff(cdf) > 0])
    mean_abs = float(scipy.integrate.trapezoid(np.abs(grid) * density, grid) / total)
    return InverseCdfTable(grid=grid[keep], cdf=cdf[keep], mean_abs=mean_abs)


def _cosine_transform(
    density: npt.NDArray[np.float64],
    grid: npt.NDArray[np.float64],
    frequencies: npt.NDArray[np.float64],
    chunk: int = 64,
) -> npt.NDArray[np.float64]:
    """∫ f(u) cos(xu) du dla każdej częstości x (porcjami, by ograniczyć pamięć)."""

    out = np.empty(frequencies.shape[0], dtype=float)
    for start in range(0, frequencies.shape[0], chunk):
        block = frequencies[start : start + chunk]
        out[start : start + chunk] = scipy.integrate.trapezoid(
            density[np.newaxis, :] * np.cos(np.outer(block, grid)), grid, axis=1
        )
    return out


def fejer_density(u: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """(1/2π)·sinc²(u/2); transformata trójkąta max(0, 1 − |x|)."""

    half = np.asarray(u, dtype=float) / 2.0
    return np.sinc(half / np.pi) ** 2 / (2.0 * np.pi)


@lru_cache(maxsize=1)
def _fejer_table() -> InverseCdfTable:
    count = int(round(2 * SUPPORT_LIMIT / TABLE_SPACING)) + 1
    grid = np.linspace(-SUPPORT_LIMIT, SUPPORT_LIMIT, count)
    return _build_table(grid, fejer_density(grid))


@dataclass(frozen=True, slots=True)
class FejerDistribution:
    """Domyślny rozkład: φ(ω) = max(0, 1 − |ω|/g₀), nośnik obcięty do |u| ≤ 200."""

    name: str = "fejer"

    def characteristic(self, omega: npt.ArrayLike, g0: float) -> npt.NDArray[np.float64]:
        x = np.abs(np.asarray(omega, dtype=float)) / g0
        return np.maximum(0.0, 1.0 - x)

    def sample_scaled(self, rng: np.random.Generator, size: int | None = None) -> npt.NDArray[np.float64]:
        return _fejer_table().sample(rng, size)

    def mean_abs_scaled(self) -> float:
        return _fejer_table().mean_abs


@dataclass(frozen=True, slots=True, eq=False)
class TabulatedDistribution:
    """Rozkład u = g₀τ zadany gęstością na siatce; φ liczone kwadraturą.

    Używana jest część rzeczywista φ, więc gęstość powinna być symetryczna.
    """

    grid: npt.NDArray[np.float64]
    density: npt.NDArray[np.float64]
    name: str = "tabulated"
    _table: InverseCdfTable = field(init=False, repr=False)
    _frequencies: npt.NDArray[np.float64] = field(init=False, repr=False)
    _characteristic: npt.NDArray[np.float64] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        density = np.asarray(self.density, dtype=float)
        if grid.ndim != 1 or grid.shape != density.shape or grid.size < 3:
            raise InvalidPhaseDistribution("Siatka i gęstość muszą być wektorami tej samej długości (≥ 3)")
        if np.any(np.diff(grid) <= 0):
            raise InvalidPhaseDistribution("Siatka gęstości musi być ściśle rosnąca")
        if np.any(density < 0) or not np.all(np.isfinite(density)):
            raise InvalidPhaseDistribution("Gęstość musi być skończona i nieujemna")
        table = _build_table(grid, density)
        normalized = density / float(scipy.integrate.trapezoid(density, grid))
        frequencies = np.linspace(0.0, CHARACTERISTIC_RANGE, CHARACTERISTIC_POINTS)
        values = _cosine_transform(normalized, grid, frequencies)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "density", normalized)
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_frequencies", frequencies)
        object.__setattr__(self, "_characteristic", np.asarray(values, dtype=float))

        leakage = float(np.max(np.abs(values[frequencies >= 1.0])))
        if leakage > 0.02:
            logger.warning("phase-distribution-leaks-past-gap", name=self.name, leakage=leakage)

    def characteristic(self, omega: npt.ArrayLike, g0: float) -> npt.NDArray[np.float64]:
        x = np.abs(np.asarray(omega, dtype=float)) / g0
        inside = np.interp(np.minimum(x, CHARACTERISTIC_RANGE), self._frequencies, self._characteristic)
        if np.all(x <= CHARACTERISTIC_RANGE):
            return np.asarray(inside, dtype=float)
        flat = x.reshape(-1)
        far = flat > CHARACTERISTIC_RANGE
        direct = _cosine_transform(self.density, self.grid, flat[far])
        result = np.asarray(inside, dtype=float).reshape(-1)
        result[far] = direct
        return result.reshape(x.shape)

    def sample_scaled(self, rng: np.random.Generator, size: int | None = None) -> npt.NDArray[np.float64]:
        return self._table.sample(rng, size)

    def mean_abs_scaled(self) -> float:
        return self._table.mean_abs


def fejer_truncation_mass() -> float:
    """Masa gęstości Fejéra poza |u| ≤ 200 (asymptotycznie 2/(200π))."""

    return 2.0 / (math.pi * SUPPORT_LIMIT)
