"""Ścieżki operatorów A(s) i modele przerwy spektralnej."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Any, Callable, Mapping

import numpy as np
import numpy.typing as npt

from poisson_eigenpath.linalg.decomposition import ComplexMatrix, operator_norm
from poisson_eigenpath.shared.errors import InstanceError
from poisson_eigenpath.spectral.windows import (
    ProjectorPair,
    SpectralWindow,
    WindowFunction,
    window_projector,
)

SAMPLE_CACHE_SIZE = 2048
GRID_POINTS = 1001


class PathKind(str, Enum):
    """Rodzaj ścieżki: hermitowska (hamiltonian) lub unitarna."""

    HERMITIAN = "hermitian"
    UNITARY = "unitary"


class InvalidGapModel(InstanceError):
    """Niepoprawne parametry modelu przerwy."""


@dataclass(frozen=True, slots=True, eq=False)
class PathSample:
    """A(s), A'(s) i A''(s) w jednym punkcie."""

    value: ComplexMatrix
    first: ComplexMatrix
    second: ComplexMatrix


Sampler = Callable[[float], PathSample]
BatchFunction = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.complex128]]


def cached_sampler(sampler: Sampler, maxsize: int = SAMPLE_CACHE_SIZE) -> Sampler:
    """Zapamiętuje próbki ścieżki (klucz: wartość s)."""

    return lru_cache(maxsize=maxsize)(sampler)


@dataclass(frozen=True, slots=True, eq=False)
class OperatorPath:
    """Operator zależny od s wraz z pochodnymi i funkcją okna.

    `metadata` przechowuje m.in. `name`, `initial_state` (wektor w przestrzeni
    ścieżki) i `embedding` (izometria z przestrzeni ścieżki źródłowej).
    `value_fn` to opcjonalna szybka ścieżka dla samej wartości A(s), bez pochodnych;
    `batch_fn` liczy A(s) dla całej siatki naraz (tablica n×d×d).
    """

    kind: PathKind
    dimension: int
    sampler: Sampler
    window_fn: WindowFunction
    metadata: Mapping[str, Any] = field(default_factory=dict)
    value_fn: Callable[[float], ComplexMatrix] | None = None
    batch_fn: BatchFunction | None = None

    @property
    def hermitian(self) -> bool:
        return self.kind is PathKind.HERMITIAN

    @property
    def name(self) -> str:
        return str(self.metadata.get("name", "path"))

    def sample(self, s: float) -> PathSample:
        return self.sampler(float(s))

    def value(self, s: float) -> ComplexMatrix:
        if self.value_fn is not None:
            return self.value_fn(float(s))
        return self.sample(s).value

    def values(self, grid: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        points = np.asarray(grid, dtype=float).reshape(-1)
        if points.size == 0:
            return np.empty((0, self.dimension, self.dimension), dtype=np.complex128)
        if self.batch_fn is not None:
            return self.batch_fn(points)
        return np.stack([self.value(float(s)) for s in points])

    def derivative(self, s: float) -> ComplexMatrix:
        return self.sample(s).first

    def second_derivative(self, s: float) -> ComplexMatrix:
        return self.sample(s).second

    def window(self, s: float) -> SpectralWindow:
        return self.window_fn(float(s))

    def projector(self, s: float) -> ProjectorPair:
        return window_projector(self.value(s), self.window(s), hermitian_hint=self.hermitian)

    def gap(self, s: float) -> float:
        return self.projector(s).gap

    def initial_state(self) -> npt.NDArray[np.complex128] | None:
        state = self.metadata.get("initial_state")
        return None if state is None else np.asarray(state, dtype=np.complex128)

    def with_window(self, window_fn: WindowFunction) -> "OperatorPath":
        return dataclasses.replace(self, window_fn=window_fn)

    def with_metadata(self, **updates: Any) -> "OperatorPath":
        merged = dict(self.metadata)
        merged.update(updates)
        return dataclasses.replace(self, metadata=merged)


def derivative_residual(path: OperatorPath, s: float, step: float = 1e-6) -> float:
    """‖A'(s) − (A(s+h) − A(s−h))/2h‖ / (1 + ‖A(s)‖)."""

    difference = (path.value(s + step) - path.value(s - step)) / (2 * step)
    return operator_norm(path.derivative(s) - difference) / (1 + operator_norm(path.value(s)))


ScalarFunction = Callable[[Any], Any]


@dataclass(frozen=True, slots=True)
class GapModel:
    """Dolne ograniczenie przerwy g₀(s) wraz ze stałymi założenia o całkach g₀⁻ᵖ.

    `B_p` i `B_3mp` pozostają `None`, dopóki model nie zostanie certyfikowany.
    """

    g0: ScalarFunction
    g0m: float
    dg0_bound: float
    dg0: ScalarFunction | None = None
    p: float = 1.5
    B_p: float | None = None
    B_3mp: float | None = None
    label: str = "custom"

    def __post_init__(self) -> None:
        if not self.g0m > 0:
            raise InvalidGapModel(f"g0m musi być dodatnie (g0m={self.g0m})")
        if not self.dg0_bound >= 0:
            raise InvalidGapModel(f"dg0_bound musi być nieujemne ({self.dg0_bound})")
        if not 1.0 <= self.p <= 2.0:
            raise InvalidGapModel(f"Wykładnik p musi leżeć w [1, 2] (p={self.p})")

    @property
    def certified(self) -> bool:
        return self.B_p is not None and self.B_3mp is not None

    def value(self, s: float) -> float:
        return float(self.g0(s))

    def values(self, grid: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """g₀ na siatce; funkcje niewektoryzowane wołane są punkt po punkcie."""

        points = np.asarray(grid, dtype=float)
        try:
            vectorized = np.asarray(self.g0(points), dtype=float)
        except (TypeError, ValueError):
            vectorized = None
        if vectorized is not None and vectorized.shape == points.shape:
            return vectorized
        return np.asarray([self.g0(float(x)) for x in points.reshape(-1)], dtype=float).reshape(
            points.shape
        )

    def derivative(self, s: float, step: float = 1e-6) -> float:
        if self.dg0 is not None:
            return float(self.dg0(s))
        return (float(self.g0(s + step)) - float(self.g0(s - step))) / (2 * step)

    def with_constants(self, *, p: float, B_p: float, B_3mp: float) -> "GapModel":
        return dataclasses.replace(self, p=p, B_p=B_p, B_3mp=B_3mp)

    def with_p(self, p: float) -> "GapModel":
        """Zmiana p unieważnia stałe B."""

        return dataclasses.replace(self, p=p, B_p=None, B_3mp=None)

    def scaled(self, factor: float, *, label: str | None = None) -> "GapModel":
        """Model dla ścieżki c·A(s); stałe B wymagają ponownej certyfikacji."""

        if factor <= 0:
            raise InvalidGapModel(f"Czynnik skalowania musi być dodatni (c={factor})")
        g0 = self.g0
        dg0 = self.dg0
        return GapModel(
            g0=lambda s: factor * g0(s),
            g0m=factor * self.g0m,
            dg0_bound=factor * self.dg0_bound,
            dg0=None if dg0 is None else (lambda s: factor * dg0(s)),
            p=self.p,
            label=label or f"{self.label}*{factor:g}",
        )

    def to_dict(self) -> dict[str, object]:
        return {
            "label": self.label,
            "g0m": self.g0m,
            "dg0_bound": self.dg0_bound,
            "p": self.p,
            "B_p": self.B_p,
            "B_3mp": self.B_3mp,
        }


@dataclass(frozen=True, slots=True)
class GapModelCheck:
    """Wynik porównania g₀(s) z przerwą policzoną numerycznie."""

    satisfied: bool
    worst_s: float
    worst_margin: float
    minimum_gap: float


def gap_profile(path: OperatorPath, grid: npt.ArrayLike) -> npt.NDArray[np.float64]:
    return np.asarray([path.gap(float(s)) for s in np.asarray(grid, dtype=float)])


def verify_gap_model(
    path: OperatorPath, model: GapModel, points: int = GRID_POINTS
) -> GapModelCheck:
    """Sprawdza g₀(s) ≤ g(s) i g0m ≤ min g₀ na siatce."""

    grid = np.linspace(0.0, 1.0, points)
    true_gaps = gap_profile(path, grid)
    model_gaps = model.values(grid)
    margins = true_gaps - model_gaps
    worst = int(np.argmin(margins))
    tolerance = 1e-9 * max(1.0, float(np.max(true_gaps)))
    satisfied = bool(margins[worst] >= -tolerance) and model.g0m <= float(
        np.min(model_gaps)
    ) + tolerance
    return GapModelCheck(
        satisfied=satisfied,
        worst_s=float(grid[worst]),
        worst_margin=float(margins[worst]),
        minimum_gap=float(np.min(true_gaps)),
    )


def numerical_gap_model(
    path: OperatorPath,
    *,
    points: int = GRID_POINTS,
    safety: float = 0.9,
    p: float = 1.5,
) -> GapModel:
    """Empiryczny model przerwy: przerwa z siatki pomnożona przez `safety`.

    Dla ścieżek bez analitycznej przerwy; g₀ jest interpolacją liniową, więc
    dolne ograniczenie obowiązuje tylko z dokładnością do rozdzielczości siatki.
    """

    grid = np.linspace(0.0, 1.0, points)
    gaps = safety * gap_profile(path, grid)
    if not np.all(np.isfinite(gaps)):
        gaps = np.where(np.isfinite(gaps), gaps, 1.0)
    slopes = np.gradient(gaps, grid)

    def g0(s: Any) -> Any:
        return np.interp(s, grid, gaps)

    def dg0(s: Any) -> Any:
        return np.interp(s, grid, slopes)

    return GapModel(
        g0=g0,
        g0m=float(np.min(gaps)),
        dg0_bound=float(np.max(np.abs(slopes))),
        dg0=dg0,
        p=p,
        label=f"numerical:{path.name}",
    )
