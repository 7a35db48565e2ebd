"""Certyfikacja założenia o całkach g₀⁻ᵖ i kontrola lematów o całkach przerwy."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Literal, Sequence

import numpy as np
import numpy.typing as npt
import scipy.integrate
import structlog

from poisson_eigenpath.paths.base import GapModel, InvalidGapModel
from poisson_eigenpath.paths.hamiltonians import grover_gap_model, qlsp_gap_model
from poisson_eigenpath.shared.errors import NumericalError

logger = structlog.get_logger(__name__)

QUADRATURE_RTOL = 1e-6
INITIAL_INTERVALS = 256
MAX_INTERVALS = 2**20
SPREAD_LIMIT = 2.0
GROVER_RATIOS = (4, 16, 64, 256)
QLSP_KAPPAS = (2.0, 4.0, 8.0, 16.0, 32.0)

GapKind = Literal["grover", "qlsp"]


class NonPositiveGap(NumericalError):
    """g₀(s) ≤ 0 w pewnym punkcie siatki."""

    def __init__(self, s: float, value: float) -> None:
        super().__init__(f"g₀({s:.6f}) = {value:.6g} nie jest dodatnie")
        self.s = s
        self.value = value


class GapBelowMinimum(NumericalError):
    """g₀(s) spada poniżej deklarowanego minimum g₀ₘ."""

    def __init__(self, s: float, value: float, g0m: float) -> None:
        super().__init__(f"g₀({s:.6f}) = {value:.6g} < g₀ₘ = {g0m:.6g}")
        self.s = s
        self.value = value
        self.g0m = g0m


def simpson_integral(
    integrand: Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]],
    *,
    rtol: float = QUADRATURE_RTOL,
    initial: int = INITIAL_INTERVALS,
    maximum: int = MAX_INTERVALS,
) -> float:
    """Całka po [0, 1] regułą Simpsona z podwajaniem siatki do zbieżności `rtol`."""

    intervals = initial
    grid = np.linspace(0.0, 1.0, intervals + 1)
    previous = float(scipy.integrate.simpson(integrand(grid), x=grid))
    while intervals < maximum:
        intervals *= 2
        grid = np.linspace(0.0, 1.0, intervals + 1)
        current = float(scipy.integrate.simpson(integrand(grid), x=grid))
        if not math.isfinite(current):
            return current
        if abs(current - previous) <= rtol * max(abs(current), 1e-300):
            return current
        previous = current
    return previous


def _checked_gaps(model: GapModel, grid: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    gaps = model.values(grid)
    worst = int(np.argmin(gaps))
    if not gaps[worst] > 0:
        raise NonPositiveGap(float(grid[worst]), float(gaps[worst]))
    if gaps[worst] < model.g0m * (1.0 - 1e-9):
        raise GapBelowMinimum(float(grid[worst]), float(gaps[worst]), model.g0m)
    return gaps


def gap_integral(
    model: GapModel | Callable[[Any], Any],
    exponent: float,
    *,
    initial: int = INITIAL_INTERVALS,
) -> float:
    """∫₀¹ g(s)^(−exponent) ds; `model` to GapModel albo funkcja g(s)."""

    def values(points: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        if isinstance(model, GapModel):
            return model.values(points)
        return np.broadcast_to(np.asarray(model(points), dtype=float), points.shape)

    return simpson_integral(lambda points: values(points) ** (-exponent), initial=initial)


def certify_assumption(
    gap_model: GapModel,
    p: float | None = None,
    grid: int = INITIAL_INTERVALS,
) -> tuple[float, float]:
    """Najmniejsze B_p, B_{3−p} spełniające ∫g₀⁻ᵖ ≤ B_p·g₀ₘ^{1−p} i ∫g₀^{p−3} ≤ B_{3−p}·g₀ₘ^{p−2}.

    `grid` to początkowa liczba przedziałów reguły Simpsona (podwajana do
    zbieżności). Dla g₀ ≡ c wychodzi B_p = B_{3−p} = 1/c.
    """

    exponent = gap_model.p if p is None else p
    if not 1.0 <= exponent <= 2.0:
        raise InvalidGapModel(f"Wykładnik p musi leżeć w [1, 2] (p={exponent})")
    _checked_gaps(gap_model, np.linspace(0.0, 1.0, 4 * grid + 1))
    g0m = gap_model.g0m
    B_p = gap_integral(gap_model, exponent, initial=grid) * g0m ** (exponent - 1.0)
    B_3mp = gap_integral(gap_model, 3.0 - exponent, initial=grid) * g0m ** (2.0 - exponent)
    logger.debug("assumption-certified", model=gap_model.label, p=exponent, B_p=B_p, B_3mp=B_3mp)
    return B_p, B_3mp


def certified(gap_model: GapModel, p: float | None = None) -> GapModel:
    """Kopia modelu z wykładnikiem p i policzonymi stałymi B."""

    exponent = gap_model.p if p is None else p
    B_p, B_3mp = certify_assumption(gap_model, exponent)
    return gap_model.with_constants(p=exponent, B_p=B_p, B_3mp=B_3mp)


@dataclass(frozen=True, slots=True)
class GapIntegralRow:
    size: float
    integral: float
    normalized: float


@dataclass(frozen=True, slots=True)
class GapIntegralReport:
    """Całki ∫g⁻ᵖ w ciągu podwajanych rozmiarów i rozrzut ich unormowanych wartości.

    Dla p > 1 normą jest g_m^{1−p}, dla p = 1 log(1 + x), gdzie x = N/M albo κ.
    """

    kind: str
    p: float
    rows: tuple[GapIntegralRow, ...]
    spread: float
    limit: float = SPREAD_LIMIT

    @property
    def satisfied(self) -> bool:
        return self.spread <= self.limit

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "p": self.p,
            "rows": [
                {"size": row.size, "integral": row.integral, "normalized": row.normalized}
                for row in self.rows
            ],
            "spread": self.spread,
            "satisfied": self.satisfied,
        }


def gap_integral_check(
    gap_kind: GapKind,
    p: float,
    sizes: Sequence[float] | None = None,
) -> GapIntegralReport:
    """Sprawdza, że ∫g⁻ᵖ rośnie jak g_m^{1−p} (p > 1) albo logarytmicznie (p = 1)."""

    if not 1.0 <= p <= 2.0:
        raise InvalidGapModel(f"Wykładnik p musi leżeć w [1, 2] (p={p})")
    if gap_kind == "grover":
        values = tuple(sizes or GROVER_RATIOS)
        models = [grover_gap_model(int(round(x)), 1, p=p) for x in values]
    elif gap_kind == "qlsp":
        values = tuple(sizes or QLSP_KAPPAS)
        models = [qlsp_gap_model(float(x), p=p) for x in values]
    else:
        raise InvalidGapModel(f"Nieznany rodzaj przerwy: {gap_kind!r}")

    rows = []
    for size, model in zip(values, models):
        integral = gap_integral(model, p)
        scale = math.log(1.0 + size) if p == 1.0 else model.g0m ** (1.0 - p)
        rows.append(GapIntegralRow(size=float(size), integral=integral, normalized=integral / scale))
    normalized = [row.normalized for row in rows]
    report = GapIntegralReport(
        kind=gap_kind,
        p=p,
        rows=tuple(rows),
        spread=max(normalized) / min(normalized),
    )
    logger.info("gap-integral-checked", kind=gap_kind, p=p, spread=report.spread)
    return report
