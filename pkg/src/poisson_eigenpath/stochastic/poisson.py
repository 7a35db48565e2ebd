"""Niejednorodny proces Poissona na [0, 1] próbkowany metodą przerzedzania."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Union

import numpy as np
import numpy.typing as npt
import scipy.integrate
import structlog

from poisson_eigenpath.shared.errors import InstanceError, NumericalError

logger = structlog.get_logger(__name__)

ENVELOPE_POINTS = 1001
ENVELOPE_SAFETY = 1.01
REFINEMENT_FACTOR = 10

RateFunction = Callable[[float], float]
SeedLike = Union[int, np.random.Generator]


class InvalidRate(InstanceError):
    """Częstość λ(s) jest ujemna lub nieskończona."""


class InvalidRealization(InstanceError):
    """Punkty skoków nie są rosnące lub wychodzą poza [0, 1]."""


class EnvelopeViolation(NumericalError):
    """λ(s) przekroczyło obwiednię λ_max także po zagęszczeniu siatki."""

    def __init__(self, s: float, value: float, envelope: float) -> None:
        super().__init__(
            f"λ({s:.6f}) = {value:.6g} przekracza obwiednię λ_max = {envelope:.6g}"
        )
        self.s = s
        self.value = value
        self.envelope = envelope


def as_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True, slots=True)
class PoissonRealization:
    """Realizacja procesu: ściśle rosnące punkty skoków z [0, 1]."""

    jump_points: tuple[float, ...]

    def __post_init__(self) -> None:
        points = tuple(float(s) for s in self.jump_points)
        if any(not 0.0 <= s <= 1.0 for s in points):
            raise InvalidRealization("Punkty skoków muszą leżeć w [0, 1]")
        if any(b <= a for a, b in zip(points, points[1:])):
            raise InvalidRealization("Punkty skoków muszą być ściśle rosnące")
        object.__setattr__(self, "jump_points", points)

    @classmethod
    def empty(cls) -> "PoissonRealization":
        return cls(())

    @property
    def count(self) -> int:
        return len(self.jump_points)

    def __len__(self) -> int:
        return len(self.jump_points)

    def __iter__(self) -> Any:
        return iter(self.jump_points)


def _evaluate(rate: Any, points: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    many = getattr(rate, "evaluate_many", None)
    if many is not None:
        values = np.asarray(many(points), dtype=float)
    else:
        values = np.array([float(rate(float(s))) for s in points], dtype=float)
    if not np.all(np.isfinite(values)):
        raise InvalidRate("Częstość λ(s) musi być skończona na [0, 1]")
    if np.any(values < 0):
        worst = int(np.argmin(values))
        raise InvalidRate(f"Ujemna częstość λ({points[worst]:.6f}) = {values[worst]:.6g}")
    return values


def rate_envelope(
    rate: Any, *, points: int = ENVELOPE_POINTS, safety: float = ENVELOPE_SAFETY
) -> float:
    """λ_max: maksimum λ na równomiernej siatce pomnożone przez margines."""

    grid = np.linspace(0.0, 1.0, points)
    return float(np.max(_evaluate(rate, grid))) * safety


def _thin(
    rate: Any, envelope: float, rng: np.random.Generator
) -> tuple[npt.NDArray[np.float64], int | None]:
    count = int(rng.poisson(envelope))
    candidates = np.sort(rng.uniform(0.0, 1.0, count))
    acceptance = rng.random(count)
    if count == 0:
        return candidates, None
    values = _evaluate(rate, candidates)
    above = np.flatnonzero(values > envelope)
    if above.size:
        return candidates, int(above[0])
    return candidates[acceptance * envelope < values], None


def sample_poisson(
    rate: RateFunction | Any,
    rng_seed: SeedLike,
    *,
    points: int = ENVELOPE_POINTS,
    safety: float = ENVELOPE_SAFETY,
) -> PoissonRealization:
    """Losuje realizację procesu o częstości λ(s) metodą przerzedzania.

    Kandydaci pochodzą z jednorodnego procesu o częstości λ_max; kandydat w s
    zostaje zachowany z prawdopodobieństwem λ(s)/λ_max. Gdy λ przekroczy
    obwiednię, siatka obwiedni jest zagęszczana raz i losowanie powtarzane.
    """

    rng = as_rng(rng_seed)
    grid_points = points
    for attempt in range(2):
        envelope = rate_envelope(rate, points=grid_points, safety=safety)
        if envelope == 0.0:
            return PoissonRealization.empty()
        accepted, violation = _thin(rate, envelope, rng)
        if violation is None:
            return PoissonRealization(tuple(float(s) for s in accepted))
        s = float(accepted[violation])
        value = float(_evaluate(rate, np.array([s]))[0])
        if attempt == 1:
            raise EnvelopeViolation(s, value, envelope)
        grid_points = (points - 1) * REFINEMENT_FACTOR + 1
        logger.debug("envelope-refined", s=s, value=value, envelope=envelope, points=grid_points)
    raise AssertionError("unreachable")


def expected_count(rate: Any, *, points: int = 4097) -> float:
    """∫₀¹ λ(s) ds (reguła Simpsona na gęstej siatce)."""

    grid = np.linspace(0.0, 1.0, points)
    return float(scipy.integrate.simpson(_evaluate(rate, grid), x=grid))


def poisson_stderr(mean: float, samples: int) -> float:
    """Błąd standardowy średniej liczby skoków dla `samples` realizacji."""

    return math.sqrt(max(mean, 0.0) / samples)
