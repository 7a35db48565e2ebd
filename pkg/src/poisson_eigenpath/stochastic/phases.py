"""Losowanie czasu τ randomizacji fazy."""

from __future__ import annotations

import math

import numpy as np
import numpy.typing as npt

from poisson_eigenpath.dynamics.phases import FejerDistribution, PhaseDistribution
from poisson_eigenpath.shared.errors import InstanceError

from .poisson import SeedLike, as_rng


class NonPositiveGapSample(InstanceError):
    """τ można losować tylko dla dodatniej przerwy g₀(s)."""


def sample_tau(
    phi: PhaseDistribution | None,
    g0: float,
    rng_seed: SeedLike,
    size: int | None = None,
) -> float | npt.NDArray[np.float64]:
    """τ = u/g₀, gdzie u pochodzi z rozkładu `phi` (domyślnie Fejéra)."""

    if not g0 > 0 or not math.isfinite(g0):
        raise NonPositiveGapSample(f"Przerwa g₀ = {g0!r} nie jest dodatnia")
    distribution = phi if phi is not None else FejerDistribution()
    scaled = distribution.sample_scaled(as_rng(rng_seed), size)
    if size is None:
        return float(scaled) / g0
    return np.asarray(scaled, dtype=float) / g0


def empirical_characteristic(
    samples: npt.ArrayLike, omega: float
) -> tuple[float, float]:
    """Średnia E[cos(ωτ)] z próby oraz jej błąd standardowy."""

    values = np.cos(omega * np.asarray(samples, dtype=float))
    count = values.size
    if count < 2:
        raise InstanceError("Do oszacowania potrzeba co najmniej dwóch próbek")
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(count))
