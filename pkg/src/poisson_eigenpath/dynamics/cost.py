"""Koszt przebiegu: ∫λ ds (liczba skoków), ∫T ds lub t₀·∫λ/g₀ ds (czas)."""

from __future__ import annotations

import math

import numpy as np
import numpy.typing as npt

from poisson_eigenpath.schedules.assumption import simpson_integral

from .models import CostRecord, Generator, GeneratorKind
from .phases import FEJER_MODEL_T0

INITIAL_INTERVALS = 256


def accumulate_cost(gen: Generator, grid: int | None = None) -> CostRecord:
    """Koszt oczekiwany dla harmonogramu generatora.

    Skoki: ∫λ ds. Liouville: czas ∫T ds. Randomizacja fazy: skoki ∫λ ds
    i czas t₀·∫λ/g₀ ds, a obok czas dla próbkowanego rozkładu τ.
    """

    initial = grid or INITIAL_INTERVALS
    rate = gen.rate.evaluate_many

    if gen.kind is GeneratorKind.LIOUVILLE:
        return CostRecord(
            jump_count_expected=math.nan,
            hamiltonian_time=simpson_integral(rate, initial=initial),
        )

    jumps = simpson_integral(rate, initial=initial)
    if gen.kind is GeneratorKind.JUMP:
        return CostRecord(jump_count_expected=jumps, hamiltonian_time=math.nan)

    assert gen.gap_model is not None
    model = gen.gap_model

    def density(points: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return rate(points) / model.values(points)

    scaled_time = simpson_integral(density, initial=initial)
    sampled_mean = gen.phi.mean_abs_scaled() if gen.phi is not None else math.nan
    return CostRecord(
        jump_count_expected=jumps,
        hamiltonian_time=FEJER_MODEL_T0 * scaled_time,
        sampled_time=sampled_mean * scaled_time,
    )
