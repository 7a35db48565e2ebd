"""Harmonogramy częstości λ(s) (lub gęstości czasu T(s)): stałe i dopasowane do przerwy."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt

from poisson_eigenpath.paths.base import GapModel
from poisson_eigenpath.shared.errors import InstanceError, NumericalError

ENVELOPE_POINTS = 1001


class ScheduleKind(str, Enum):
    CONSTANT = "constant"
    ADAPTIVE = "adaptive"


class InvalidSchedule(InstanceError):
    """Niepoprawne parametry harmonogramu."""


class AssumptionNotCertified(InstanceError):
    """Model przerwy nie ma certyfikowanych stałych B_p i B_{3−p}."""


class ScheduleNotDifferentiable(NumericalError):
    """1/λ nie jest różniczkowalne (lub λ nie jest dodatnie i skończone)."""


@dataclass(frozen=True, slots=True)
class Schedule:
    """λ(s) stałe albo λ(s) = (1/ε)·C/(g₀(s)^q·g₀ₘ^{2−p}) z q = p − exponent_shift."""

    kind: ScheduleKind
    value: float = 0.0
    gap_model: GapModel | None = None
    C: float = 0.0
    epsilon: float = 0.0
    exponent_shift: int = 0

    def __post_init__(self) -> None:
        if self.kind is ScheduleKind.CONSTANT:
            if not (math.isfinite(self.value) and self.value >= 0):
                raise InvalidSchedule(f"Stała częstość musi być skończona i ≥ 0 ({self.value})")
            return
        if self.gap_model is None:
            raise InvalidSchedule("Harmonogram adaptacyjny wymaga modelu przerwy")
        if not (math.isfinite(self.C) and self.C > 0):
            raise InvalidSchedule(f"Stała C musi być dodatnia (C={self.C})")
        if not 0 < self.epsilon < 1:
            raise InvalidSchedule(f"ε musi leżeć w (0, 1) (ε={self.epsilon})")
        if self.exponent_shift not in (0, 1):
            raise InvalidSchedule(f"exponent_shift musi wynosić 0 lub 1 ({self.exponent_shift})")

    @classmethod
    def constant(cls, value: float) -> "Schedule":
        return cls(kind=ScheduleKind.CONSTANT, value=float(value))

    @classmethod
    def adaptive(
        cls, gap_model: GapModel, C: float, epsilon: float, exponent_shift: int = 0
    ) -> "Schedule":
        return cls(
            kind=ScheduleKind.ADAPTIVE,
            gap_model=gap_model,
            C=float(C),
            epsilon=float(epsilon),
            exponent_shift=int(exponent_shift),
        )

    @property
    def exponent(self) -> float:
        assert self.gap_model is not None
        return self.gap_model.p - self.exponent_shift

    @property
    def prefactor(self) -> float:
        """(1/ε)·C/g₀ₘ^{2−p}."""

        assert self.gap_model is not None
        model = self.gap_model
        return self.C / (self.epsilon * model.g0m ** (2.0 - model.p))

    def evaluate(self, s: float) -> float:
        if self.kind is ScheduleKind.CONSTANT:
            return self.value
        assert self.gap_model is not None
        return self.prefactor / float(self.gap_model.g0(s)) ** self.exponent

    def __call__(self, s: float) -> float:
        return self.evaluate(s)

    def evaluate_many(self, grid: npt.ArrayLike) -> npt.NDArray[np.float64]:
        points = np.asarray(grid, dtype=float)
        if self.kind is ScheduleKind.CONSTANT:
            return np.full(points.shape, self.value)
        assert self.gap_model is not None
        gaps = self.gap_model.values(points)
        return self.prefactor / gaps**self.exponent

    def inverse_derivative(self, s: float) -> float:
        """(1/λ)'(s); dla harmonogramu adaptacyjnego (ε g₀ₘ^{2−p}/C)·q·g₀^{q−1}·g₀'."""

        if self.kind is ScheduleKind.CONSTANT:
            return 0.0
        assert self.gap_model is not None
        model = self.gap_model
        if model.dg0 is None:
            raise ScheduleNotDifferentiable(
                f"Model przerwy {model.label!r} nie ma pochodnej g₀'"
            )
        q = self.exponent
        g = float(model.g0(s))
        return q * g ** (q - 1.0) * float(model.dg0(s)) / self.prefactor

    def maximum(self, points: int = ENVELOPE_POINTS) -> float:
        return float(np.max(self.evaluate_many(np.linspace(0.0, 1.0, points))))

    def to_dict(self) -> dict[str, Any]:
        if self.kind is ScheduleKind.CONSTANT:
            return {"kind": self.kind.value, "value": self.value}
        assert self.gap_model is not None
        return {
            "kind": self.kind.value,
            "C": self.C,
            "epsilon": self.epsilon,
            "exponent_shift": self.exponent_shift,
            "gap_model": self.gap_model.to_dict(),
        }
