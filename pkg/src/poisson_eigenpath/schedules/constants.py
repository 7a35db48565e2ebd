"""Stałe C harmonogramów adaptacyjnych liczone z norm pochodnych ścieżki."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt
import structlog

from poisson_eigenpath.linalg.decomposition import operator_norm
from poisson_eigenpath.paths.base import GapModel, OperatorPath
from poisson_eigenpath.shared.errors import InstanceError

from .schedule import AssumptionNotCertified

logger = structlog.get_logger(__name__)

NORM_POINTS = 1001
NORM_SAFETY = 1.01


class TheoremId(str, Enum):
    """Twierdzenie adiabatyczne, którego ograniczenie jest liczone."""

    LIOUVILLE = "liouville"
    DISCRETE_TIGHT = "discrete_tight"
    DISCRETE = "discrete"
    QUBITISED = "qubitised"
    EXP_STEP = "exp_step"
    TROTTER = "trotter"
    PHASE_RANDOMISATION = "phase_randomisation"

    @property
    def unitary_path(self) -> bool:
        """Czy twierdzenie przyjmuje ścieżkę unitarną (inaczej hamiltonian)."""

        return self in (TheoremId.DISCRETE_TIGHT, TheoremId.DISCRETE)

    @property
    def exponent_shift(self) -> int:
        return 1 if self is TheoremId.PHASE_RANDOMISATION else 0


@dataclass(frozen=True, slots=True, eq=False)
class PathProfile:
    """Normy ‖A‖, ‖A'‖, ‖A''‖ oraz przerwa i liczba klastrów na siatce s."""

    grid: npt.NDArray[np.float64]
    value_norm: npt.NDArray[np.float64]
    first_norm: npt.NDArray[np.float64]
    second_norm: npt.NDArray[np.float64]
    gaps: npt.NDArray[np.float64]
    clusters: npt.NDArray[np.int64]

    @property
    def m(self) -> int:
        return int(np.max(self.clusters))


def path_profile(path: OperatorPath, points: int = NORM_POINTS) -> PathProfile:
    grid = np.linspace(0.0, 1.0, points)
    value_norm = np.empty(points)
    first_norm = np.empty(points)
    second_norm = np.empty(points)
    gaps = np.empty(points)
    clusters = np.empty(points, dtype=np.int64)
    for index, s in enumerate(grid):
        sample = path.sample(float(s))
        pair = path.projector(float(s))
        value_norm[index] = operator_norm(sample.value)
        first_norm[index] = operator_norm(sample.first)
        second_norm[index] = operator_norm(sample.second)
        gaps[index] = pair.gap
        clusters[index] = pair.m
    return PathProfile(
        grid=grid,
        value_norm=value_norm,
        first_norm=first_norm,
        second_norm=second_norm,
        gaps=gaps,
        clusters=clusters,
    )


def _complement_factor(value_norm: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """1/√(1 − ‖H‖²), nieskończone dla ‖H‖ ≥ 1."""

    margin = 1.0 - value_norm**2
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(margin > 0, 1.0 / np.sqrt(np.where(margin > 0, margin, 1.0)), np.inf)


def trotter_derivative_norms(first_norm: float, h: float) -> tuple[float, float]:
    """‖U'‖ ≤ (π/2)h‖H₁ − H₀‖ i ‖U''‖ ≤ (π²/2)h²‖H₁ − H₀‖ dla kroku pierwszego rzędu."""

    return 0.5 * math.pi * h * first_norm, 0.5 * math.pi**2 * h * h * first_norm


def compute_C(
    theorem_id: TheoremId,
    path: OperatorPath,
    gap_model: GapModel,
    m: int | None = None,
    *,
    h: float | None = None,
    points: int = NORM_POINTS,
    safety: float = NORM_SAFETY,
    profile: PathProfile | None = None,
) -> float:
    """Najmniejsze C z warunku twierdzenia, maksimum po siatce s razy `safety`.

    `path` to hamiltonian (Liouville, kubityzacja, krok e^{−iπH/2}, Trotter,
    randomizacja fazy) albo ścieżka unitarna (obie wersje twierdzenia dyskretnego).
    Dla Trottera `gap_model` ogranicza przerwę kroku U, a `h` jest wymagane.
    """

    if not gap_model.certified:
        raise AssumptionNotCertified(
            f"Model przerwy {gap_model.label!r} nie ma certyfikowanych stałych B"
        )
    assert gap_model.B_3mp is not None
    data = profile or path_profile(path, points)
    clusters = data.m if m is None else m
    root = math.sqrt(clusters)
    p = gap_model.p
    B = gap_model.B_3mp
    slope = gap_model.dg0_bound
    first = data.first_norm
    second = data.second_norm

    if theorem_id is TheoremId.LIOUVILLE:
        expression = clusters * (
            (2 + p * slope * B) * first + second + 5 * root * B * first**2
        )
    elif theorem_id in (TheoremId.DISCRETE_TIGHT, TheoremId.DISCRETE):
        expression = clusters * (
            (2 + p * slope * B) * first + second + first**2 + 5 * root * B * first**2
        )
    elif theorem_id is TheoremId.QUBITISED:
        factor = _complement_factor(data.value_norm)
        expression = clusters * (
            (2 + p * slope * B) * first
            + second
            + (1 + factor) * first**2
            + (5 + 2 * factor) * root * B * first**2
        )
    elif theorem_id is TheoremId.EXP_STEP:
        expression = clusters * (
            (2 + p * slope * B) * first
            + second
            + 0.5 * math.pi * first**2
            + (3 + math.pi) * root * B * first**2
        )
    elif theorem_id is TheoremId.TROTTER:
        if h is None or not h > 0:
            raise InstanceError(f"Stała C dla kroku Trottera wymaga h > 0 (h={h})")
        unitary_first, unitary_second = trotter_derivative_norms(1.0, h)
        unitary_first = unitary_first * first
        unitary_second = unitary_second * first
        expression = clusters * (
            (2 + p * slope * B) * unitary_first
            + unitary_second
            + unitary_first**2
            + 5 * root * B * unitary_first**2
        )
    elif theorem_id is TheoremId.PHASE_RANDOMISATION:
        expression = (2 + (p - 1) * slope * B) * first + second + 4 * B * first**2
    else:
        raise InstanceError(f"Nieznane twierdzenie: {theorem_id!r}")

    value = float(np.max(expression)) * safety
    logger.debug("constant-computed", theorem=theorem_id.value, path=path.name, m=clusters, C=value)
    return value
