"""Ograniczenia niewierności z twierdzeń adiabatycznych i harmonogramy adaptacyjne.

Każde twierdzenie ma postać
    ‖X‖/λ |_{s=0} + ‖X‖/λ |_{s=1} + ∫ (‖X'‖/λ + |(1/λ)'|·‖X‖) ds,
gdzie ‖X‖ i ‖X'‖ są ograniczone normami pochodnych ścieżki i przerwą.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np
import numpy.typing as npt
import scipy.integrate
import structlog

from poisson_eigenpath.linalg.decomposition import commutator, operator_norm
from poisson_eigenpath.paths.base import GapModel, OperatorPath
from poisson_eigenpath.shared.errors import InstanceError
from poisson_eigenpath.spectral.projectors import (
    projector_derivative,
    projector_second_derivative,
)

from .constants import (
    NORM_POINTS,
    PathProfile,
    TheoremId,
    _complement_factor,
    path_profile,
    trotter_derivative_norms,
)
from .schedule import AssumptionNotCertified, Schedule

logger = structlog.get_logger(__name__)

SATISFACTION_SLACK = 1e-9

Profile = npt.NDArray[np.float64]


def _finite_or_none(value: float) -> float | None:
    return float(value) if math.isfinite(value) else None


@dataclass(frozen=True, slots=True)
class BoundReport:
    """Wartość ograniczenia wraz z rozbiciem na składniki i zmierzoną niewiernością."""

    theorem_id: TheoremId
    bound_value: float
    terms: dict[str, float] = field(default_factory=dict)
    measured_infidelity: float = math.nan
    applicable: bool = True
    m: int = 1

    @property
    def satisfied(self) -> bool | None:
        if math.isnan(self.measured_infidelity):
            return None
        return self.measured_infidelity <= self.bound_value + SATISFACTION_SLACK

    def with_measurement(self, infidelity: float) -> "BoundReport":
        return BoundReport(
            theorem_id=self.theorem_id,
            bound_value=self.bound_value,
            terms=dict(self.terms),
            measured_infidelity=float(infidelity),
            applicable=self.applicable,
            m=self.m,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "theorem_id": self.theorem_id.value,
            "bound_value": _finite_or_none(self.bound_value),
            "measured_infidelity": _finite_or_none(self.measured_infidelity),
            "satisfied": self.satisfied,
            "applicable": self.applicable,
            "m": self.m,
            "terms": {name: _finite_or_none(value) for name, value in self.terms.items()},
        }

    def csv_fieldnames(self) -> list[str]:
        return ["quantity", "value"]

    def csv_rows(self) -> Iterable[dict[str, Any]]:
        yield {"quantity": "bound_value", "value": self.bound_value}
        yield {"quantity": "measured_infidelity", "value": self.measured_infidelity}
        for name, value in self.terms.items():
            yield {"quantity": name, "value": value}

    def json_lines(self) -> Iterable[dict[str, Any]]:
        yield self.to_dict()

    def to_markdown(self) -> str:
        lines = [
            f"# Bound: {self.theorem_id.value}",
            "",
            f"- applicable: {self.applicable}",
            f"- satisfied: {self.satisfied}",
            f"- clusters m: {self.m}",
            "",
            "| quantity | value |",
            "|---|---|",
        ]
        for row in self.csv_rows():
            lines.append(f"| {row['quantity']} | {row['value']:.6g} |")
        return "\n".join(lines) + "\n"


def _over(numerator: Profile, rate: Profile) -> Profile:
    """numerator/λ z konwencją 0/λ = 0 także dla λ = 0."""

    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = numerator / rate
    return np.where(numerator == 0, 0.0, ratio)


def _integrate(values: Profile, grid: Profile) -> float:
    if not np.all(np.isfinite(values)):
        return math.inf if np.any(np.isposinf(values)) else math.nan
    return float(scipy.integrate.simpson(values, x=grid))


def _commutator_derivative_norms(path: OperatorPath, grid: Profile) -> tuple[Profile, Profile]:
    """‖P'‖ oraz ‖[P', P]'‖ = ‖[P'', P]‖ na siatce."""

    first = np.empty(grid.size)
    mixed = np.empty(grid.size)
    for index, s in enumerate(grid):
        pair = path.projector(float(s))
        first[index] = operator_norm(projector_derivative(path, float(s), pair))
        second = projector_second_derivative(path, float(s), pair)
        mixed[index] = operator_norm(commutator(second, pair.P))
    return first, mixed


def _theorem_terms(
    theorem_id: TheoremId,
    path: OperatorPath,
    data: PathProfile,
    gaps: Profile,
    m: int,
    h: float | None,
) -> tuple[Profile, dict[str, Profile], bool]:
    """‖X‖ na siatce, składniki ograniczenia ‖X'‖ i flaga stosowalności."""

    root = math.sqrt(m)
    first = data.first_norm
    second = data.second_norm
    with np.errstate(divide="ignore", invalid="ignore"):
        if theorem_id is TheoremId.LIOUVILLE:
            return (
                m * first / gaps**2,
                {
                    "second_derivative": m * second / gaps**2,
                    "first_derivative_squared": 5 * m * root * first**2 / gaps**3,
                },
                True,
            )
        if theorem_id is TheoremId.DISCRETE_TIGHT:
            projector_first, mixed = _commutator_derivative_norms(path, data.grid)
            return (
                root * projector_first / gaps,
                {
                    "unitary_projector": root * first * projector_first / gaps,
                    "unitary_projector_cluster": 2 * m * first * projector_first / gaps**2,
                    "commutator_derivative": root * mixed / gaps,
                    "projector_squared": root * projector_first**2 / gaps,
                },
                True,
            )
        if theorem_id is TheoremId.DISCRETE:
            return (
                m * first / gaps**2,
                {
                    "unitary_second_order": m * (first**2 + second) / gaps**2,
                    "first_derivative_squared": 5 * m * root * first**2 / gaps**3,
                },
                True,
            )
        if theorem_id is TheoremId.QUBITISED:
            factor = _complement_factor(data.value_norm)
            return (
                m * first / gaps**2,
                {
                    "first_derivative_squared_local": (1 + factor) * m * first**2 / gaps**2,
                    "second_derivative": m * second / gaps**2,
                    "first_derivative_squared": (5 + 2 * factor) * m * root * first**2 / gaps**3,
                },
                bool(np.all(np.isfinite(factor))),
            )
        if theorem_id is TheoremId.EXP_STEP:
            return (
                m * first / gaps**2,
                {
                    "first_derivative_squared_local": 0.5 * math.pi * m * first**2 / gaps**2,
                    "second_derivative": m * second / gaps**2,
                    "first_derivative_squared": (3 + math.pi) * m * root * first**2 / gaps**3,
                },
                bool(np.all(data.value_norm <= 0.5 + 1e-12)),
            )
        if theorem_id is TheoremId.TROTTER:
            if h is None or not h > 0:
                raise InstanceError(f"Ograniczenie kroku Trottera wymaga h > 0 (h={h})")
            shifted = gaps - h * h
            applicable = bool(np.all(shifted > 0))
            shifted = np.where(shifted > 0, shifted, 0.0)
            unitary_gap = h * shifted
            norm_first = trotter_derivative_norms(1.0, h)[0] * first
            return (
                m * norm_first / unitary_gap**2,
                {
                    "unitary_second_order": m * math.pi**2 * first / shifted**2,
                    "first_derivative_squared": 5 * m * root * norm_first**2 / unitary_gap**3,
                },
                applicable,
            )
        if theorem_id is TheoremId.PHASE_RANDOMISATION:
            return (
                first / gaps,
                {
                    "second_derivative": second / gaps,
                    "first_derivative_squared": 4 * first**2 / gaps**2,
                },
                m == 1,
            )
    raise InstanceError(f"Nieznane twierdzenie: {theorem_id!r}")


def eval_bound(
    theorem_id: TheoremId,
    path: OperatorPath,
    schedule: Schedule,
    gap_model: GapModel | None = None,
    m: int | None = None,
    *,
    h: float | None = None,
    points: int = NORM_POINTS,
    use_gap_model: bool = False,
    measured_infidelity: float = math.nan,
    profile: PathProfile | None = None,
) -> BoundReport:
    """Ograniczenie niewierności dla ścieżki i harmonogramu.

    Przerwa g pochodzi z rzutu ścieżki; przy `use_gap_model` zastępuje ją g₀
    z modelu (większe, lecz wciąż poprawne ograniczenie). Dla Trottera `path`
    to hamiltonian H(s) = (1 − s)H₀ + sH₁, a przerwa kroku to h(g − h²).
    Składnik z |(1/λ)'| liczony jest analitycznie z harmonogramu.
    """

    count = points if points % 2 == 1 else points + 1
    data = profile or path_profile(path, count)
    grid = data.grid
    clusters = data.m if m is None else m
    if use_gap_model:
        if gap_model is None:
            raise AssumptionNotCertified("Ograniczenie z modelem przerwy wymaga modelu g₀")
        gaps = gap_model.values(grid)
    else:
        gaps = data.gaps

    norm_x, pieces, applicable = _theorem_terms(theorem_id, path, data, gaps, clusters, h)
    rate = schedule.evaluate_many(grid)
    variation = np.abs(np.array([schedule.inverse_derivative(float(s)) for s in grid]))

    terms: dict[str, float] = {
        "boundary_start": float(_over(norm_x[:1], rate[:1])[0]),
        "boundary_end": float(_over(norm_x[-1:], rate[-1:])[0]),
        "schedule_variation": _integrate(
            np.where(norm_x == 0, 0.0, variation * norm_x), grid
        ),
    }
    for name, values in pieces.items():
        terms[name] = _integrate(_over(values, rate), grid)
    total = float(sum(terms.values()))
    if not applicable:
        logger.warning("bound-not-applicable", theorem=theorem_id.value, path=path.name)
    report = BoundReport(
        theorem_id=theorem_id,
        bound_value=total,
        terms=terms,
        measured_infidelity=measured_infidelity,
        applicable=applicable,
        m=clusters,
    )
    if report.satisfied is False:
        logger.warning(
            "bound-violated",
            theorem=theorem_id.value,
            bound=total,
            measured=measured_infidelity,
        )
    return report


def adaptive_schedule(
    theorem_id: TheoremId, gap_model: GapModel, epsilon: float, C: float
) -> Schedule:
    """λ(s) = (1/ε)·C/(g₀^q·g₀ₘ^{2−p}); q = p − 1 dla randomizacji fazy."""

    if not gap_model.certified:
        raise AssumptionNotCertified(
            f"Model przerwy {gap_model.label!r} nie ma certyfikowanych stałych B"
        )
    return Schedule.adaptive(gap_model, C, epsilon, exponent_shift=theorem_id.exponent_shift)


def adaptive_cost_bound(gap_model: GapModel, epsilon: float, C: float) -> float:
    """(1/ε)·C·B_p/g₀ₘ.

    Dla kroków unitarnych ogranicza oczekiwaną liczbę skoków ∫λ, dla Liouville'a
    czas ∫T, a dla randomizacji fazy całkę ∫λ/g₀ (czas to t₀ razy ta wartość).
    """

    if gap_model.B_p is None:
        raise AssumptionNotCertified(
            f"Model przerwy {gap_model.label!r} nie ma certyfikowanych stałych B"
        )
    return C * gap_model.B_p / (epsilon * gap_model.g0m)
