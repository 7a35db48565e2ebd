"""Testy harmonogramów, certyfikacji założenia o przerwie i ograniczeń niewierności."""

from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.integrate

from poisson_eigenpath.paths import GapModel, InvalidGapModel, grover_gap_model, scale_path
from poisson_eigenpath.schedules import (
    AssumptionNotCertified,
    BoundReport,
    GapBelowMinimum,
    InvalidSchedule,
    NonPositiveGap,
    Schedule,
    ScheduleKind,
    TheoremId,
    adaptive_cost_bound,
    adaptive_schedule,
    certified,
    certify_assumption,
    compute_C,
    eval_bound,
    gap_integral,
    gap_integral_check,
    path_profile,
    simpson_integral,
)


def _constant_model(value: float, g0m: float | None = None) -> GapModel:
    return GapModel(
        g0=lambda s: value + 0.0 * np.asarray(s, dtype=float),
        g0m=value if g0m is None else g0m,
        dg0_bound=0.0,
        dg0=lambda s: 0.0,
    )


def test_constant_schedule_validation() -> None:
    schedule = Schedule.constant(4.0)

    assert schedule.kind is ScheduleKind.CONSTANT
    assert schedule(0.3) == 4.0
    assert schedule.inverse_derivative(0.3) == 0.0
    with pytest.raises(InvalidSchedule):
        Schedule.constant(-1.0)
    with pytest.raises(InvalidSchedule):
        Schedule.constant(math.inf)


def test_adaptive_schedule_validation() -> None:
    model = certified(grover_gap_model(8, 1))

    with pytest.raises(InvalidSchedule):
        Schedule.adaptive(model, 1.0, 1.5)
    with pytest.raises(InvalidSchedule):
        Schedule.adaptive(model, 0.0, 0.1)
    with pytest.raises(AssumptionNotCertified):
        adaptive_schedule(TheoremId.LIOUVILLE, grover_gap_model(8, 1), 0.1, 1.0)


def test_certify_constant_gap() -> None:
    B_p, B_3mp = certify_assumption(_constant_model(0.25), 1.5)

    assert B_p == pytest.approx(4.0)
    assert B_3mp == pytest.approx(4.0)


def test_certify_rejects_inconsistent_models() -> None:
    with pytest.raises(GapBelowMinimum):
        certify_assumption(_constant_model(0.5, g0m=0.6))
    negative = GapModel(g0=lambda s: np.asarray(s, dtype=float) - 0.5, g0m=0.1, dg0_bound=1.0)
    with pytest.raises(NonPositiveGap):
        certify_assumption(negative)
    with pytest.raises(InvalidGapModel):
        certify_assumption(grover_gap_model(8, 1), 2.5)


def test_gap_integral_matches_quadrature() -> None:
    model = grover_gap_model(16, 1)
    expected, _ = scipy.integrate.quad(lambda s: model.value(s) ** -1.5, 0.0, 1.0)

    assert gap_integral(model, 1.5) == pytest.approx(expected, rel=1e-6)
    assert simpson_integral(lambda x: x**2) == pytest.approx(1 / 3)


def test_gap_integrals_scale_as_expected() -> None:
    for kind, p in (("grover", 1.5), ("grover", 1.0), ("qlsp", 1.5), ("qlsp", 1.0)):
        report = gap_integral_check(kind, p)
        assert report.satisfied, report.to_dict()
        assert len(report.rows) >= 4
    with pytest.raises(InvalidGapModel):
        gap_integral_check("qlsp", 0.5)


def test_adaptive_rate_profile() -> None:
    model = certified(grover_gap_model(8, 1))
    schedule = adaptive_schedule(TheoremId.LIOUVILLE, model, 0.1, 2.0)

    assert schedule(0.5) == pytest.approx(2.0 / (0.1 * model.g0m**2))
    assert schedule(0.0) < schedule(0.5)
    step = 1e-6
    numeric = (1 / schedule(0.3 + step) - 1 / schedule(0.3 - step)) / (2 * step)
    assert schedule.inverse_derivative(0.3) == pytest.approx(numeric, rel=1e-6)


def test_phase_schedule_uses_shifted_exponent() -> None:
    model = certified(grover_gap_model(8, 1))
    schedule = adaptive_schedule(TheoremId.PHASE_RANDOMISATION, model, 0.1, 1.0)

    assert schedule.exponent == pytest.approx(model.p - 1)


def test_compute_C_requires_certified_model(grover8) -> None:
    path, model = grover8
    with pytest.raises(AssumptionNotCertified):
        compute_C(TheoremId.LIOUVILLE, path, model)


def test_adaptive_liouville_bound_stays_below_target(grover8) -> None:
    path, model = grover8
    model = certified(model)
    profile = path_profile(path, 401)
    C = compute_C(TheoremId.LIOUVILLE, path, model, profile=profile)
    epsilon = 0.05
    schedule = adaptive_schedule(TheoremId.LIOUVILLE, model, epsilon, C)

    report = eval_bound(TheoremId.LIOUVILLE, path, schedule, model, profile=profile)

    assert math.isfinite(C) and C > 0
    assert report.applicable
    assert report.bound_value <= epsilon
    assert report.satisfied is None
    assert set(report.terms) >= {"boundary_start", "boundary_end", "schedule_variation"}


def test_bound_grows_as_rate_drops(grover8) -> None:
    path, _ = grover8
    profile = path_profile(path, 201)
    fast = eval_bound(TheoremId.LIOUVILLE, path, Schedule.constant(400.0), profile=profile)
    slow = eval_bound(TheoremId.LIOUVILLE, path, Schedule.constant(40.0), profile=profile)

    assert slow.bound_value == pytest.approx(10 * fast.bound_value)


def test_applicability_flags(grover8) -> None:
    path, model = grover8
    profile = path_profile(path, 101)
    schedule = Schedule.constant(10.0)

    assert not eval_bound(TheoremId.EXP_STEP, path, schedule, profile=profile).applicable
    scaled = scale_path(path, 0.5)
    assert eval_bound(TheoremId.EXP_STEP, scaled, schedule, points=101).applicable
    assert not eval_bound(TheoremId.QUBITISED, path, schedule, profile=profile).applicable
    assert eval_bound(TheoremId.PHASE_RANDOMISATION, path, schedule, profile=profile).applicable
    with pytest.raises(AssumptionNotCertified):
        eval_bound(TheoremId.LIOUVILLE, path, schedule, profile=profile, use_gap_model=True)


def test_bound_report_measurement() -> None:
    report = BoundReport(theorem_id=TheoremId.LIOUVILLE, bound_value=0.1)

    assert report.satisfied is None
    assert report.with_measurement(0.05).satisfied is True
    assert report.with_measurement(0.2).satisfied is False
    assert report.to_dict()["measured_infidelity"] is None
    assert BoundReport(theorem_id=TheoremId.DISCRETE, bound_value=math.inf).to_dict()[
        "bound_value"
    ] is None


def test_adaptive_cost_bound() -> None:
    model = certified(_constant_model(0.5))

    assert adaptive_cost_bound(model, 0.1, 3.0) == pytest.approx(3.0 * 2.0 / (0.1 * 0.5))
    with pytest.raises(AssumptionNotCertified):
        adaptive_cost_bound(_constant_model(0.5), 0.1, 3.0)
