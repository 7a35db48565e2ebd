"""Testy procesu Poissona, losowania τ i zespołów trajektorii."""

from __future__ import annotations

import math
from threading import Event

import numpy as np
import pytest

from poisson_eigenpath.dynamics import DensityMatrix, FejerDistribution, Generator, integrate
from poisson_eigenpath.paths import exp_path, scale_path
from poisson_eigenpath.schedules import Schedule
from poisson_eigenpath.stochastic import (
    EnsembleCancelled,
    InvalidEnsemble,
    InvalidRate,
    InvalidRealization,
    InvalidState,
    NonPositiveGapSample,
    PoissonRealization,
    TrajectorySpec,
    empirical_characteristic,
    expected_count,
    monte_carlo,
    poisson_stderr,
    prepare_state,
    run_single,
    run_trajectory_liouville,
    run_trajectory_phase,
    run_trajectory_unitary,
    sample_poisson,
    sample_tau,
    trajectory_seed,
)


def _jump_spec(grover8, rate: float) -> TrajectorySpec:
    path, _ = grover8
    hamiltonian = scale_path(path, 0.5)
    walk = exp_path(hamiltonian)
    generator = Generator.jump(walk, Schedule.constant(rate), projector_source=hamiltonian)
    return TrajectorySpec.from_generator(generator)


def test_poisson_realization_validation() -> None:
    assert PoissonRealization.empty().count == 0
    with pytest.raises(InvalidRealization):
        PoissonRealization((0.5, 0.2))
    with pytest.raises(InvalidRealization):
        PoissonRealization((0.1, 1.5))


def test_sample_poisson_constant_rate_mean() -> None:
    rng = np.random.default_rng(7)
    counts = np.array([sample_poisson(Schedule.constant(5.0), rng).count for _ in range(2000)])

    assert counts.mean() == pytest.approx(5.0, abs=4 * poisson_stderr(5.0, 2000))


def test_sample_poisson_thins_varying_rate() -> None:
    rng = np.random.default_rng(11)
    realizations = [sample_poisson(lambda s: 10.0 * s, rng) for _ in range(2000)]
    counts = np.array([r.count for r in realizations])
    points = np.concatenate([r.jump_points for r in realizations if r.count])

    assert counts.mean() == pytest.approx(5.0, abs=4 * poisson_stderr(5.0, 2000))
    # gęstość ∝ s, więc średnia położenia skoku to 2/3
    assert points.mean() == pytest.approx(2 / 3, abs=0.02)
    assert all(np.all(np.diff(r.jump_points) > 0) for r in realizations)


def test_sample_poisson_is_reproducible() -> None:
    first = sample_poisson(Schedule.constant(30.0), 123)
    second = sample_poisson(Schedule.constant(30.0), 123)

    assert first.jump_points == second.jump_points
    assert sample_poisson(Schedule.constant(0.0), 1).count == 0


def test_sample_poisson_rejects_negative_rate() -> None:
    with pytest.raises(InvalidRate):
        sample_poisson(lambda s: s - 0.5, 0)


def test_expected_count() -> None:
    assert expected_count(Schedule.constant(3.0)) == pytest.approx(3.0)
    assert expected_count(lambda s: 6.0 * s * s) == pytest.approx(2.0)


def test_trajectory_seed_depends_on_master_and_index() -> None:
    seeds = {trajectory_seed(5, index) for index in range(100)}

    assert len(seeds) == 100
    assert trajectory_seed(5, 3) == trajectory_seed(5, 3)
    assert trajectory_seed(5, 3) != trajectory_seed(6, 3)


def test_sample_tau_scales_with_gap() -> None:
    base = sample_tau(None, 1.0, 42, size=1000)
    scaled = sample_tau(None, 4.0, 42, size=1000)

    np.testing.assert_allclose(scaled, base / 4.0)
    assert isinstance(sample_tau(None, 2.0, 1), float)
    with pytest.raises(NonPositiveGapSample):
        sample_tau(None, 0.0, 1)


def test_tau_characteristic_matches_fejer() -> None:
    samples = sample_tau(FejerDistribution(), 1.0, 2024, size=20000)
    for omega in (0.3, 0.7, 1.5):
        mean, stderr = empirical_characteristic(samples, omega)
        expected = float(FejerDistribution().characteristic(omega, 1.0))
        assert abs(mean - expected) <= 4 * stderr + 1e-3


def test_prepare_state_checks_norm() -> None:
    with pytest.raises(InvalidState):
        prepare_state([1.0, 1.0], 2)


def test_unitary_trajectory_applies_steps_in_order(grover8) -> None:
    spec = _jump_spec(grover8, 10.0)
    walk = spec.generator.path

    empty = run_trajectory_unitary(walk, PoissonRealization.empty(), spec.psi0)
    assert empty.jump_count == 0
    np.testing.assert_allclose(empty.final_state, spec.psi0)

    result = run_trajectory_unitary(walk, PoissonRealization((0.2, 0.7)), spec.psi0)
    expected = walk.value(0.7) @ (walk.value(0.2) @ spec.psi0)
    np.testing.assert_allclose(result.final_state, expected, atol=1e-12)
    assert result.hamiltonian_time == 0.0


def test_phase_trajectory_accumulates_time(grover8) -> None:
    path, model = grover8
    realization = PoissonRealization((0.1, 0.4, 0.9))
    result = run_trajectory_phase(path, realization, path.initial_state(), 3, gap_model=model)

    assert result.jump_count == 3
    assert result.hamiltonian_time > 0
    assert np.linalg.norm(result.final_state) == pytest.approx(1.0)


def test_liouville_trajectory_matches_density_evolution(grover8) -> None:
    path, _ = grover8
    schedule = Schedule.constant(50.0)
    trajectory = run_trajectory_liouville(path, schedule, path.initial_state())
    marginal = integrate(
        Generator.liouville(path, schedule), DensityMatrix.pure(path.initial_state())
    )

    assert trajectory.hamiltonian_time == pytest.approx(50.0)
    assert trajectory.fidelity(path.projector(1.0).P) == pytest.approx(
        marginal.final_fidelity, abs=1e-5
    )


def test_run_single_is_deterministic(grover8) -> None:
    spec = _jump_spec(grover8, 40.0)
    first = run_single(spec, 99)
    second = run_single(spec, 99)

    assert first.jump_points == second.jump_points
    np.testing.assert_array_equal(first.final_state, second.final_state)


def test_monte_carlo_independent_of_thread_count(grover8) -> None:
    spec = _jump_spec(grover8, 40.0)
    serial = monte_carlo(spec, 24, 17, threads=1)
    parallel = monte_carlo(spec, 24, 17, threads=4)

    np.testing.assert_array_equal(serial.mean_state.matrix, parallel.mean_state.matrix)
    assert serial.fidelity_mean == parallel.fidelity_mean
    assert [r.seed for r in serial.records] == [trajectory_seed(17, i) for i in range(24)]
    assert serial.to_dict()["n_traj"] == 24
    assert serial.cost.expected_jumps == pytest.approx(40.0)


def test_monte_carlo_validation(grover8) -> None:
    spec = _jump_spec(grover8, 10.0)

    with pytest.raises(InvalidEnsemble):
        monte_carlo(spec, 1, 0)
    with pytest.raises(InvalidEnsemble):
        monte_carlo(spec, 10, 0, threads=0)


def test_monte_carlo_cancellation(grover8) -> None:
    cancel = Event()
    cancel.set()

    with pytest.raises(EnsembleCancelled):
        monte_carlo(_jump_spec(grover8, 10.0), 10, 0, cancel_event=cancel)


@pytest.mark.slow
def test_monte_carlo_agrees_with_marginal_equation(grover8) -> None:
    spec = _jump_spec(grover8, 50.0)
    ensemble = monte_carlo(spec, 400, 2024, threads=2)
    marginal = integrate(spec.generator, DensityMatrix.pure(spec.psi0))

    tolerance = ensemble.consistency_tolerance()
    assert abs(ensemble.fidelity_mean - marginal.final_fidelity) <= tolerance
    assert ensemble.cost.jump_mean == pytest.approx(50.0, abs=4 * math.sqrt(50.0 / 400))
    assert ensemble.mean_state.trace_distance(marginal.final_state) <= tolerance
