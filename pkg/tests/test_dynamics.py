"""Testy generatorów, całkowania równania marginalnego i kosztu."""

from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.integrate

from poisson_eigenpath.dynamics import (
    FEJER_MODEL_T0,
    DensityMatrix,
    FejerDistribution,
    GapModelMissing,
    Generator,
    GeneratorKind,
    InvalidDensityMatrix,
    InvalidGenerator,
    InvalidPhaseDistribution,
    StepPolicy,
    StepUnderflow,
    TabulatedDistribution,
    accumulate_cost,
    fejer_density,
    fidelity,
    integrate,
    jump_rhs,
    liouville_rhs,
    phase_channel,
    phase_rand_rhs,
    rhs,
)
from poisson_eigenpath.linalg import DimensionMismatch
from poisson_eigenpath.paths import exp_path, scale_path
from poisson_eigenpath.schedules import Schedule


def _generators(path, model, rate: float) -> list[Generator]:
    schedule = Schedule.constant(rate)
    walk = exp_path(scale_path(path, 0.5))
    return [
        Generator.liouville(path, schedule),
        Generator.jump(walk, schedule, projector_source=scale_path(path, 0.5)),
        Generator.phase_randomisation(path, schedule, model),
    ]


def test_density_matrix_validation() -> None:
    with pytest.raises(InvalidDensityMatrix):
        DensityMatrix(np.diag([0.5, 0.4]))
    with pytest.raises(InvalidDensityMatrix):
        DensityMatrix(np.diag([1.2, -0.2]))
    with pytest.raises(InvalidDensityMatrix):
        DensityMatrix(np.array([[0.5, 0.3], [0.0, 0.5]]))
    with pytest.raises(InvalidDensityMatrix):
        DensityMatrix.pure([0.0, 0.0])


def test_pure_states_and_trace_distance() -> None:
    up = DensityMatrix.pure([2.0, 0.0])
    down = DensityMatrix.pure([0.0, 1.0j])

    assert np.trace(up.matrix) == pytest.approx(1.0)
    assert up.trace_distance(down) == pytest.approx(1.0)
    assert up.trace_distance(up) == pytest.approx(0.0)
    mixed = DensityMatrix.maximally_mixed(np.eye(2))
    assert up.trace_distance(mixed) == pytest.approx(0.5)


def test_generator_kind_must_match_path(grover8) -> None:
    path, model = grover8
    walk = exp_path(scale_path(path, 0.5))
    schedule = Schedule.constant(1.0)

    with pytest.raises(InvalidGenerator):
        Generator.jump(path, schedule)
    with pytest.raises(InvalidGenerator):
        Generator.liouville(walk, schedule)
    with pytest.raises(GapModelMissing):
        Generator.phase_randomisation(path, schedule, None)
    assert isinstance(Generator.phase_randomisation(path, schedule, model).phi, FejerDistribution)


def test_rhs_is_trace_free_and_hermitian(grover8, rng) -> None:
    path, model = grover8
    raw = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    rho = raw @ raw.conj().T
    rho /= np.trace(rho)

    for gen in _generators(path, model, 3.0):
        for s in (0.0, 0.4, 0.9):
            derivative = rhs(gen, s, rho)
            assert abs(np.trace(derivative)) < 1e-10
            np.testing.assert_allclose(derivative, derivative.conj().T, atol=1e-10)


def test_named_rhs_functions_check_generator_kind(grover8) -> None:
    path, model = grover8
    liouville, jump, phase = _generators(path, model, 1.0)
    rho = DensityMatrix.pure(path.initial_state())

    np.testing.assert_allclose(liouville_rhs(liouville, 0.3, rho), rhs(liouville, 0.3, rho))
    np.testing.assert_allclose(jump_rhs(jump, 0.3, rho), rhs(jump, 0.3, rho))
    np.testing.assert_allclose(phase_rand_rhs(phase, 0.3, rho), rhs(phase, 0.3, rho))
    with pytest.raises(ValueError):
        jump_rhs(liouville, 0.3, rho)


def test_phase_channel_keeps_tracked_block_and_removes_coherences(grover8, rng) -> None:
    path, model = grover8
    gen = Generator.phase_randomisation(path, Schedule.constant(1.0), model)
    raw = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    rho = raw @ raw.conj().T
    rho /= np.trace(rho)
    pair = path.projector(0.45)
    P, Q = pair.P, pair.Q

    averaged = phase_channel(gen, 0.45, rho)

    np.testing.assert_allclose(P @ averaged @ P, P @ rho @ P, atol=1e-10)
    np.testing.assert_allclose(P @ averaged @ Q, 0, atol=1e-10)
    assert np.trace(averaged).real == pytest.approx(1.0)


def test_zero_rate_leaves_state_unchanged(grover8) -> None:
    path, _ = grover8
    gen = Generator.liouville(path, Schedule.constant(0.0))
    result = integrate(gen, DensityMatrix.pure(path.initial_state()), StepPolicy(samples=11))

    assert len(result.fidelities) == 11
    assert result.fidelities[0] == pytest.approx(1.0)
    assert result.final_fidelity == pytest.approx(1 / 8)


def test_slow_liouville_evolution_is_adiabatic(grover8) -> None:
    path, _ = grover8
    gen = Generator.liouville(path, Schedule.constant(200.0))
    result = integrate(gen, DensityMatrix.pure(path.initial_state()))

    assert result.final_fidelity > 0.95
    assert result.diagnostics["max_trace_drift"] < 1e-9
    assert result.diagnostics["min_eigenvalue"] > -1e-9
    assert math.isnan(result.cost.jump_count_expected)
    assert result.cost.hamiltonian_time == pytest.approx(200.0)


def test_jump_fidelity_improves_with_rate(grover8) -> None:
    path, model = grover8
    rho0 = DensityMatrix.pure(exp_path(scale_path(path, 0.5)).initial_state())
    policy = StepPolicy(samples=5)

    slow = integrate(_generators(path, model, 20.0)[1], rho0, policy)
    fast = integrate(_generators(path, model, 200.0)[1], rho0, policy)

    assert 0.0 <= slow.final_fidelity < fast.final_fidelity <= 1.0
    assert fast.cost.jump_count_expected == pytest.approx(200.0)
    assert math.isnan(fast.cost.hamiltonian_time)


def test_phase_randomisation_run_reports_regime(grover8) -> None:
    path, model = grover8
    gen = _generators(path, model, 100.0)[2]
    result = integrate(gen, DensityMatrix.pure(path.initial_state()), StepPolicy(samples=5))

    assert result.diagnostics["clusters"] == 1
    assert result.diagnostics["outside_proven_regime"] is False
    assert result.final_fidelity > 0.5


def test_step_doubling_diagnostic(grover8) -> None:
    path, _ = grover8
    gen = Generator.liouville(path, Schedule.constant(20.0))
    result = integrate(
        gen, DensityMatrix.pure(path.initial_state()), StepPolicy(samples=3, check_doubling=True)
    )

    assert result.diagnostics["step_doubling_delta"] < 1e-6


def test_step_underflow(grover8) -> None:
    path, _ = grover8
    gen = Generator.liouville(path, Schedule.constant(1e10))
    with pytest.raises(StepUnderflow):
        integrate(gen, DensityMatrix.pure(path.initial_state()))


def test_initial_state_dimension_is_checked(grover8) -> None:
    path, _ = grover8
    gen = Generator.liouville(path, Schedule.constant(1.0))
    with pytest.raises(DimensionMismatch):
        integrate(gen, DensityMatrix.pure([1.0, 0.0]))
    with pytest.raises(DimensionMismatch):
        fidelity(np.eye(2) / 2, np.eye(3))


def test_phase_cost_uses_model_constant(grover8) -> None:
    path, model = grover8
    gen = _generators(path, model, 10.0)[2]
    cost = accumulate_cost(gen)
    integral, _ = scipy.integrate.quad(lambda s: 1.0 / model.value(s), 0.0, 1.0)

    assert cost.jump_count_expected == pytest.approx(10.0)
    assert cost.hamiltonian_time == pytest.approx(FEJER_MODEL_T0 * 10.0 * integral, rel=1e-5)
    assert cost.sampled_time == pytest.approx(
        FejerDistribution().mean_abs_scaled() * 10.0 * integral, rel=1e-5
    )
    assert cost.primary(GeneratorKind.PHASE_RANDOMISATION) == cost.hamiltonian_time
    assert cost.to_dict()["jumps"] == pytest.approx(10.0)


def test_fejer_characteristic_is_triangle() -> None:
    phi = FejerDistribution()
    values = phi.characteristic([0.0, 0.25, 0.5, 1.0, 3.0], 0.5)

    np.testing.assert_allclose(values, [1.0, 0.5, 0.0, 0.0, 0.0])
    assert fejer_density(0.0) == pytest.approx(1 / (2 * np.pi))


def test_tabulated_distribution_reproduces_triangle() -> None:
    grid = np.linspace(-50.0, 50.0, 2001)
    phi = TabulatedDistribution(grid=grid, density=fejer_density(grid))

    np.testing.assert_allclose(phi.characteristic([0.0, 0.5, 2.0], 1.0), [1.0, 0.5, 0.0], atol=0.05)
    samples = phi.sample_scaled(np.random.default_rng(3), 1000)
    assert np.all(np.abs(samples) <= 50.0)


def test_tabulated_distribution_rejects_bad_density() -> None:
    grid = np.linspace(-1.0, 1.0, 5)
    with pytest.raises(InvalidPhaseDistribution):
        TabulatedDistribution(grid=grid, density=np.array([1.0, -1.0, 1.0, 1.0, 1.0]))
    with pytest.raises(InvalidPhaseDistribution):
        TabulatedDistribution(grid=grid[::-1], density=np.ones(5))


def _jump_generator(path, rate: float) -> Generator:
    scaled = scale_path(path, 0.5)
    return Generator.jump(exp_path(scaled), Schedule.constant(rate), projector_source=scaled)


@pytest.mark.parametrize("batch", [1024, 3])
def test_batched_jump_steps_match_pointwise_snapshots(grover8, monkeypatch, batch: int) -> None:
    from poisson_eigenpath.dynamics import integrator

    path, _ = grover8
    gen = _jump_generator(path, 40.0)
    rho0 = DensityMatrix.pure(gen.path.initial_state())
    policy = StepPolicy(samples=7)

    monkeypatch.setattr(integrator, "BATCH_STEPS", batch)
    batched = integrate(gen, rho0, policy)
    monkeypatch.setattr(integrator, "_batched_stages", integrator._sequential_stages)
    pointwise = integrate(gen, rho0, policy)

    assert batched.diagnostics["steps"] == pointwise.diagnostics["steps"]
    np.testing.assert_allclose(batched.fidelities, pointwise.fidelities, atol=1e-10)
    np.testing.assert_allclose(
        batched.rho_samples[-1][1].matrix, pointwise.rho_samples[-1][1].matrix, atol=1e-10
    )


def test_jump_step_underflow(grover8) -> None:
    path, _ = grover8
    gen = _jump_generator(path, 1e10)
    with pytest.raises(StepUnderflow):
        integrate(gen, DensityMatrix.pure(gen.path.initial_state()))
