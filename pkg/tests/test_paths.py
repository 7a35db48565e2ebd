"""Testy ścieżek hamiltonianów i ścieżek unitarnych."""

from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.linalg

from poisson_eigenpath.paths import (
    InvalidGapModel,
    InvalidMarkedSet,
    KappaTooSmall,
    NonHermitianMatrix,
    NormTooLarge,
    PathKind,
    SingularA,
    StepTooLarge,
    derivative_residual,
    dilation_solution,
    exp_path,
    grover_embedding,
    grover_gap_model,
    grover_path,
    hermitian_dilation,
    linear_path,
    numerical_gap_model,
    qlsp_path,
    qlsp_state,
    qubitised_path,
    random_hermitian,
    random_qlsp_instance,
    scale_path,
    suzuki_deviation,
    trotter_gap_model,
    trotter_path,
    trotter_step,
    verify_gap_model,
)


def test_grover_subspace_selection() -> None:
    full, _ = grover_path(8, [3])
    reduced, _ = grover_path(100, [7])
    several, _ = grover_path(8, [1, 2])

    assert full.metadata["subspace"] == "full" and full.dimension == 8
    assert reduced.metadata["subspace"] == "symmetric" and reduced.dimension == 2
    assert several.metadata["subspace"] == "symmetric"


@pytest.mark.parametrize("marked", [[], [0, 0], [8], list(range(8))])
def test_grover_rejects_bad_marked_sets(marked) -> None:
    with pytest.raises(InvalidMarkedSet):
        grover_path(8, marked)


def test_grover_gap_model_is_exact(grover8) -> None:
    path, model = grover8
    check = verify_gap_model(path, model, points=101)

    assert check.satisfied
    assert model.g0m == pytest.approx(math.sqrt(1 / 8))
    assert check.minimum_gap == pytest.approx(model.g0m, rel=1e-9)


def test_grover_initial_state_is_ground_state(grover8) -> None:
    path, _ = grover8
    state = path.initial_state()

    np.testing.assert_allclose(path.value(0.0) @ state, 0, atol=1e-14)
    assert path.projector(0.0).rank == 1


def test_symmetric_and_full_grover_share_spectrum() -> None:
    full, _ = grover_path(8, [3], subspace="full")
    reduced, _ = grover_path(8, [3], subspace="symmetric")
    embedding = grover_embedding(8, [3])

    for s in (0.1, 0.5, 0.9):
        np.testing.assert_allclose(
            embedding.conj().T @ full.value(s) @ embedding, reduced.value(s), atol=1e-14
        )
        assert full.gap(s) == pytest.approx(reduced.gap(s))


def test_linear_path_derivatives(rng) -> None:
    path = linear_path(random_hermitian(4, rng), random_hermitian(4, rng))

    assert path.kind is PathKind.HERMITIAN
    assert derivative_residual(path, 0.37) < 1e-8
    np.testing.assert_array_equal(path.second_derivative(0.5), np.zeros((4, 4)))


def test_gap_model_validation() -> None:
    with pytest.raises(InvalidGapModel):
        grover_gap_model(8, 1).scaled(-1.0)
    with pytest.raises(InvalidGapModel):
        grover_gap_model(8, 1, p=2.5)


def test_scaled_gap_model_invalidates_constants() -> None:
    model = grover_gap_model(8, 1).with_constants(p=1.5, B_p=2.0, B_3mp=3.0)
    scaled = model.scaled(0.5)

    assert model.certified
    assert not scaled.certified
    assert scaled.g0m == pytest.approx(0.5 * model.g0m)
    assert scaled.value(0.3) == pytest.approx(0.5 * model.value(0.3))


def test_numerical_gap_model_is_below_true_gap(grover8) -> None:
    path, _ = grover8
    model = numerical_gap_model(path, points=201, safety=0.9)

    assert verify_gap_model(path, model, points=201).satisfied


def test_qlsp_endpoints_lie_in_tracked_space(qlsp_small) -> None:
    A, b = qlsp_small
    path, model, extractor = qlsp_path(A, b)

    assert path.dimension == 12
    np.testing.assert_allclose(path.value(0.0) @ path.initial_state(), 0, atol=1e-12)
    np.testing.assert_allclose(path.value(1.0) @ extractor.target, 0, atol=1e-12)
    assert path.projector(0.5).rank == 2
    assert verify_gap_model(path, model, points=101).satisfied


def test_qlsp_state_matches_solution(qlsp_small) -> None:
    A, b = qlsp_small
    _, _, extractor = qlsp_path(A, b)
    state = qlsp_state(A, b, 1.0)
    state = state / np.linalg.norm(state)

    assert abs(np.vdot(extractor.target[: state.shape[0]], state)) == pytest.approx(1.0)
    assert extractor(extractor.target) == pytest.approx(1.0)


def test_qlsp_kappa_handling(qlsp_small) -> None:
    A, b = qlsp_small
    true_kappa = np.linalg.cond(A)

    with pytest.raises(KappaTooSmall):
        qlsp_path(A, b, kappa_hint=1.5)
    hinted, _, _ = qlsp_path(A, b, kappa_hint=true_kappa * 2)
    assert hinted.metadata["kappa"] == pytest.approx(true_kappa * 2)
    low, _, _ = qlsp_path(A, b, kappa_hint=2.0)
    assert low.metadata["kappa"] == pytest.approx(max(true_kappa, 2.0))


def test_qlsp_rejects_bad_matrices() -> None:
    with pytest.raises(SingularA):
        qlsp_path(np.diag([1.0, 0.0]), [1.0, 1.0])
    with pytest.raises(NonHermitianMatrix):
        qlsp_path(np.array([[1.0, 2.0], [0.0, 1.0]]), [1.0, 0.0])


def test_hermitian_dilation_recovers_solution(rng) -> None:
    A = rng.normal(size=(3, 3))
    b = rng.normal(size=3)
    big, rhs = hermitian_dilation(A, b)

    y = np.linalg.solve(big, rhs)

    np.testing.assert_allclose(big, big.conj().T)
    np.testing.assert_allclose(dilation_solution(y, 3), np.linalg.solve(A, b), atol=1e-10)


def test_random_qlsp_instance_has_requested_condition_number(rng) -> None:
    A, b = random_qlsp_instance(6, 10.0, rng)

    assert np.linalg.cond(A) == pytest.approx(10.0)
    assert b.shape == (6,)


def test_qubitised_path_tracks_upper_branch(grover8) -> None:
    path, _ = grover8
    walk = qubitised_path(scale_path(path, 0.5))
    U = walk.value(0.0)
    state = walk.initial_state()

    assert walk.kind is PathKind.UNITARY
    assert walk.dimension == 16
    np.testing.assert_allclose(U @ U.conj().T, np.eye(16), atol=1e-12)
    np.testing.assert_allclose(U @ state, 1j * state, atol=1e-12)
    assert derivative_residual(walk, 0.4) < 1e-7
    assert walk.projector(0.4).rank == 1


def test_exp_path_matches_matrix_exponential(grover8) -> None:
    path, _ = grover8
    scaled = scale_path(path, 0.5)
    walk = exp_path(scaled)

    expected = scipy.linalg.expm(-0.5j * math.pi * scaled.value(0.3))
    np.testing.assert_allclose(walk.value(0.3), expected, atol=1e-12)
    assert derivative_residual(walk, 0.3) < 1e-7


def test_unitary_constructions_enforce_norm_limits(grover8) -> None:
    path, _ = grover8
    with pytest.raises(NormTooLarge):
        exp_path(path)
    with pytest.raises(NormTooLarge):
        qubitised_path(path)


def test_trotter_paths(grover8) -> None:
    path, _ = grover8
    H0, H1 = path.value(0.0), path.value(1.0)

    for order in (1, 2):
        walk = trotter_path(H0, H1, 0.2, order)
        U = walk.value(0.6)
        np.testing.assert_allclose(U @ U.conj().T, np.eye(8), atol=1e-12)
        np.testing.assert_allclose(U, trotter_step(H0, H1, 0.6, 0.2, order), atol=1e-14)
        assert derivative_residual(walk, 0.6) < 1e-7
        assert walk.projector(0.6).rank == 1


def test_trotter_step_limits(grover8) -> None:
    path, model = grover8
    H0, H1 = path.value(0.0), path.value(1.0)

    with pytest.raises(StepTooLarge):
        trotter_path(H0, H1, 0.9, 1)
    with pytest.raises(NormTooLarge):
        trotter_path(2 * H0, H1, 0.1, 1)
    with pytest.raises(StepTooLarge):
        trotter_gap_model(model, 0.9)

    shrunk = trotter_gap_model(model, 0.2)
    assert shrunk.g0m == pytest.approx(0.2 * (model.g0m - 0.04))


def test_suzuki_deviation_is_cubic_in_step(grover8) -> None:
    path, _ = grover8
    H0, H1 = path.value(0.0), path.value(1.0)

    for h in (0.05, 0.1, 0.2):
        for s in (0.25, 0.5, 0.75):
            assert suzuki_deviation(H0, H1, s, h) <= h**3 / 2 + 1e-12


def test_batched_values_match_pointwise(grover8) -> None:
    path, _ = grover8
    scaled = scale_path(path, 0.5)
    grid = np.array([0.0, 0.13, 0.5, 0.77, 1.0])

    trotter = trotter_path(path.value(0.0), path.value(1.0), 0.2, 2)

    for candidate in (path, scaled, exp_path(scaled), qubitised_path(scaled), trotter):
        stacked = candidate.values(grid)
        assert stacked.shape == (grid.size, candidate.dimension, candidate.dimension)
        for s, matrix in zip(grid, stacked):
            np.testing.assert_allclose(matrix, candidate.value(float(s)), atol=1e-12)
    assert exp_path(scaled).values([]).shape == (0, 8, 8)
