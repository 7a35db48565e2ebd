"""Testy gęstej algebry liniowej."""

from __future__ import annotations

import json

import numpy as np
import pytest
import scipy.linalg

from poisson_eigenpath.linalg import (
    SQRT_COMPLEMENT,
    DimensionMismatch,
    NonNormal,
    SingularOperator,
    commutator,
    eig_normal,
    exponential,
    function_derivatives,
    load_matrix_file,
    matrix_function,
    matrix_from_json,
    matrix_to_json,
    operator_norm,
    pseudo_inverse,
    range_basis,
    sylvester_block_solve,
    vector_from_json,
)
from poisson_eigenpath.paths import random_hermitian, random_unitary


def test_eig_normal_hermitian_sorted_and_reconstructs(rng) -> None:
    H = random_hermitian(6, rng)
    decomposition = eig_normal(H)

    assert decomposition.hermitian
    assert np.all(np.diff(decomposition.eigenvalues.real) >= 0)
    np.testing.assert_allclose(decomposition.reconstruct(), H, atol=1e-12)


def test_eig_normal_unitary_uses_schur(rng) -> None:
    U = random_unitary(5, rng)
    decomposition = eig_normal(U)

    assert not decomposition.hermitian
    np.testing.assert_allclose(np.abs(decomposition.eigenvalues), 1.0, atol=1e-12)
    np.testing.assert_allclose(decomposition.reconstruct(), U, atol=1e-10)


def test_eig_normal_rejects_non_normal() -> None:
    with pytest.raises(NonNormal):
        eig_normal(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eig_normal_rejects_vectors() -> None:
    with pytest.raises(DimensionMismatch):
        eig_normal(np.ones(3))


def test_matrix_function_matches_expm(rng) -> None:
    H = random_hermitian(4, rng)
    expected = scipy.linalg.expm(-1j * H)
    np.testing.assert_allclose(matrix_function(H, lambda w: np.exp(-1j * w)), expected, atol=1e-11)


def test_operator_norm_is_largest_singular_value(rng) -> None:
    assert operator_norm(np.eye(4)) == pytest.approx(1.0)
    assert operator_norm(np.diag([2.0, -3.0])) == pytest.approx(3.0)

    A = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    B = rng.normal(size=(5, 5))
    gram = np.linalg.eigvalsh(A.conj().T @ A)
    assert operator_norm(A) == pytest.approx(np.sqrt(gram[-1]), rel=1e-10)
    assert operator_norm(A @ B) <= operator_norm(A) * operator_norm(B) + 1e-10


def test_pseudo_inverse_zeroes_kernel() -> None:
    result = pseudo_inverse(np.diag([2.0, 0.0, -4.0]))
    np.testing.assert_allclose(result, np.diag([0.5, 0.0, -0.25]), atol=1e-15)


def test_function_derivatives_match_finite_differences(rng) -> None:
    H0 = random_hermitian(4, rng)
    H1 = random_hermitian(4, rng)
    H0 /= 3 * np.linalg.norm(H0, 2)
    H1 /= 3 * np.linalg.norm(H1, 2)
    slope = H1 - H0
    zero = np.zeros_like(H0)

    def derivatives(s: float, fn):
        decomposition = eig_normal((1 - s) * H0 + s * H1, hermitian_hint=True)
        return function_derivatives(decomposition, fn, slope, zero)

    step = 1e-5
    for fn in (SQRT_COMPLEMENT, exponential(-0.5j * np.pi)):
        value, first, second = derivatives(0.4, fn)
        forward, first_forward, _ = derivatives(0.4 + step, fn)
        backward, first_backward, _ = derivatives(0.4 - step, fn)
        np.testing.assert_allclose(first, (forward - backward) / (2 * step), atol=1e-8)
        np.testing.assert_allclose(
            second, (first_forward - first_backward) / (2 * step), atol=1e-7
        )


def test_sylvester_solution_is_off_diagonal_and_solves_commutator(rng) -> None:
    H = random_hermitian(5, rng)
    decomposition = eig_normal(H)
    V = decomposition.eigenvectors[:, :2]
    P = V @ V.conj().T
    Q = np.eye(5) - P
    X = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))

    Y = sylvester_block_solve(H, P, Q, X)

    np.testing.assert_allclose(P @ Y @ P, 0, atol=1e-10)
    np.testing.assert_allclose(Q @ Y @ Q, 0, atol=1e-10)
    np.testing.assert_allclose(commutator(H, Y), commutator(P, X), atol=1e-9)


def test_sylvester_rejects_overlapping_spectra() -> None:
    P = np.diag([1.0, 0.0])
    with pytest.raises(SingularOperator):
        sylvester_block_solve(np.eye(2), P, np.eye(2) - P, np.ones((2, 2)))


def test_range_basis_has_projector_rank() -> None:
    P = np.diag([1.0, 0.0, 1.0]).astype(complex)
    assert range_basis(P).shape == (3, 2)


def test_matrix_file_round_trip(tmp_path) -> None:
    matrix = np.array([[1.0, 2.0j], [-2.0j, 0.5]])
    path = tmp_path / "H.json"
    path.write_text(json.dumps(matrix_to_json(matrix)), encoding="utf-8")

    np.testing.assert_array_equal(load_matrix_file(path), matrix)
    np.testing.assert_array_equal(matrix_from_json(matrix_to_json(matrix)), matrix)


def test_vector_from_json_accepts_plain_lists() -> None:
    np.testing.assert_array_equal(vector_from_json([1.0, 0.0]), np.array([1.0, 0.0], dtype=complex))
    np.testing.assert_array_equal(
        vector_from_json({"re": [0.0, 1.0], "im": [1.0, 0.0]}), np.array([1j, 1.0])
    )


def test_eig_normal_hermitian_hint_still_checks_asymmetry(rng) -> None:
    with pytest.raises(NonNormal):
        eig_normal(np.array([[1.0, 1.0], [0.0, 1.0]]), hermitian_hint=True)

    H = random_hermitian(5, rng)
    skew = np.triu(np.ones((5, 5)), 1)
    decomposition = eig_normal(H + 1e-14 * skew, hermitian_hint=True)
    np.testing.assert_allclose(decomposition.reconstruct(), H, atol=1e-12)
