import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gauss_jordan_inverse, random_spd
from shapeci import linalg
from shapeci.errors import NearSingular


def test_identity_eigen():
    lam, v = linalg.jacobi_eigen(np.eye(3))
    np.testing.assert_array_equal(lam, [1, 1, 1])
    np.testing.assert_array_equal(v, np.eye(3))


def test_diagonal_eigen_axis_aligned():
    lam, v = linalg.jacobi_eigen(np.diag([4.0, 9.0]))
    assert sorted(lam) == [4.0, 9.0]
    np.testing.assert_array_equal(np.abs(v), np.eye(2))


def test_eigen_reconstruction_random_psd():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(5, 3))
    m = a @ a.T  # rank-deficient PSD on purpose
    lam, v = linalg.jacobi_eigen(m)
    np.testing.assert_allclose(v @ np.diag(lam) @ v.T, m, atol=1e-9)
    np.testing.assert_allclose(v.T @ v, np.eye(5), atol=1e-9)


def test_eigen_rejects_non_square():
    with pytest.raises(ValueError):
        linalg.jacobi_eigen(np.ones((2, 3)))


def test_eigen_symmetrizes_input():
    m = np.array([[2.0, 1.0 + 1e-12], [1.0, 3.0]])
    lam, v = linalg.jacobi_eigen(m)
    np.testing.assert_allclose(v @ np.diag(lam) @ v.T, 0.5 * (m + m.T), atol=1e-12)


def test_inv_sqrt_trivial_cases():
    np.testing.assert_allclose(linalg.inv_sqrt_sym(np.eye(4)), np.eye(4), atol=1e-15)
    np.testing.assert_allclose(linalg.inv_sqrt_sym(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]), atol=1e-15)


def test_inv_sqrt_matches_gauss_jordan_inverse():
    rng = np.random.default_rng(5)
    m = random_spd(rng, 6)
    s = linalg.inv_sqrt_sym(m)
    np.testing.assert_allclose(s @ s, gauss_jordan_inverse(m), atol=1e-8)
    np.testing.assert_allclose(s, s.T, atol=0)


def test_inv_sqrt_near_singular():
    with pytest.raises(NearSingular):
        linalg.inv_sqrt_sym(np.diag([1.0, 1e-14]))
    with pytest.raises(NearSingular):
        linalg.inv_sqrt_sym(np.zeros((3, 3)))


def test_solve_spd_trivial():
    b = np.array([1.0, -2.0, 3.0])
    np.testing.assert_allclose(linalg.solve_spd(np.eye(3), b), b)
    np.testing.assert_allclose(linalg.solve_spd(np.diag([2.0, 4.0]), [2.0, 8.0]), [1.0, 2.0])


def test_solve_spd_matrix_rhs():
    rng = np.random.default_rng(2)
    m = random_spd(rng, 5)
    b = rng.normal(size=(5, 3))
    np.testing.assert_allclose(m @ linalg.solve_spd(m, b), b, atol=1e-10)


def test_solve_spd_near_singular():
    with pytest.raises(NearSingular):
        linalg.solve_spd(np.array([[1.0, 1.0], [1.0, 1.0]]), [1.0, 1.0])


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
def test_kernel_properties(n, seed):
    rng = np.random.default_rng(seed)
    m = random_spd(rng, n)
    lam, v = linalg.jacobi_eigen(m)
    scale = np.linalg.norm(m)
    assert np.max(np.abs(v @ np.diag(lam) @ v.T - m)) <= 1e-9 * scale
    assert np.max(np.abs(v.T @ v - np.eye(n))) <= 1e-9
    s = linalg.inv_sqrt_sym(m)
    assert np.max(np.abs(s @ m - m @ s)) <= 1e-8 * scale
    assert np.max(np.abs(s @ s @ m - np.eye(n))) <= 1e-8
    b = rng.normal(size=n)
    assert np.linalg.norm(m @ linalg.solve_spd(m, b) - b) <= 1e-9 * np.linalg.norm(b)
