import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bergman_toeplitz.linalg import SVDConvergenceError, gauss_legendre, jacobi_svd


@pytest.mark.parametrize("nodes", [1, 2, 3, 7, 16, 32, 64])
def test_gauss_legendre_matches_numpy(nodes):
    x, w = gauss_legendre(nodes)
    xr, wr = np.polynomial.legendre.leggauss(nodes)
    np.testing.assert_allclose(x, xr, atol=1e-15)
    np.testing.assert_allclose(w, wr, atol=5e-15)


@pytest.mark.parametrize("nodes", [1, 4, 8, 32])
def test_gauss_legendre_exact_degree(nodes):
    x, w = gauss_legendre(nodes, 0.0, 1.0)
    for deg in range(2 * nodes):
        assert abs(np.sum(w * x**deg) - 1 / (deg + 1)) < 1e-14


def test_gauss_legendre_rejects_zero_nodes():
    with pytest.raises(ValueError):
        gauss_legendre(0)


def _check_svd(A):
    U, s, Vh = jacobi_svd(A)
    n = A.shape[1]
    scale = max(np.linalg.norm(A), 1e-300)
    assert np.linalg.norm(A - (U * s) @ Vh) <= 1e-12 * scale + 1e-300
    assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
    np.testing.assert_allclose(Vh @ Vh.conj().T, np.eye(n), atol=1e-12)
    ref = np.linalg.svd(A, compute_uv=False)
    np.testing.assert_allclose(s[: ref.size], ref, atol=1e-12 * max(1, s[0]))
    assert np.all(s[ref.size :] <= 1e-12 * max(1, s[0]))


@pytest.mark.parametrize("shape", [(1, 1), (2, 2), (5, 5), (9, 4), (17, 17), (64, 64)])
def test_jacobi_svd_random_complex(rng, shape):
    A = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    _check_svd(A)


def test_jacobi_svd_rank_deficient(rng):
    B = rng.normal(size=(20, 3)) + 1j * rng.normal(size=(20, 3))
    A = B @ B.conj().T
    U, s, Vh = jacobi_svd(A)
    assert np.count_nonzero(s > 1e-8 * s[0]) == 3
    _check_svd(A)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(20), atol=1e-10)


def test_jacobi_svd_zero_matrix():
    U, s, Vh = jacobi_svd(np.zeros((4, 4)))
    assert np.all(s == 0)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(4), atol=1e-15)


def test_jacobi_svd_wide_matrix_null_vector():
    A = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    _, s, Vh = jacobi_svd(A)
    assert s[-1] < 1e-14
    assert np.linalg.norm(A @ Vh[-1].conj()) < 1e-14


def test_jacobi_svd_iteration_cap(rng):
    A = rng.normal(size=(8, 8))
    with pytest.raises(SVDConvergenceError) as info:
        jacobi_svd(A, max_sweeps=1)
    assert info.value.off_norm > 0


@settings(deadline=None, max_examples=40)
@given(arrays(np.float64, st.tuples(st.integers(1, 12), st.integers(1, 12)), elements=st.floats(-10, 10)))
def test_jacobi_svd_property(A):
    _check_svd(A)


@pytest.mark.parametrize("scale", [1e-150, 1e-100, 1e100, 1e150])
def test_jacobi_svd_extreme_scaling(scale):
    base = np.array([[0.0, 1.0], [1.0, 1.0], [1.0, 1.0], [1.0, 1.0]])
    _, s, _ = jacobi_svd(base * scale)
    ref = np.linalg.svd(base, compute_uv=False)
    assert np.allclose(s / scale, ref, rtol=1e-14)


def test_jacobi_svd_rejects_nonfinite():
    with pytest.raises(ValueError):
        jacobi_svd(np.array([[np.nan, 1.0]]))
