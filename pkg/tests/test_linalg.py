import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import GOLDEN, ginibre, psd, svals_jacobi, unitary
from sdlab.errors import DomainError, NotHermitian, NotPositiveDefinite, SdlabError
from sdlab.funcspec import Pow, Sqrt
from sdlab.linalg import (
    as_matrix,
    cholesky_upper,
    eigvalsh,
    hermitian_eigen,
    jacobi_eigvalsh,
    matrix_function,
    modulus,
    op_norm,
    qr,
    singular_values,
)

seeds = st.integers(0, 2**32 - 1)
sizes = st.integers(1, 9)


# -------------------------------------------------------------- fixtures


def test_eigen_fixtures():
    np.testing.assert_allclose(hermitian_eigen(np.diag([1.0, 2, 3])).values, [3, 2, 1])
    np.testing.assert_allclose(hermitian_eigen([[0, 1], [1, 0]]).values, [1, -1], atol=1e-15)
    np.testing.assert_allclose(hermitian_eigen([[2, 1], [1, 2]]).values, [3, 1], atol=1e-14)


def test_singular_value_fixtures():
    np.testing.assert_allclose(singular_values(np.eye(5)).values, np.ones(5))
    np.testing.assert_allclose(singular_values([[1, 1], [0, 1]]).values, [GOLDEN, 1 / GOLDEN], atol=1e-12)
    np.testing.assert_allclose(singular_values([[0, 1], [0, 0]]).values, [1, 0], atol=1e-15)


def test_op_norm_fixtures():
    assert op_norm(np.eye(3)) == pytest.approx(1)
    assert op_norm([[0, 3], [0, 0]]) == pytest.approx(3)
    assert op_norm([[1, 1], [0, 1]]) == pytest.approx(GOLDEN, abs=1e-14)


def test_qr_fixtures(rng):
    x = np.triu(ginibre(rng, 4))
    x[np.diag_indices(4)] = np.abs(np.diag(x)) + 0.1
    q, r = qr(x)
    np.testing.assert_allclose(q, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(r, x, atol=1e-12)

    u = unitary(rng, 4)
    q, r = qr(u)
    np.testing.assert_allclose(np.abs(np.diag(r)), 1, atol=1e-12)
    np.testing.assert_allclose(r, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(q, u, atol=1e-12)


def test_cholesky_fixtures():
    np.testing.assert_allclose(cholesky_upper(np.eye(3)), np.eye(3))
    np.testing.assert_allclose(cholesky_upper(np.diag([4.0, 9.0])), np.diag([2, 3]))
    x = np.array([[2.0, 1], [1, 3]])
    z = cholesky_upper(x)
    # closed form: z = [[sqrt2, 1/sqrt2], [0, sqrt(5/2)]]
    np.testing.assert_allclose(z, [[np.sqrt(2), 1 / np.sqrt(2)], [0, np.sqrt(2.5)]], atol=1e-15)
    assert np.linalg.norm(z.conj().T @ z - x, 2) <= 1e-12


def test_matrix_function_fixtures():
    np.testing.assert_allclose(matrix_function(np.diag([4.0, 9.0]), Sqrt()), np.diag([2, 3]), atol=1e-14)
    a = np.array([[1.0, 1], [0, 1]])
    np.testing.assert_allclose(matrix_function(modulus(a), Pow(2)), [[1, 1], [1, 2]], atol=1e-14)
    x = psd(np.random.default_rng(3), 4)
    np.testing.assert_allclose(matrix_function(x, lambda t: t), x, atol=1e-14)


def test_errors():
    with pytest.raises(NotHermitian):
        hermitian_eigen([[0, 1], [0, 0]])
    with pytest.raises(NotPositiveDefinite):
        cholesky_upper(np.diag([1.0, -1.0]))
    with pytest.raises(NotPositiveDefinite):
        cholesky_upper(np.diag([1.0, 0.0]))
    with pytest.raises(NotPositiveDefinite):
        cholesky_upper([[1, 1], [0, 1]])
    with pytest.raises(DomainError):
        matrix_function(np.diag([1.0, -1.0]), Sqrt())
    with pytest.raises(SdlabError):
        as_matrix(np.ones((2, 3)))
    with pytest.raises(SdlabError):
        as_matrix([[np.nan]])


def test_scalar_case():
    assert singular_values([[-3 + 4j]]).values[0] == pytest.approx(5)
    q, r = qr([[-2.0]])
    assert q[0, 0] == pytest.approx(-1) and r[0, 0] == pytest.approx(2)
    assert cholesky_upper([[4.0]])[0, 0] == pytest.approx(2)


# -------------------------------------------------------------- properties


@given(seeds, sizes)
def test_qr_reconstruction_and_triangularity(seed, n):
    x = ginibre(np.random.default_rng(seed), n)
    q, r = qr(x)
    assert np.linalg.norm(q @ r - x, 2) <= 1e-10 * np.linalg.norm(x, 2)
    assert np.linalg.norm(q.conj().T @ q - np.eye(n), 2) <= 1e-12
    assert np.all(r[np.tril_indices(n, -1)] == 0)
    d = np.diag(r)
    assert np.all(d.imag == 0) and np.all(d.real >= 0)


@given(seeds, sizes)
def test_cholesky_reconstruction_and_triangularity(seed, n):
    x = psd(np.random.default_rng(seed), n) + 1e-3 * np.eye(n)
    z = cholesky_upper(x)
    assert np.linalg.norm(z.conj().T @ z - x, 2) <= 1e-10 * np.linalg.norm(x, 2)
    assert np.all(z[np.tril_indices(n, -1)] == 0)
    assert np.all(np.diag(z).real > 0)


@given(seeds, sizes)
def test_unitary_invariance(seed, n):
    rng = np.random.default_rng(seed)
    x = ginibre(rng, n)
    s = singular_values(x).values
    s2 = singular_values(unitary(rng, n) @ x @ unitary(rng, n)).values
    assert np.max(np.abs(s - s2)) <= 1e-10 * s[0]


@given(seeds, sizes)
def test_lapack_agrees_with_jacobi(seed, n):
    rng = np.random.default_rng(seed)
    x = ginibre(rng, n)
    s = singular_values(x).values
    np.testing.assert_allclose(svals_jacobi(x), s, atol=1e-10 * s[0])
    h = x + x.conj().T
    np.testing.assert_allclose(jacobi_eigvalsh(h), eigvalsh(h), atol=1e-10 * np.abs(eigvalsh(h)).max())


@given(seeds, sizes)
def test_eigen_residual_and_orthonormality(seed, n):
    x = ginibre(np.random.default_rng(seed), n)
    h = x + x.conj().T
    sp = hermitian_eigen(h)
    v = sp.vectors
    assert np.all(np.diff(sp.values) <= 0)
    assert np.linalg.norm(h @ v - v * sp.values, 2) <= 1e-10 * np.linalg.norm(h, 2)
    assert np.linalg.norm(v.conj().T @ v - np.eye(n), 2) <= 1e-10 * n


@given(seeds, sizes, st.sampled_from([0.5, 1.0, 2.0, 3.0]))
def test_spectral_calculus_consistency(seed, n, p):
    x = psd(np.random.default_rng(seed), n)
    fx = matrix_function(x, Pow(p))
    lam = np.clip(eigvalsh(x), 0, None)
    np.testing.assert_allclose(np.sort(eigvalsh(fx)), np.sort(lam**p), atol=1e-10 * max(1, lam[0] ** p))


@given(seeds, sizes)
def test_modulus_squares_to_gram(seed, n):
    x = ginibre(np.random.default_rng(seed), n)
    m = modulus(x)
    assert np.linalg.norm(m @ m - x.conj().T @ x, 2) <= 1e-10 * np.linalg.norm(x, 2) ** 2
    assert eigvalsh(m)[-1] >= -1e-12
