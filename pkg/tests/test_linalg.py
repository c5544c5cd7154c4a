import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm
from scipy.stats import unitary_group

from entqfi.errors import NotHermitianError
from entqfi.linalg import (hermitian_eig, is_density_matrix, kron, matrix_exp_involution,
                           min_pt_eigenvalue, negativity, partial_trace, partial_transpose,
                           SIGMA_X)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def random_state(rng, n, rank=None):
    a = rng.normal(size=(n, rank or n)) + 1j * rng.normal(size=(n, rank or n))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def bell_state(q):
    psi = np.array([np.sqrt(q), 0, 0, np.sqrt(1 - q)], dtype=complex)
    return np.outer(psi, psi.conj())


@settings(max_examples=200, deadline=None)
@given(n=st.integers(2, 9), seed=st.integers(0, 2**32 - 1))
def test_eig_reconstructs_and_is_orthonormal(n, seed):
    m = random_hermitian(np.random.default_rng(seed), n)
    sd = hermitian_eig(m)
    v = sd.eigenvectors
    assert np.max(np.abs(sd.reconstruct() - m)) < 1e-10
    assert np.max(np.abs(v.conj().T @ v - np.eye(n))) < 1e-10
    assert np.all(np.diff(sd.eigenvalues) >= 0)


def test_eig_is_deterministic(rng):
    m = random_hermitian(rng, 6)
    a, b = hermitian_eig(m), hermitian_eig(m.copy())
    assert np.array_equal(a.eigenvectors, b.eigenvectors)


def test_eig_rejects_non_hermitian():
    m = np.array([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(NotHermitianError):
        hermitian_eig(m)


def test_partial_transpose_is_an_involution(rng):
    rho = random_state(rng, 6)
    for sub in "AB":
        assert np.allclose(partial_transpose(partial_transpose(rho, (2, 3), sub), (2, 3), sub), rho)


def test_partial_transpose_of_product_operator(rng):
    a, b = random_hermitian(rng, 3), random_hermitian(rng, 3)
    assert np.allclose(partial_transpose(kron(a, b), (3, 3)), kron(a.T, b))
    assert np.allclose(partial_transpose(kron(a, b), (3, 3), "B"), kron(a, b.T))


def test_partial_trace_of_product_state(rng):
    a, b = random_state(rng, 2), random_state(rng, 3)
    assert np.allclose(partial_trace(kron(a, b), (2, 3), "A"), a)
    assert np.allclose(partial_trace(kron(a, b), (2, 3), "B"), b)


def test_shape_mismatch_raises():
    with pytest.raises(ValueError):
        partial_transpose(np.eye(4), (3, 3))


@pytest.mark.parametrize("q", [0.1, 0.3, 0.5, 0.85])
def test_pure_two_qubit_negativity(q):
    assert negativity(bell_state(q), (2, 2)) == pytest.approx(2 * np.sqrt(q * (1 - q)), abs=1e-12)


def test_negativity_zero_for_product_and_mixed_separable(rng):
    product = kron(random_state(rng, 3), random_state(rng, 3))
    assert negativity(product, (3, 3)) == pytest.approx(0, abs=1e-12)
    assert negativity(np.eye(9) / 9, (3, 3)) == pytest.approx(0, abs=1e-12)


def test_negativity_invariant_under_local_unitaries(rng):
    rho = random_state(rng, 9)
    n0 = negativity(rho, (3, 3))
    for _ in range(10):
        u = kron(unitary_group.rvs(3, random_state=rng), unitary_group.rvs(3, random_state=rng))
        assert abs(negativity(u @ rho @ u.conj().T, (3, 3)) - n0) < 1e-10


def test_negativity_requires_density_matrix():
    with pytest.raises(ValueError):
        negativity(2 * np.eye(4) / 4, (2, 2))


def test_min_pt_eigenvalue_of_bell_state():
    assert min_pt_eigenvalue(bell_state(0.5), (2, 2)) == pytest.approx(-0.5)


def test_is_density_matrix(rng):
    assert is_density_matrix(random_state(rng, 4, rank=2))
    assert not is_density_matrix(np.diag([1.5, -0.5]))


def test_involution_exponential_matches_expm():
    g = kron(SIGMA_X, SIGMA_X)
    assert np.allclose(matrix_exp_involution(g, 0.37), expm(0.37j * g))
    with pytest.raises(ValueError):
        matrix_exp_involution(2 * g, 0.37)
