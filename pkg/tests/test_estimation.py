import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entqfi.errors import DomainError, InvalidPOVMError
from entqfi.estimation import (OneSidedDerivativeWarning, ParamFamily, QfiResult, budget,
                               classical_fisher_from_state, m_delta, qfi_matrix,
                               qfi_matrix_from_derivatives, qfi_pure, qfi_routes, qfi_scalar,
                               qsnr, reparametrize, simulate_crb, sld, sld_povm,
                               state_derivative, transfer_from_jacobian)
from entqfi.families import schmidt_family


def random_state(rng, n, rank=None):
    a = rng.normal(size=(n, rank or n)) + 1j * rng.normal(size=(n, rank or n))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_traceless_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = 0.5 * (a + a.conj().T)
    return h - np.trace(h) / n * np.eye(n)


def qubit_family():
    """Bloch vector of length ``r`` on the z axis, rotated by ``theta`` about y."""
    def rho(params):
        r, theta = params
        n = np.array([np.sin(theta), 0.0, np.cos(theta)]) * r
        return 0.5 * np.array([[1 + n[2], n[0]], [n[0], 1 - n[2]]], dtype=complex)

    return ParamFamily(rho, [(0.0, 1.0), (-np.pi, np.pi)], names=("r", "theta"))


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 6), seed=st.integers(0, 2**32 - 1))
def test_sld_solves_lyapunov_equation(n, seed):
    rng = np.random.default_rng(seed)
    rho = random_state(rng, n)
    drho = random_traceless_hermitian(rng, n)
    res = sld(rho, drho)
    big_l = res.L
    assert np.allclose(big_l, big_l.conj().T)
    assert np.max(np.abs(0.5 * (big_l @ rho + rho @ big_l) - drho)) < 1e-8
    assert res.truncated == 0


@settings(max_examples=60, deadline=None)
@given(n=st.integers(2, 6), rank=st.integers(1, 6), seed=st.integers(0, 2**32 - 1))
def test_two_qfi_routes_agree(n, rank, seed):
    rng = np.random.default_rng(seed)
    rho = random_state(rng, n, min(rank, n))
    # derivative of a unitary orbit, so the support question is well posed
    g = random_traceless_hermitian(rng, n)
    drho = 1j * (rho @ g - g @ rho)
    a, b = qfi_routes(rho, drho)
    assert a == pytest.approx(b, rel=1e-8, abs=1e-10)
    assert a >= -1e-12


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 5), seed=st.integers(0, 2**32 - 1))
def test_qfi_matrix_psd_and_bounds_dominate_inverse_diagonal(n, seed):
    rng = np.random.default_rng(seed)
    rho = random_state(rng, n)
    drhos = [random_traceless_hermitian(rng, n) for _ in range(3)]
    res = QfiResult.from_matrix(qfi_matrix_from_derivatives(rho, drhos))
    assert np.linalg.eigvalsh(res.H)[0] >= -1e-10 * np.max(np.abs(res.H))
    if not res.singular:
        assert np.all(res.var_bounds >= 1 / np.diag(res.H) * (1 - 1e-10))


def test_pure_state_qfi_matches_sld_route(rng):
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    g = random_traceless_hermitian(rng, 4)
    dpsi = -1j * g @ psi
    rho = np.outer(psi, psi.conj())
    drho = np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj())
    assert qfi_pure(psi, dpsi) == pytest.approx(qfi_scalar(rho, drho), rel=1e-9)
    # for a unitary orbit the pure-state QFI is four times the generator variance
    var = np.vdot(psi, g @ g @ psi).real - np.vdot(psi, g @ psi).real ** 2
    assert qfi_pure(psi, dpsi) == pytest.approx(4 * var, rel=1e-9)


def test_qubit_qfi_known_values():
    # Bloch length r: 1/(1 - r^2); rotation angle: r^2
    fam = qubit_family()
    h = qfi_matrix(fam, [0.6, 0.4]).H
    assert h[0, 0] == pytest.approx(1 / (1 - 0.36), rel=1e-8)
    assert h[1, 1] == pytest.approx(0.36, rel=1e-8)
    assert h[0, 1] == pytest.approx(0.0, abs=1e-8)


def test_rank_deficient_matrix_is_flagged():
    res = QfiResult.from_matrix([[1.0, 1.0], [1.0, 1.0]])
    assert res.singular
    assert np.allclose(res.Hinv, 0.25 * np.ones((2, 2)))


def test_reparametrization_composes(rng):
    h = QfiResult.from_matrix(np.array([[2.0, 0.3], [0.3, 1.0]]))
    j1 = rng.normal(size=(2, 2)) + 2 * np.eye(2)
    j2 = rng.normal(size=(2, 2)) + 2 * np.eye(2)
    step = reparametrize(reparametrize(h, transfer_from_jacobian(j1)), transfer_from_jacobian(j2))
    direct = reparametrize(h, transfer_from_jacobian(j2 @ j1))
    assert np.allclose(step.H, direct.H)
    # a linear change of variables maps the inverse like a covariance
    assert np.allclose(direct.Hinv, (j2 @ j1) @ h.Hinv @ (j2 @ j1).T)


def test_reparametrize_rejects_wrong_shape():
    with pytest.raises(ValueError):
        reparametrize(QfiResult.from_matrix([[1.0]]), np.eye(2))


def test_sld_povm_is_complete_and_saturates(rng):
    rho = random_state(rng, 4)
    g = random_traceless_hermitian(rng, 4)
    drho = 1j * (rho @ g - g @ rho)
    povm = sld_povm(sld(rho, drho).L)
    assert np.allclose(sum(povm), np.eye(4), atol=1e-10)
    f = classical_fisher_from_state(rho, drho, povm)
    assert f == pytest.approx(qfi_scalar(rho, drho), rel=1e-8)


def test_other_measurements_stay_below_qfi(rng):
    rho = random_state(rng, 3)
    drho = random_traceless_hermitian(rng, 3)
    h = qfi_scalar(rho, drho)
    for _ in range(20):
        v = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))[0]
        povm = [np.outer(v[:, k], v[:, k].conj()) for k in range(3)]
        assert classical_fisher_from_state(rho, drho, povm) <= h * (1 + 1e-10)


def test_incomplete_povm_is_rejected():
    with pytest.raises(InvalidPOVMError):
        classical_fisher_from_state(np.eye(2) / 2, np.zeros((2, 2)), [np.diag([1.0, 0.0])])


def test_domain_is_open():
    fam = schmidt_family()
    for bad in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(DomainError) as err:
            qfi_matrix(fam, [bad])
        assert err.value.param == "q"


def test_finite_difference_matches_analytic_derivative():
    fam = schmidt_family()
    a = state_derivative(fam, [0.3], 0)
    b = state_derivative(fam, [0.3], 0, analytic=False)
    assert np.max(np.abs(a - b)) < 1e-8


def test_one_sided_derivative_near_edge_warns():
    fam = schmidt_family()
    with pytest.warns(OneSidedDerivativeWarning):
        d = state_derivative(fam, [1 - 5e-6], 0, analytic=False)
    assert np.all(np.isfinite(d))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        state_derivative(fam, [0.5], 0, analytic=False)


def test_budget_values_and_sentinels():
    b = budget(0.6, 1 / 0.64, 0.1)
    assert b.qsnr == pytest.approx(0.5625)
    assert b.m_delta == pytest.approx(9 / (0.01 * 0.5625))
    assert m_delta(0.0, 0.1) == math.inf
    assert m_delta(math.inf, 0.1) == 0.0
    assert qsnr(0.0, 5.0) == 0.0
    assert qsnr(2.0, math.inf) == math.inf
    with pytest.raises(ValueError):
        m_delta(1.0, 0.0)
    with pytest.raises(ValueError):
        budget(0.5, -1.0, 0.1)


@pytest.mark.parametrize("q", [0.2, 0.5, 0.7])
def test_monte_carlo_variance_near_crb(q):
    res = simulate_crb(schmidt_family(), [q], 0, 100_000, 17)
    assert abs(res.ratio - 1) < 0.05
    assert abs(res.bias) < 5 * math.sqrt(res.crb)


def test_monte_carlo_is_reproducible_and_needs_enough_samples():
    a = simulate_crb(schmidt_family(), [0.3], 0, 1000, 5)
    b = simulate_crb(schmidt_family(), [0.3], 0, 1000, 5)
    assert a == b
    with pytest.raises(ValueError):
        simulate_crb(schmidt_family(), [0.3], 0, 99, 5)
