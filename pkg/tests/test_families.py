import math

import numpy as np
import pytest
from scipy.linalg import sqrtm
from hypothesis import given, settings
from hypothesis import strategies as st

from entqfi import families as fam
from entqfi.errors import DomainError
from entqfi.estimation import classical_fisher, qfi_matrix, sld, sld_povm, state_derivative
from entqfi.linalg import is_density_matrix, min_pt_eigenvalue, negativity

unit = st.floats(0.02, 0.98)


@settings(max_examples=50, deadline=None)
@given(q=unit)
def test_schmidt_qfi_and_measures(q):
    assert qfi_matrix(fam.schmidt_family(), [q]).H[0, 0] == pytest.approx(1 / (q * (1 - q)), rel=1e-10)
    rho = fam.schmidt_state(q)
    assert negativity(rho, fam.QUBITS) == pytest.approx(fam.schmidt_negativity(q), abs=1e-10)


@pytest.mark.parametrize("branch", ["lower", "upper"])
@pytest.mark.parametrize("eps", [0.1, 0.5, 0.9])
def test_schmidt_measure_inverse_round_trip(eps, branch):
    q, _ = fam.schmidt_q_from_measure("negativity", eps, branch)
    assert fam.schmidt_negativity(q) == pytest.approx(eps)
    assert (q <= 0.5) == (branch == "lower")
    q, _ = fam.schmidt_q_from_measure("linear_entropy", eps, branch)
    assert fam.schmidt_linear_entropy(q) == pytest.approx(eps)


def test_schmidt_measure_qfi_both_branches_equal():
    for measure, closed in (("negativity", lambda e: 1 / (1 - e * e)),
                            ("linear_entropy", lambda e: 1 / (4 * e * (1 - e)))):
        for eps in (0.2, 0.6, 0.95):
            lower = fam.qfi_vs_measure("schmidt", measure, "lower")(eps)
            upper = fam.qfi_vs_measure("schmidt", measure, "upper")(eps)
            assert lower == pytest.approx(closed(eps), rel=1e-9)
            assert upper == pytest.approx(lower, rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(p=unit, q=unit)
def test_orbit_mixture_properties(p, q):
    state = fam.OrbitMixture(p, q)
    rho = state.rho()
    assert np.allclose(np.linalg.eigvalsh(rho), sorted([p, 1 - p, 0, 0]), atol=1e-12)
    assert np.trace(rho @ rho).real == pytest.approx(state.purity, abs=1e-12)
    assert negativity(rho, fam.QUBITS) == pytest.approx(fam.orbit_negativity(p, q), abs=1e-10)
    h = qfi_matrix(fam.orbit_family(), [p, q]).H
    assert np.allclose(h, fam.closed_form_qfi("orbit", "p,q", p=p, q=q), rtol=1e-8, atol=1e-8)


def test_orbit_transfer_reproduces_inverse_qfi():
    # frozen numeric values of the closed-form inverse at mu = 0.7, eps = 0.3
    res = fam.orbit_qfi_mu_eps(0.7, 0.3)
    assert np.allclose(res.Hinv, [[0.24, 0.18], [0.18, 0.91]], atol=1e-10)


def test_orbit_params_round_trip():
    p, q = fam.orbit_params(0.8, 0.5)
    assert fam.OrbitMixture(p, q).purity == pytest.approx(0.8)
    assert fam.orbit_negativity(p, q) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        fam.orbit_params(0.6, 0.5)


@settings(max_examples=30, deadline=None)
@given(p=unit, q=unit)
def test_werner_qfi_matches_corrected_closed_form(p, q):
    h = qfi_matrix(fam.werner_family(), [p, q]).H
    assert np.allclose(h, fam.closed_form_qfi("werner", "p,q", p=p, q=q), rtol=1e-8, atol=1e-8)


def test_werner_sld_measurement_exceeds_halved_q_entry():
    # the optimal measurement for q reaches 2p^2/(q(1-q)(1+p)) = 4/3 at p = q = 1/2,
    # so a QFI of half that value would be beaten by a real measurement
    family = fam.werner_family()
    x = [0.5, 0.5]
    povm = sld_povm(sld(family(x), state_derivative(family, x, 1)).L)
    f = classical_fisher(family, x, 1, povm)
    assert f == pytest.approx(4 / 3, rel=1e-9)
    halved = 0.5 ** 2 / (0.5 * 0.5 * 1.5)
    assert f > halved + 0.5


def test_werner_q_entry_from_bures_fidelity():
    # independent of the SLD: H = 8 (1 - sqrt(F(rho_q, rho_{q+h}))) / h^2 for small h
    p, q, h = 0.5, 0.5, 1e-4
    a, b = fam.werner_state(p, q - h / 2), fam.werner_state(p, q + h / 2)
    root = sqrtm(a)
    sqrt_fid = np.trace(sqrtm(root @ b @ root)).real
    assert 8 * (1 - sqrt_fid) / h ** 2 == pytest.approx(4 / 3, rel=1e-4)


def test_werner_pure_limit_recovers_schmidt():
    q = 0.3
    h = fam.closed_form_qfi("werner", "p,q", p=1 - 1e-9, q=q)
    assert h[1, 1] == pytest.approx(1 / (q * (1 - q)), rel=1e-8)


@pytest.mark.parametrize("q", [0.1, 0.3, 0.5])
def test_werner_threshold_is_where_pt_turns_negative(q):
    t = fam.werner_threshold(q)
    assert min_pt_eigenvalue(fam.werner_state(t, q), fam.QUBITS) == pytest.approx(0, abs=1e-12)
    assert fam.werner_negativity(t * 0.99, q) == 0
    assert negativity(fam.werner_state(0.9, q), fam.QUBITS) == pytest.approx(
        fam.werner_negativity(0.9, q), abs=1e-10)


def test_werner_negativity_inverses():
    p = fam.werner_p_from_negativity(0.2, 0.3)
    assert fam.werner_negativity(p, 0.3) == pytest.approx(0.2)
    q = fam.werner_q_from_negativity(0.2, 0.8)
    assert fam.werner_negativity(0.8, q) == pytest.approx(0.2, abs=1e-11)
    with pytest.raises(DomainError):
        fam.werner_p_from_negativity(0.9, 0.1)


def test_werner_eps_parametrization_requires_entanglement():
    with pytest.raises(DomainError):
        fam.werner_qfi_eps(0.2, 0.5)


def test_scalar_bound_is_parametrization_independent():
    # Var(eps_N) from (p, q) via the gradient equals the (eps, q) diagonal entry
    p, q = 0.8, 0.4
    direct = fam.scalar_bound(qfi_matrix(fam.werner_family(), [p, q]), fam.werner_negativity_grad(p, q))
    assert fam.werner_qfi_eps(p, q, "q").var_bounds[0] == pytest.approx(direct, rel=1e-10)
    assert fam.werner_qfi_eps(p, q, "p").var_bounds[1] == pytest.approx(direct, rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(a=unit)
def test_horodecki_state_is_ppt(a):
    rho = fam.horodecki_state(a)
    assert is_density_matrix(rho)
    assert min_pt_eigenvalue(rho, fam.QUTRITS) >= -1e-10


def test_lur_maximum():
    assert fam.lur_violation(fam.LUR_ARGMAX) == pytest.approx(fam.LUR_MAX, rel=1e-14)
    assert fam.lur_violation_derivative(fam.LUR_ARGMAX) == pytest.approx(0, abs=1e-15)
    assert fam.lur_branch(0.1) is fam.Branch.LOWER
    assert fam.lur_branch(0.5) is fam.Branch.UPPER


@pytest.mark.parametrize("branch", ["lower", "upper"])
def test_lur_inverse_round_trip(branch):
    a = fam.a_from_lur(1e-3, branch)
    assert fam.lur_violation(a) == pytest.approx(1e-3, rel=1e-12)
    with pytest.raises(DomainError):
        fam.a_from_lur(fam.LUR_MAX * 1.01, branch)


def test_lur_derivative_matches_finite_difference():
    for a in (0.1, 0.5, 0.8):
        h = 1e-6
        fd = (fam.lur_violation(a + h) - fam.lur_violation(a - h)) / (2 * h)
        assert fam.lur_violation_derivative(a) == pytest.approx(fd, rel=1e-7)


def test_horodecki_measure_qfi_diverges_at_extremum():
    h = fam.qfi_vs_measure("horodecki", "lur", "lower")
    assert h(fam.LUR_MAX) == math.inf
    assert h(fam.LUR_MAX * (1 - 1e-6)) > h(fam.LUR_MAX * 0.5)


def test_measure_value_dispatch():
    assert fam.measure_value("negativity", fam.SchmidtPure(0.5)) == pytest.approx(1.0)
    assert fam.measure_value("lur", fam.HorodeckiState(0.3)) == fam.lur_violation(0.3)
    with pytest.raises(ValueError):
        fam.measure_value("lur", fam.WernerState(0.5, 0.5))


def test_closed_form_unknown_parametrization():
    with pytest.raises(ValueError):
        fam.closed_form_qfi("werner", "mu,negativity", mu=0.7, eps=0.1)
