"""
Two-qubit and two-qutrit families of entangled states.

Each family comes as a small value type (``SchmidtPure(q)``, ...) that
builds its density matrix, plus a :class:`~entqfi.estimation.ParamFamily`
factory with analytic derivatives for the estimation engine.

Conventions
-----------
* ``|Psi_q> = sqrt(q)|00> + sqrt(1-q)|11>``; ``q`` is the Schmidt weight.
* The orbit mixture is ``U(q) nu_p U(q)^dagger`` with
  ``U(q) = exp(i theta sigma_x (x) sigma_x)`` and ``theta = arccos(sqrt(q))``,
  so ``U(q)|00>`` has Schmidt weight ``q``.
* Qutrit basis ``{|down>, |0>, |up>}`` maps to indices ``0, 1, 2``.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError
from .estimation import (ParamFamily, QfiResult, qfi_matrix, reparametrize,
                         transfer_from_jacobian)
from .linalg import SIGMA_X, kron, matrix_exp_involution

QUBITS = (2, 2)
QUTRITS = (3, 3)
LUR_ARGMAX = 4 / 13
LUR_MAX = 2 / 1125


class Measure(str, enum.Enum):
    NEGATIVITY = "negativity"
    LINEAR_ENTROPY = "linear_entropy"
    LUR = "lur"


class Branch(str, enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


def _check_unit(name, x, closed=True):
    ok = 0.0 <= x <= 1.0 if closed else 0.0 < x < 1.0
    if not ok or math.isnan(x):
        raise DomainError(name, x)


def _proj(v):
    return np.outer(v, np.conj(v))


# --------------------------------------------------------------------------- #
#                               pure two qubits                               #
# --------------------------------------------------------------------------- #

def schmidt_ket(q):
    _check_unit("q", q)
    return np.array([math.sqrt(q), 0.0, 0.0, math.sqrt(1 - q)], dtype=complex)


def _schmidt_dket(q):
    return np.array([0.5 / math.sqrt(q), 0.0, 0.0, -0.5 / math.sqrt(1 - q)], dtype=complex)


def schmidt_state(q):
    return _proj(schmidt_ket(q))


@dataclass(frozen=True)
class SchmidtPure:
    q: float

    def __post_init__(self):
        _check_unit("q", self.q)

    def rho(self):
        return schmidt_state(self.q)


def schmidt_family():
    def deriv(params, j):
        q = params[0]
        psi, dpsi = schmidt_ket(q), _schmidt_dket(q)
        return np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj())

    return ParamFamily(lambda params: schmidt_state(params[0]), [(0.0, 1.0)],
                       deriv, ("q",))


def schmidt_negativity(q):
    return 2 * math.sqrt(q * (1 - q))


def schmidt_linear_entropy(q):
    return 4 * q * (1 - q)


def schmidt_q_from_measure(measure, eps, branch=Branch.LOWER):
    """Schmidt weight for a given negativity or linear entropy.

    Returns ``(q, dq/deps)``; the lower branch has ``q <= 1/2``.
    """
    measure = Measure(measure)
    sign = -1.0 if Branch(branch) is Branch.LOWER else 1.0
    _check_unit("eps", eps)
    if measure is Measure.NEGATIVITY:
        root = math.sqrt(1 - eps * eps)
        q = 0.5 * (1 + sign * root)
        dq = -sign * eps / (2 * root) if root > 0 else math.inf
    elif measure is Measure.LINEAR_ENTROPY:
        root = math.sqrt(1 - eps)
        q = 0.5 * (1 + sign * root)
        dq = -sign / (4 * root) if root > 0 else math.inf
    else:
        raise ValueError(f"measure {measure.value} is not defined for pure qubit states")
    return q, dq


# --------------------------------------------------------------------------- #
#                         orbit of an entangling unitary                      #
# --------------------------------------------------------------------------- #

XX = kron(SIGMA_X, SIGMA_X)
_E00 = np.diag([1.0, 0, 0, 0]).astype(complex)
_E11 = np.diag([0, 0, 0, 1.0]).astype(complex)


def _orbit_angle(q):
    return math.acos(math.sqrt(q))


def orbit_mixture(p, q):
    _check_unit("p", p)
    _check_unit("q", q)
    u = matrix_exp_involution(XX, _orbit_angle(q))
    nu = p * _E00 + (1 - p) * _E11
    return u @ nu @ u.conj().T


@dataclass(frozen=True)
class OrbitMixture:
    p: float
    q: float

    def __post_init__(self):
        _check_unit("p", self.p)
        _check_unit("q", self.q)

    def rho(self):
        return orbit_mixture(self.p, self.q)

    @property
    def purity(self):
        return 1 - 2 * self.p * (1 - self.p)


def orbit_family():
    def deriv(params, j):
        p, q = params
        u = matrix_exp_involution(XX, _orbit_angle(q))
        if j == 0:
            return u @ (_E00 - _E11) @ u.conj().T
        dtheta = -0.5 / math.sqrt(q * (1 - q))
        rho = orbit_mixture(p, q)
        return 1j * dtheta * (XX @ rho - rho @ XX)

    return ParamFamily(lambda params: orbit_mixture(*params), [(0.0, 1.0)] * 2,
                       deriv, ("p", "q"))


def orbit_negativity(p, q):
    return 2 * math.sqrt(q * (1 - q)) * abs(1 - 2 * p)


def orbit_params(mu, eps):
    """``(p, q)`` for purity ``mu`` and negativity ``eps`` (branch p, q <= 1/2)."""
    if not 0.5 < mu < 1:
        raise DomainError("mu", mu)
    g = 2 * mu - 1
    if not 0 < eps * eps < g:
        raise DomainError("eps", eps, f"negativity {eps} must lie in (0, sqrt(2 mu - 1))")
    p = 0.5 * (1 - math.sqrt(g))
    q = 0.5 * (1 - math.sqrt(1 - eps * eps / g))
    return p, q


def orbit_transfer_matrix(mu, eps):
    """Transfer matrix from ``(p, q)`` to ``(mu, eps_N)``; rows are new parameters."""
    orbit_params(mu, eps)
    g = 2 * mu - 1
    r = math.sqrt(g - eps * eps)
    return np.array([
        [-1 / (2 * math.sqrt(g)), -eps * eps / (2 * g ** 1.5 * r)],
        [0.0, eps / (2 * math.sqrt(g) * r)],
    ])


def orbit_qfi_mu_eps(mu, eps, analytic=True):
    """QFI matrix in the ``(mu, eps_N)`` parametrization, via the numeric ``H(p, q)``."""
    p, q = orbit_params(mu, eps)
    h = qfi_matrix(orbit_family(), [p, q], analytic)
    return reparametrize(h, orbit_transfer_matrix(mu, eps), ("mu", "eps"))


# --------------------------------------------------------------------------- #
#                               Werner-like states                            #
# --------------------------------------------------------------------------- #

def werner_state(p, q):
    _check_unit("p", p)
    return (1 - p) / 4 * np.eye(4, dtype=complex) + p * schmidt_state(q)


@dataclass(frozen=True)
class WernerState:
    p: float
    q: float

    def __post_init__(self):
        _check_unit("p", self.p)
        _check_unit("q", self.q)

    def rho(self):
        return werner_state(self.p, self.q)

    @property
    def purity(self):
        return (1 + 3 * self.p ** 2) / 4


def werner_family():
    def deriv(params, j):
        p, q = params
        psi = schmidt_ket(q)
        if j == 0:
            return _proj(psi) - np.eye(4) / 4
        dpsi = _schmidt_dket(q)
        return p * (np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj()))

    return ParamFamily(lambda params: werner_state(*params), [(0.0, 1.0)] * 2,
                       deriv, ("p", "q"))


def werner_negativity(p, q):
    """``max(0, [p (1 + 4 sqrt(q(1-q))) - 1] / 2)``."""
    return max(0.0, 0.5 * (p * (1 + 4 * math.sqrt(q * (1 - q))) - 1))


def werner_threshold(q):
    """Smallest ``p`` at which the Werner-like state is entangled."""
    return 1 / (1 + 4 * math.sqrt(q * (1 - q)))


def werner_negativity_grad(p, q):
    s = math.sqrt(q * (1 - q))
    return np.array([(1 + 4 * s) / 2, p * (1 - 2 * q) / s])


def werner_p_from_negativity(eps, q):
    p = (2 * eps + 1) / (1 + 4 * math.sqrt(q * (1 - q)))
    if not 0 < p <= 1:
        raise DomainError("eps", eps, f"negativity {eps} unreachable at q={q}")
    return p


def werner_q_from_negativity(eps, p, tol=1e-12):
    """Invert the Werner negativity for ``q`` on the branch ``q <= 1/2`` by bisection."""
    top = werner_negativity(p, 0.5)
    if not 0 < eps <= top:
        raise DomainError("eps", eps, f"negativity {eps} unreachable at p={p}")
    if eps == top:
        return 0.5
    return brentq(lambda q: werner_negativity(p, q) - eps, 1e-300, 0.5, xtol=tol, rtol=1e-15)


def werner_qfi_eps(p, q, fixed="q", analytic=True):
    """QFI matrix after trading one Werner parameter for the negativity.

    ``fixed="q"`` gives parameters ``(eps, q)``; ``fixed="p"`` gives ``(p, eps)``.
    Only the entangled region is valid.
    """
    if werner_negativity(p, q) <= 0:
        raise DomainError("p", p, f"Werner state (p={p}, q={q}) is not entangled")
    grad = werner_negativity_grad(p, q)
    if fixed == "q":
        jac, names = np.array([grad, [0.0, 1.0]]), ("eps", "q")
    elif fixed == "p":
        jac, names = np.array([[1.0, 0.0], grad]), ("p", "eps")
    else:
        raise ValueError("fixed must be 'p' or 'q'")
    h = qfi_matrix(werner_family(), [p, q], analytic)
    return reparametrize(h, transfer_from_jacobian(jac), names)


# --------------------------------------------------------------------------- #
#                      two-qutrit bound entangled states                      #
# --------------------------------------------------------------------------- #

def _ket3(i, j):
    v = np.zeros(9, dtype=complex)
    v[3 * i + j] = 1.0
    return v


DOWN, ZERO, UP = 0, 1, 2
_ENTANGLED_E = (_ket3(DOWN, DOWN) + _ket3(ZERO, ZERO) + _ket3(UP, UP)) / math.sqrt(3)
_DIAG5 = sum(_proj(_ket3(i, j)) for i, j in
             [(DOWN, ZERO), (DOWN, UP), (ZERO, DOWN), (ZERO, UP), (UP, ZERO)])


def _pi_ket(a):
    return (math.sqrt((1 + a) / 2) * _ket3(UP, DOWN)
            + math.sqrt((1 - a) / 2) * _ket3(UP, UP))


def horodecki_state(a):
    _check_unit("a", a)
    n = 1 + 8 * a
    return (a / n) * _DIAG5 + (3 * a / n) * _proj(_ENTANGLED_E) + _proj(_pi_ket(a)) / n


@dataclass(frozen=True)
class HorodeckiState:
    a: float

    def __post_init__(self):
        _check_unit("a", self.a)

    def rho(self):
        return horodecki_state(self.a)


def horodecki_family():
    def deriv(params, j):
        a = params[0]
        n = 1 + 8 * a
        pi = _pi_ket(a)
        dpi = (_ket3(UP, DOWN) / (4 * math.sqrt((1 + a) / 2))
               - _ket3(UP, UP) / (4 * math.sqrt((1 - a) / 2)))
        return (_DIAG5 / n ** 2 + 3 * _proj(_ENTANGLED_E) / n ** 2
                - 8 * _proj(pi) / n ** 2
                + (np.outer(dpi, pi.conj()) + np.outer(pi, dpi.conj())) / n)

    return ParamFamily(lambda params: horodecki_state(params[0]), [(0.0, 1.0)],
                       deriv, ("a",))


def lur_violation(a):
    """Relative LUR violation ``3a^2(1-a) / (4(2+a)(1+8a)^2)``."""
    _check_unit("a", a)
    return 3 * a * a * (1 - a) / (4 * (2 + a) * (1 + 8 * a) ** 2)


def lur_violation_derivative(a):
    num = 3 * a * a * (1 - a)
    dnum = 6 * a - 9 * a * a
    den = 4 * (2 + a) * (1 + 8 * a) ** 2
    dden = 4 * (1 + 8 * a) * (33 + 24 * a)
    return (dnum * den - num * dden) / den ** 2


def lur_branch(a):
    return Branch.LOWER if a <= LUR_ARGMAX else Branch.UPPER


def a_from_lur(eps, branch):
    """Invert the LUR violation on one monotone branch."""
    if not 0 < eps <= LUR_MAX:
        raise DomainError("eps", eps, f"LUR violation must lie in (0, {LUR_MAX}]")
    if eps >= LUR_MAX:
        return LUR_ARGMAX
    lo, hi = (0.0, LUR_ARGMAX) if Branch(branch) is Branch.LOWER else (LUR_ARGMAX, 1.0)
    return brentq(lambda a: lur_violation(a) - eps, lo, hi, xtol=1e-15, rtol=1e-15)


# --------------------------------------------------------------------------- #
#                                 measures                                    #
# --------------------------------------------------------------------------- #

def measure_value(measure, state):
    """Closed-form entanglement measure of a family instance."""
    measure = Measure(measure)
    if isinstance(state, SchmidtPure):
        if measure is Measure.NEGATIVITY:
            return schmidt_negativity(state.q)
        if measure is Measure.LINEAR_ENTROPY:
            return schmidt_linear_entropy(state.q)
    elif isinstance(state, OrbitMixture):
        if measure is Measure.NEGATIVITY:
            return orbit_negativity(state.p, state.q)
    elif isinstance(state, WernerState):
        if measure is Measure.NEGATIVITY:
            return werner_negativity(state.p, state.q)
    elif isinstance(state, HorodeckiState):
        if measure is Measure.LUR:
            return lur_violation(state.a)
    raise ValueError(f"measure {measure.value} is not defined for {type(state).__name__}")


def qfi_vs_measure(kind, measure, branch=Branch.LOWER, analytic=True):
    """Return ``eps -> H(eps)`` for a one-parameter family.

    ``kind`` is ``"schmidt"`` (negativity, linear entropy) or
    ``"horodecki"`` (LUR violation).  The QFI of the natural parameter is
    computed numerically and carried over with ``H(eps) = H(x) (dx/deps)^2``.
    At a branch extremum (``deps/dx = 0``) the result is ``inf``.
    """
    measure = Measure(measure)
    branch = Branch(branch)
    if kind == "schmidt":
        fam = schmidt_family()

        def natural(eps):
            return schmidt_q_from_measure(measure, eps, branch)
    elif kind == "horodecki":
        if measure is not Measure.LUR:
            raise ValueError("the Horodecki family is parametrized by the LUR violation only")
        fam = horodecki_family()

        def natural(eps):
            a = a_from_lur(eps, branch)
            if abs(a - LUR_ARGMAX) < 1e-12:
                return a, math.inf
            return a, 1 / lur_violation_derivative(a)
    else:
        raise ValueError(f"unknown one-parameter family {kind!r}")

    def h_of_eps(eps):
        x, dx = natural(eps)
        if math.isinf(dx):
            return math.inf
        return float(qfi_matrix(fam, [x], analytic).H[0, 0]) * dx * dx

    return h_of_eps


def closed_form_qfi(kind, parametrization, inverse=False, **values):
    """Closed-form QFI matrices, used as regression references.

    Supported ``(kind, parametrization)`` pairs:

    ``schmidt``: ``q``, ``negativity``, ``linear_entropy``;
    ``orbit``: ``p,q``, ``mu,negativity``;
    ``werner``: ``p,q``.
    """
    key = (kind, parametrization.replace(" ", ""))
    if key == ("schmidt", "q"):
        q = values["q"]
        h = np.array([[1 / (q * (1 - q))]])
    elif key == ("schmidt", "negativity"):
        e = values["eps"]
        h = np.array([[1 / (1 - e * e)]])
    elif key == ("schmidt", "linear_entropy"):
        e = values["eps"]
        h = np.array([[1 / (4 * e * (1 - e))]])
    elif key == ("orbit", "p,q"):
        p, q = values["p"], values["q"]
        h = np.diag([1 / (p * (1 - p)), (1 - 2 * p) ** 2 / (q * (1 - q))])
    elif key == ("orbit", "mu,negativity"):
        mu, e = values["mu"], values["eps"]
        hinv = np.array([[-4 * mu * mu + 6 * mu - 2, 2 * e * (1 - mu)],
                         [2 * e * (1 - mu), 1 - e * e]])
        return hinv if inverse else np.linalg.inv(hinv)
    elif key == ("werner", "p,q"):
        p, q = values["p"], values["q"]
        h = np.diag([3 / (1 + (2 - 3 * p) * p), 2 * p * p / (q * (1 - q) * (1 + p))])
    else:
        raise ValueError(f"no closed form for {kind} in parametrization {parametrization!r}")
    return np.linalg.inv(h) if inverse else h


def scalar_bound(result: QfiResult, grad):
    """Variance bound ``grad^T H^{-1} grad`` for a scalar function of the parameters."""
    grad = np.asarray(grad, dtype=float)
    return float(grad @ result.Hinv @ grad)
