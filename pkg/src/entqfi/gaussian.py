"""
Two-mode Gaussian states.

Covariance matrices use the vacuum-variance-1/2 convention: the vacuum
has ``sigma = I/2`` and a two-mode state is separable iff the smallest
symplectic eigenvalue of its partial transpose satisfies ``d >= 1/2``.
Phase-space coordinates are ordered ``(q1, p1, q2, p2)``.

Standard form: ``A = a I``, ``B = b I``, ``C = diag(c_plus, c_minus)``.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .estimation import QfiResult, m_delta, reparametrize, transfer_from_jacobian
from .linalg import SIGMA_Y

PHYSICAL_TOL = 1e-12


def omega(n_modes=2):
    """Symplectic form ``(+) [[0, 1], [-1, 0]]``."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(sigma):
    """Symplectic eigenvalues of a covariance matrix, ascending.

    They are the moduli of the eigenvalues of ``Omega^{-1} sigma``, which
    come in ``+-i d`` pairs; each pair is reported once.
    """
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.shape[0] // 2
    ev = np.linalg.eigvals(np.linalg.solve(omega(n), sigma))
    mags = np.sort(np.abs(ev))
    return 0.5 * (mags[0::2] + mags[1::2])


@dataclass(frozen=True)
class TwoModeCovariance:
    a: float
    b: float
    c_plus: float
    c_minus: float

    def __post_init__(self):
        for name, x in (("a", self.a), ("b", self.b)):
            if not x >= 0.5 - PHYSICAL_TOL:
                raise DomainError(name, x, f"covariance block {name}={x} below vacuum level 1/2")
        d = symplectic_eigenvalues(self.matrix())
        if d[0] < 0.5 - PHYSICAL_TOL:
            raise DomainError("sigma", float(d[0]),
                              f"unphysical covariance matrix: symplectic eigenvalue {d[0]:.6g} < 1/2")

    def matrix(self):
        a, b, cp, cm = self.a, self.b, self.c_plus, self.c_minus
        return np.array([[a, 0, cp, 0],
                         [0, a, 0, cm],
                         [cp, 0, b, 0],
                         [0, cm, 0, b]], dtype=float)

    @property
    def purity(self):
        return 1 / (4 * math.sqrt(np.linalg.det(self.matrix())))


def partial_transpose_cov(sigma):
    """Covariance matrix of the partial transpose on mode A (``p1 -> -p1``)."""
    flip = np.diag([1.0, -1.0, 1.0, 1.0])
    return flip @ np.asarray(sigma, dtype=float) @ flip


@dataclass(frozen=True)
class PTSymplectic:
    d_minus: float
    separable: bool


def symplectic_eig_pt(cov):
    """Smallest symplectic eigenvalue of the partially transposed CM.

    For symmetric states (``a == b``) the closed form
    ``sqrt((a - c_plus)(a + c_minus))`` is returned after checking it
    against the general eigenvalue route.
    """
    if not isinstance(cov, TwoModeCovariance):
        raise TypeError("expected a TwoModeCovariance")
    numeric = float(symplectic_eigenvalues(partial_transpose_cov(cov.matrix()))[0])
    if abs(cov.a - cov.b) <= 1e-14 * max(1.0, cov.a):
        closed = math.sqrt((cov.a - cov.c_plus) * (cov.a + cov.c_minus))
        if abs(closed - numeric) > 1e-10 * max(1.0, closed):
            raise ArithmeticError(f"symplectic eigenvalue routes disagree: {closed} vs {numeric}")
        d = closed
    else:
        d = numeric
    return PTSymplectic(d, d >= 0.5)


def gaussian_char_fn(sigma, gamma):
    """Zero-mean Gaussian characteristic function ``exp(-gamma^T sigma gamma / 2)``."""
    sigma = np.asarray(sigma.matrix() if isinstance(sigma, TwoModeCovariance) else sigma)
    gamma = np.asarray(gamma, dtype=float)
    return complex(np.exp(-0.5 * gamma @ sigma @ gamma))


# --------------------------------------------------------------------------- #
#                   entanglement measures of the eigenvalue d                 #
# --------------------------------------------------------------------------- #

class GaussianMeasure(str, enum.Enum):
    DTILDE = "dtilde"
    LOG_NEGATIVITY = "log_negativity"
    LINEAR_ENTROPY = "linear_entropy"
    EPS_S = "eps_s"
    EPS_B = "eps_b"


def gaussian_measure(measure, d):
    """Entanglement measure as a function of ``d = d_minus``.

    Every measure vanishes for ``d >= 1/2``.
    """
    measure = GaussianMeasure(measure)
    if not d > 0:
        raise DomainError("d", d)
    if measure is GaussianMeasure.DTILDE:
        return d
    if d >= 0.5:
        return 0.0
    if measure is GaussianMeasure.LOG_NEGATIVITY:
        return -math.log(2 * d)
    if measure is GaussianMeasure.LINEAR_ENTROPY:
        return 1 - 4 * d / (1 + 4 * d * d)
    if measure is GaussianMeasure.EPS_S:
        return 1 - 2 * d
    return (1 - math.sqrt(2 * d)) ** 2 / (1 + 2 * d)


def gaussian_measure_derivative(measure, d):
    """``d eps / d d`` of a measure; zero on the separable side ``d > 1/2``."""
    measure = GaussianMeasure(measure)
    if not d > 0:
        raise DomainError("d", d)
    if measure is GaussianMeasure.DTILDE:
        return 1.0
    if d > 0.5:
        return 0.0
    if measure is GaussianMeasure.LOG_NEGATIVITY:
        return -1 / d
    if measure is GaussianMeasure.LINEAR_ENTROPY:
        return -4 * (1 - 4 * d * d) / (1 + 4 * d * d) ** 2
    if measure is GaussianMeasure.EPS_S:
        return -2.0
    u = math.sqrt(2 * d)
    return -2 * (1 - u * u) / (u * (1 + u * u) ** 2)


def gaussian_measure_inverse(measure, eps):
    """``(d, dd/deps)`` for a measure value on the entangled side."""
    measure = GaussianMeasure(measure)
    if measure is GaussianMeasure.DTILDE:
        if not 0 < eps <= 0.5:
            raise DomainError("d", eps)
        return eps, 1.0
    if measure is GaussianMeasure.LOG_NEGATIVITY:
        if not 0 <= eps < math.inf:
            raise DomainError("eps", eps)
        d = 0.5 * math.exp(-eps)
        return d, -d
    if not 0 <= eps < 1:
        raise DomainError("eps", eps, f"measure value {eps} outside [0, 1)")
    if measure is GaussianMeasure.LINEAR_ENTROPY:
        s = 1 - eps
        if eps == 0:
            return 0.5, -math.inf
        root = math.sqrt(1 - s * s)
        d = (1 - root) / (2 * s)
        # from 4 s d^2 - 4 d + s = 0
        dd_ds = -(4 * d * d + 1) / (8 * s * d - 4)
        return d, -dd_ds
    if measure is GaussianMeasure.EPS_S:
        return (1 - eps) / 2, -0.5
    # eps_b
    u = 1 - eps
    w = 2 * eps - eps * eps
    root = math.sqrt(w)
    d = (1 + w - 2 * root) / (2 * u * u)
    if eps == 0:
        return d, -math.inf
    dnum = (2 - 2 * eps) - (2 - 2 * eps) / root
    dd = (dnum * 2 * u * u + (1 + w - 2 * root) * 4 * u) / (2 * u * u) ** 2
    return d, dd


# --------------------------------------------------------------------------- #
#                                 twin beam                                   #
# --------------------------------------------------------------------------- #

def twin_beam_covariance(d):
    """Twin-beam CM with least PT symplectic eigenvalue ``d`` in ``(0, 1/2]``."""
    if not 0 < d <= 0.5:
        raise DomainError("d", d)
    a = (1 + 4 * d * d) / (8 * d)
    c = (1 - 4 * d * d) / (8 * d)
    return TwoModeCovariance(a, a, c, -c)


def twin_beam_dcov(d):
    """``d sigma / d d`` for the twin beam."""
    da = (4 * d * d - 1) / (8 * d * d)
    dc = -(4 * d * d + 1) / (8 * d * d)
    return np.array([[da, 0, dc, 0],
                     [0, da, 0, -dc],
                     [dc, 0, da, 0],
                     [0, -dc, 0, da]])


@dataclass
class WickContext:
    """Matrices of the eight-dimensional Gaussian integral for the pure-state QFI."""

    Sigma: np.ndarray
    Sigma1: np.ndarray
    Sigma2: np.ndarray
    Upsilon: np.ndarray

    @property
    def Delta(self):
        return self.Sigma + 1j * self.Upsilon

    @classmethod
    def build(cls, sigma, dsigma):
        sigma = np.asarray(sigma, dtype=float)
        dsigma = np.asarray(dsigma, dtype=float)
        z = np.zeros((4, 4))
        big = np.block([[2 * sigma, sigma], [sigma, 2 * sigma]])
        s1 = np.block([[dsigma, z], [z, z]])
        s2 = np.block([[z, z], [z, dsigma]])
        return cls(big, s1, s2, upsilon())


def upsilon():
    """``(1/2) sigma_y (x) I_2 (x) sigma_y``, a real symmetric 8x8 matrix."""
    u = 0.5 * np.kron(np.kron(SIGMA_Y, np.eye(2)), SIGMA_Y)
    return u.real.copy()


def inv_sqrt_det_continued(real_part, imag_part, steps=64):
    """``det(R + i I)^{-1/2}`` on the branch continued from ``t = 0`` of ``R + i t I``.

    ``R`` must be positive definite, so the path never crosses a zero of
    the determinant.
    """
    root = math.sqrt(np.linalg.det(real_part))
    prev = complex(root)
    for t in np.linspace(0.0, 1.0, steps + 1)[1:]:
        cand = np.sqrt(complex(np.linalg.det(real_part + 1j * t * imag_part)))
        prev = cand if abs(cand - prev) <= abs(cand + prev) else -cand
    return 1 / prev


def quartic_gaussian_moment(real_part, imag_part, a, b):
    """``int d^n x/(2 pi)^{n/2} (x^T A x)(x^T B x) exp(-x^T Delta x / 2)``.

    ``Delta = real_part + i imag_part`` is complex symmetric with positive
    definite real part.  Wick's theorem gives
    ``det(Delta)^{-1/2} [tr(A C) tr(B C) + 2 tr(A C B C)]`` with
    ``C = Delta^{-1}``.
    """
    delta = np.asarray(real_part) + 1j * np.asarray(imag_part)
    c = np.linalg.inv(delta)
    ac, bc = a @ c, b @ c
    wick = np.trace(ac) * np.trace(bc) + 2 * np.trace(ac @ bc)
    return inv_sqrt_det_continued(real_part, imag_part) * wick


def wick_qfi_from_cov(sigma, dsigma, imag_tol=1e-9):
    """Pure-state QFI of a zero-mean two-mode Gaussian state from its CM.

    For a pure state the SLD is ``2 d rho``, whose characteristic function
    is ``-(Gamma^T dsigma Gamma) chi(Gamma)``; ``Tr[rho L^2]`` then becomes
    a quartic Gaussian moment in eight dimensions.  Only pure states are
    valid input: for mixed states the SLD is not ``2 d rho``.
    """
    sigma = np.asarray(sigma, dtype=float)
    if abs(np.linalg.det(sigma) - 1 / 16) > 1e-10:
        raise ValueError("phase-space QFI route requires a pure state (det sigma = 1/16)")
    ctx = WickContext.build(sigma, dsigma)
    val = quartic_gaussian_moment(ctx.Sigma, ctx.Upsilon, ctx.Sigma1, ctx.Sigma2)
    if abs(val.imag) > imag_tol * max(1.0, abs(val.real)):
        raise ArithmeticError(f"Wick integral has imaginary residue {val.imag:.3e}")
    return float(val.real)


def wick_qfi_pure(eps, measure=GaussianMeasure.DTILDE, imag_tol=1e-9):
    """QFI of the twin beam with respect to an entanglement measure.

    The derivative of the CM is taken along ``measure`` and the QFI is
    evaluated with :func:`wick_qfi_from_cov`.
    """
    measure = GaussianMeasure(measure)
    d, dd = gaussian_measure_inverse(measure, eps)
    if not 0 < d <= 0.5 or not math.isfinite(dd):
        raise DomainError("eps", eps, f"twin beam QFI undefined at d={d}")
    return wick_qfi_from_cov(twin_beam_covariance(d).matrix(), twin_beam_dcov(d) * dd, imag_tol)


def twin_beam_qfi_closed(measure, eps):
    """Closed-form twin-beam QFI ``H(d) (dd/deps)^2`` with ``H(d) = d^{-2}``."""
    measure = GaussianMeasure(measure)
    if measure is GaussianMeasure.LINEAR_ENTROPY:
        return 1 / ((2 - eps) * (eps - 1) ** 2 * eps)
    d, dd = gaussian_measure_inverse(measure, eps)
    return dd * dd / (d * d)


# --------------------------------------------------------------------------- #
#                     symmetric two-mode squeezed thermal                     #
# --------------------------------------------------------------------------- #

def _check_sts(r, n_th):
    if not r > 0:
        raise DomainError("r", r)
    if not n_th > 0:
        raise DomainError("Nt", n_th)


def sts_covariance(r, n_th):
    """Standard-form CM of the two-mode squeezed thermal state."""
    if not r >= 0:
        raise DomainError("r", r)
    if not n_th >= 0:
        raise DomainError("Nt", n_th)
    a = (n_th + 0.5) * math.cosh(2 * r)
    c = (n_th + 0.5) * math.sinh(2 * r)
    return TwoModeCovariance(a, a, c, -c)


def sts_d_mu(r, n_th):
    """``(d, mu)`` with ``mu = 1/(1 + 2 Nt)``, the purity of each thermal seed.

    The global two-mode purity is ``mu**2``.
    """
    return math.exp(-2 * r) * (1 + 2 * n_th) / 2, 1 / (1 + 2 * n_th)


def sts_params(d, mu):
    """``(r, Nt)`` for symplectic eigenvalue ``d`` and purity ``mu``."""
    if not 0 < mu < 1:
        raise DomainError("mu", mu)
    if not 0 < d < 0.5 / mu:
        raise DomainError("d", d)
    n_th = (1 / mu - 1) / 2
    return -0.5 * math.log(2 * d * mu), n_th


def sts_qfi_matrix(r, n_th):
    """Closed-form QFI matrix in ``(r, Nt)``."""
    _check_sts(r, n_th)
    h = np.diag([8 - 4 / (1 + 2 * n_th * (1 + n_th)), 2 / (n_th * (1 + n_th))])
    return QfiResult.from_matrix(h, ("r", "Nt"))


def sts_transfer_matrix(d, mu):
    """Transfer matrix from ``(r, Nt)`` to ``(d, mu)``; rows are new parameters."""
    return np.array([[-1 / (2 * d), 0.0],
                     [-1 / (2 * mu), -(1 - mu) / (2 * mu * mu) - 1 / (2 * mu)]])


def sts_qfi_d_mu(d, mu):
    r, n_th = sts_params(d, mu)
    return reparametrize(sts_qfi_matrix(r, n_th), sts_transfer_matrix(d, mu), ("d", "mu"))


@dataclass
class StsBound:
    measure: str
    eps: float
    d: float
    mu: float
    var_bound: float
    H: float
    qsnr: float

    def m_delta(self, delta):
        return m_delta(self.qsnr, delta)


def sts_bounds(measure, eps, mu):
    """Variance bound, QFI and QSNR for a measure of an STS at fixed purity.

    The bound is ``(H(eps, mu)^{-1})_{11}``, i.e. the ``d`` bound ``d^2``
    carried over with ``(deps/dd)^2``.
    """
    measure = GaussianMeasure(measure)
    d, dd = gaussian_measure_inverse(measure, eps)
    if not math.isfinite(dd) or dd == 0:
        raise DomainError("eps", eps, f"measure {measure.value} is not invertible at {eps}")
    res_d = sts_qfi_d_mu(d, mu)
    jac = np.diag([1 / dd, 1.0])
    res = reparametrize(res_d, transfer_from_jacobian(jac), (measure.value, "mu"))
    var = float(res.var_bounds[0])
    q = eps * eps / var if var > 0 else math.inf
    return StsBound(measure.value, eps, d, mu, var, float(res.H[0, 0]), q)
