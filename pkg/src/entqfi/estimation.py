"""
Local quantum estimation: symmetric logarithmic derivatives, quantum and
classical Fisher information, reparametrization of the QFI matrix,
Cramer-Rao variance bounds, signal-to-noise ratios and measurement budgets.

A parametric family of states is a :class:`ParamFamily`; everything else
works on plain arrays.
"""
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, InvalidPOVMError
from .linalg import check_hermitian, hermitian_eig

KERNEL_CUTOFF = 1e-10
PINV_RTOL = 1e-10
DERIV_HERMITIAN_TOL = 5e-9
ROUTE_RTOL = 1e-6


class OneSidedDerivativeWarning(UserWarning):
    """Central difference impossible at a point too close to the domain edge."""


@dataclass
class ParamFamily:
    """A map from a real parameter vector to a density matrix.

    Parameters
    ----------
    evaluator : callable
        ``evaluator(params) -> rho``.
    domain : sequence of (lo, hi)
        Open interval per parameter.
    derivative : callable, optional
        ``derivative(params, j) -> d rho / d params[j]``.
    names : sequence of str, optional
        Parameter names, used in reports.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    domain: Sequence[tuple]
    derivative: Optional[Callable[[np.ndarray, int], np.ndarray]] = None
    names: Sequence[str] = ()

    @property
    def arity(self):
        return len(self.domain)

    def __call__(self, params):
        return self.evaluator(np.atleast_1d(np.asarray(params, dtype=float)))

    def check_point(self, params):
        params = np.atleast_1d(np.asarray(params, dtype=float))
        if params.shape != (self.arity,):
            raise ValueError(f"expected {self.arity} parameters, got {params.shape}")
        for j, (x, (lo, hi)) in enumerate(zip(params, self.domain)):
            if not lo < x < hi:
                name = self.names[j] if self.names else f"param[{j}]"
                raise DomainError(name, float(x))
        return params

    def with_unitary(self, u):
        """The family ``U rho U^dagger`` with ``U`` fixed."""
        u = np.asarray(u)
        ud = u.conj().T
        deriv = None
        if self.derivative is not None:
            deriv = lambda params, j: u @ self.derivative(params, j) @ ud
        return ParamFamily(lambda params: u @ self.evaluator(params) @ ud,
                           self.domain, deriv, self.names)


def fd_step(x):
    return max(1e-5, 1e-5 * abs(x))


def _central(family, params, j, h):
    e = np.zeros_like(params)
    e[j] = h
    return (family(params + e) - family(params - e)) / (2 * h)


def state_derivative(family, params, j, analytic=True, richardson=False):
    """Derivative of the family's state with respect to parameter ``j``.

    Uses the analytic derivative when the family provides one (and
    ``analytic`` is true), otherwise a central difference with step
    ``h = max(1e-5, 1e-5 |x|)``.  With ``richardson`` the central
    difference is Richardson-extrapolated from steps ``h`` and ``h/2``.

    Near the domain edge, where ``x +- h`` would leave the domain, a
    one-sided second-order difference is used and a
    :class:`OneSidedDerivativeWarning` is emitted.
    """
    params = family.check_point(params)
    if analytic and family.derivative is not None:
        return np.asarray(family.derivative(params, j))
    x = params[j]
    lo, hi = family.domain[j]
    h = fd_step(x)
    if lo < x - h and x + h < hi:
        d = _central(family, params, j, h)
        if richardson:
            d = (4 * _central(family, params, j, h / 2) - d) / 3
        return d
    warnings.warn(f"one-sided difference for parameter {j} at {x}",
                  OneSidedDerivativeWarning, stacklevel=2)
    sign = 1.0 if x + 2 * h < hi else -1.0
    e = np.zeros_like(params)
    e[j] = sign * h
    f0, f1, f2 = family(params), family(params + e), family(params + 2 * e)
    return sign * (-3 * f0 + 4 * f1 - f2) / (2 * h)


@dataclass
class SldResult:
    L: np.ndarray
    truncated: int
    residual: float


def _eig_frame(rho):
    sd = hermitian_eig(rho)
    return sd.eigenvalues, sd.eigenvectors


def _sld_eigbasis(p, d, cutoff):
    """SLD matrix elements in the eigenbasis of rho; kernel terms zeroed."""
    s = p[:, None] + p[None, :]
    keep = s >= cutoff
    safe = np.where(keep, s, 1.0)
    return np.where(keep, 2 * d / safe, 0.0), int(np.count_nonzero(~keep))


def sld(rho, drho, kernel_cutoff=KERNEL_CUTOFF):
    """Symmetric logarithmic derivative ``L`` solving ``(L rho + rho L)/2 = drho``.

    Terms with ``p_n + p_m < kernel_cutoff`` are dropped; their number is
    returned as ``truncated``.  ``residual`` is the max-norm of the
    equation residual with the kernel-kernel block excluded.
    """
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    check_hermitian(drho, DERIV_HERMITIAN_TOL)
    p, v = _eig_frame(rho)
    d = v.conj().T @ drho @ v
    l_eig, dropped = _sld_eigbasis(p, d, kernel_cutoff)
    res = 0.5 * (l_eig * p[None, :] + p[:, None] * l_eig) - d
    support = (p[:, None] + p[None, :]) >= kernel_cutoff
    residual = float(np.max(np.abs(res[support]))) if support.any() else 0.0
    big_l = v @ l_eig @ v.conj().T
    return SldResult(0.5 * (big_l + big_l.conj().T), dropped, residual)


def qfi_routes(rho, drho, kernel_cutoff=KERNEL_CUTOFF):
    """QFI computed two ways: ``Tr[rho L^2]`` and the eigen-sum formula.

    The eigen-sum splits into the classical part ``sum (dp_n)^2 / p_n``
    and the eigenvector-rotation part
    ``2 sum_{n != m} (p_n - p_m)^2 / (p_n + p_m) |<psi_n|d psi_m>|^2``,
    using ``<psi_n|d rho|psi_m> = (p_m - p_n) <psi_n|d psi_m>``.
    """
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    check_hermitian(drho, DERIV_HERMITIAN_TOL)
    p, v = _eig_frame(rho)
    d = v.conj().T @ drho @ v
    l_eig, _ = _sld_eigbasis(p, d, kernel_cutoff)
    big_l = v @ l_eig @ v.conj().T
    trace_route = float(np.real(np.trace(rho @ big_l @ big_l)))

    dp = np.real(np.diag(d))
    classical = sum(dp[n] ** 2 / p[n] for n in range(len(p)) if 2 * p[n] >= kernel_cutoff)
    rotation = 0.0
    for n in range(len(p)):
        for m in range(len(p)):
            s = p[n] + p[m]
            if n == m or s < kernel_cutoff:
                continue
            # |<psi_n|d psi_m>|^2 (p_n - p_m)^2 == |d_nm|^2
            rotation += 2 * abs(d[n, m]) ** 2 / s
    return trace_route, float(classical + rotation)


def qfi_scalar(rho, drho, kernel_cutoff=KERNEL_CUTOFF):
    """Quantum Fisher information ``Tr[rho L^2]`` of a single parameter."""
    h, _ = qfi_routes(rho, drho, kernel_cutoff)
    return max(h, 0.0)


def qfi_pure(psi, dpsi):
    """Pure-state QFI ``4 (<dpsi|dpsi> - |<psi|dpsi>|^2)`` for a normalized ket."""
    psi = np.asarray(psi, dtype=complex)
    dpsi = np.asarray(dpsi, dtype=complex)
    return float(4 * (np.vdot(dpsi, dpsi).real - abs(np.vdot(psi, dpsi)) ** 2))


@dataclass
class QfiResult:
    """QFI matrix with its (pseudo-)inverse and the per-parameter bounds.

    ``var_bounds[i] = (H^{-1})_{ii}`` is the single-shot variance bound for
    parameter ``i``; divide by the number of repetitions ``M``.
    """

    H: np.ndarray
    Hinv: np.ndarray
    var_bounds: np.ndarray
    singular: bool
    names: tuple = field(default=())

    @classmethod
    def from_matrix(cls, h, names=()):
        h = np.atleast_2d(np.asarray(h, dtype=float))
        h = 0.5 * (h + h.T)
        w, v = np.linalg.eigh(h)
        wmax = max(float(np.max(np.abs(w))), 0.0)
        keep = w > PINV_RTOL * wmax if wmax > 0 else np.zeros_like(w, dtype=bool)
        singular = not bool(np.all(keep))
        inv_w = np.where(keep, 1.0 / np.where(keep, w, 1.0), 0.0)
        hinv = (v * inv_w) @ v.T
        return cls(h, hinv, np.diag(hinv).copy(), singular, tuple(names))


def qfi_matrix_from_derivatives(rho, drhos, kernel_cutoff=KERNEL_CUTOFF):
    """QFI matrix ``H_ij = Re Tr[rho L_i L_j]`` from a state and its derivatives.

    ``rho`` need not be normalized, which lets block-diagonal states be
    handled one block at a time (the QFI is additive over blocks).
    """
    rho = np.asarray(rho, dtype=complex)
    p, v = _eig_frame(rho)
    ls = []
    for drho in drhos:
        drho = np.asarray(drho, dtype=complex)
        check_hermitian(drho, DERIV_HERMITIAN_TOL)
        l_eig, _ = _sld_eigbasis(p, v.conj().T @ drho @ v, kernel_cutoff)
        ls.append(l_eig)
    n = len(ls)
    h = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            h[i, j] = h[j, i] = np.real(np.sum(p[:, None] * ls[i] * ls[j].T))
    return h


def qfi_matrix(family, params, analytic=True):
    """QFI matrix of ``family`` at ``params``.

    When no analytic derivative is used, the two scalar QFI routes are
    compared on the diagonal; if they disagree beyond ``1e-6`` relative
    the finite differences are redone with Richardson extrapolation.
    """
    params = family.check_point(params)
    rho = family(params)
    drhos = [state_derivative(family, params, j, analytic) for j in range(family.arity)]
    if not (analytic and family.derivative is not None):
        for j, drho in enumerate(drhos):
            a, b = qfi_routes(rho, drho)
            if abs(a - b) > ROUTE_RTOL * max(abs(a), abs(b), 1e-300):
                drhos[j] = state_derivative(family, params, j, analytic=False,
                                            richardson=True)
    h = qfi_matrix_from_derivatives(rho, drhos)
    return QfiResult.from_matrix(h, family.names)


def transfer_from_jacobian(jac):
    """Transfer matrix from the Jacobian of the new parameters.

    ``jac[i, k] = d new_i / d old_k``.  The returned ``B`` has rows
    indexed by the new parameters, ``B[i, k] = d old_k / d new_i``, so
    that the new QFI matrix is ``B H B^T``.
    """
    return np.linalg.inv(np.asarray(jac, dtype=float)).T


def reparametrize(result, b, names=()):
    """Transform a QFI matrix to new parameters: ``H_new = B H B^T``.

    ``b[i, k] = d old_k / d new_i`` (rows are the new parameters).
    """
    b = np.atleast_2d(np.asarray(b, dtype=float))
    h = result.H
    if b.shape != h.shape:
        raise ValueError(f"transfer matrix shape {b.shape} does not match H {h.shape}")
    return QfiResult.from_matrix(b @ h @ b.T, names)


def check_povm(povm, tol=1e-10):
    if not povm:
        raise InvalidPOVMError("empty POVM")
    total = np.zeros_like(np.asarray(povm[0], dtype=complex))
    for e in povm:
        e = np.asarray(e, dtype=complex)
        try:
            check_hermitian(e, tol)
        except ValueError as exc:
            raise InvalidPOVMError(f"effect is not Hermitian: {exc}") from None
        if np.linalg.eigvalsh(0.5 * (e + e.conj().T))[0] < -tol:
            raise InvalidPOVMError("effect is not positive semidefinite")
        total = total + e
    err = float(np.max(np.abs(total - np.eye(total.shape[0]))))
    if err > tol:
        raise InvalidPOVMError(f"effects do not sum to identity (error {err:.2e})")


def classical_fisher_from_state(rho, drho, povm, p_min=1e-14):
    """Fisher information ``sum_x (Tr[E_x drho])^2 / Tr[E_x rho]`` of a POVM."""
    check_povm(povm)
    f = 0.0
    for e in povm:
        px = float(np.real(np.trace(e @ rho)))
        if px < p_min:
            continue
        dpx = float(np.real(np.trace(e @ drho)))
        f += dpx * dpx / px
    return f


def classical_fisher(family, params, j, povm, analytic=True):
    params = family.check_point(params)
    return classical_fisher_from_state(
        family(params), state_derivative(family, params, j, analytic), povm)


def sld_spectrum(big_l, tol=1e-9):
    """Distinct eigenvalues of ``L`` and projectors onto its eigenspaces."""
    sd = hermitian_eig(big_l, tol=DERIV_HERMITIAN_TOL)
    w, v = sd.eigenvalues, sd.eigenvectors
    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    values, projectors = [], []
    start = 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > tol * scale:
            cols = v[:, start:k]
            values.append(float(np.mean(w[start:k])))
            projectors.append(cols @ cols.conj().T)
            start = k
    return np.array(values), projectors


def sld_povm(big_l, tol=1e-9):
    """Projectors onto the eigenspaces of an SLD (the optimal measurement)."""
    return sld_spectrum(big_l, tol)[1]


@dataclass
class EstimationBudget:
    """Signal-to-noise figures for a parameter value ``lam`` with QFI ``H``.

    ``qsnr = lam^2 H``; ``m_delta = 9 / (delta^2 qsnr)`` is the number of
    repetitions for a 3-sigma interval at relative error ``delta``.
    """

    lam: float
    H: float
    delta: float
    qsnr: float
    m_delta: float


def qsnr(lam, h):
    if h == math.inf:
        return math.inf if lam != 0 else math.nan
    return lam * lam * h


def m_delta(q, delta):
    if delta <= 0:
        raise ValueError("relative error delta must be positive")
    if q == 0:
        return math.inf
    if q == math.inf:
        return 0.0
    return 9.0 / (delta * delta * q)


def budget(lam, h, delta):
    if h < 0 or math.isnan(h):
        raise ValueError(f"QFI must be non-negative, got {h}")
    if delta <= 0:
        raise ValueError("relative error delta must be positive")
    q = qsnr(lam, h)
    return EstimationBudget(lam, h, delta, q, m_delta(q, delta) if not math.isnan(q) else math.nan)


@dataclass
class SimulationResult:
    samples: int
    mean: float
    bias: float
    empirical_var: float
    crb: float

    @property
    def ratio(self):
        return self.empirical_var / self.crb


def rng_for(seed):
    """Counter-based generator; shards can be split with ``.jumped()``."""
    return np.random.Generator(np.random.Philox(seed))


def simulate_crb(family, params, j, samples, seed, analytic=True):
    """Monte Carlo run of the SLD measurement with the locally unbiased estimator.

    Each of ``samples`` shots yields an SLD eigenvalue ``l``; the single
    shot estimate is ``x + l / H``.  The reported ``empirical_var`` is the
    sample variance of the averaged estimate (single-shot variance over
    ``samples``), to be compared with ``crb = 1 / (samples H)``.
    """
    if samples < 100:
        raise ValueError(f"need at least 100 samples, got {samples}")
    params = family.check_point(params)
    rho = family(params)
    drho = state_derivative(family, params, j, analytic)
    res = sld(rho, drho)
    h = qfi_scalar(rho, drho)
    values, projectors = sld_spectrum(res.L)
    probs = np.array([max(0.0, float(np.real(np.trace(pr @ rho)))) for pr in projectors])
    probs /= probs.sum()
    outcomes = rng_for(seed).choice(len(values), size=samples, p=probs)
    estimates = params[j] + values[outcomes] / h
    mean = float(np.mean(estimates))
    var = float(np.var(estimates, ddof=1)) / samples
    return SimulationResult(samples, mean, mean - float(params[j]), var, 1.0 / (samples * h))
