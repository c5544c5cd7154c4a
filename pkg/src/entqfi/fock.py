"""
Fock-basis computations used as independent checks of the phase-space
results: the twin beam as a Schmidt series ``sum_n f_n |n>|n>``, and the
squeezed thermal state in a truncated number basis.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DomainError
from .estimation import QfiResult, qfi_matrix_from_derivatives
from .gaussian import GaussianMeasure

NORM_DEFICIT_TOL = 1e-12
MAX_FOCK = 4000
SECTOR_WEIGHT_TOL = 1e-15
# sector blocks are unnormalized with geometric thermal tails; the generic
# 1e-10 kernel cutoff would drop ~1e-7 of the QFI carried by that tail
BLOCK_KERNEL_CUTOFF = 1e-20


@dataclass
class FockTwinBeam:
    coeffs: np.ndarray
    dcoeffs: np.ndarray
    deficit: float

    @property
    def n_max(self):
        return len(self.coeffs) - 1

    @property
    def H(self):
        return 4.0 * float(np.sum(self.dcoeffs ** 2))


def _ratio(measure, eps):
    """Geometric ratio ``f_{n+1}^2 / f_n^2`` of the Schmidt weights."""
    if measure is GaussianMeasure.LOG_NEGATIVITY:
        return math.tanh(eps / 2) ** 2
    return eps / (2 - eps)


def default_n_max(measure, eps, tol=NORM_DEFICIT_TOL):
    """Smallest cutoff with norm deficit below ``tol``, doubled for the derivative sum."""
    lam = _ratio(GaussianMeasure(measure), eps)
    if lam == 0:
        return 1
    n = max(0, math.ceil(math.log(tol) / math.log(lam)) - 1)
    while lam ** (n + 1) >= tol:
        n += 1
    return 2 * n


def twin_beam_fock(eps, measure=GaussianMeasure.LOG_NEGATIVITY, n_max=None):
    """Schmidt coefficients of the twin beam and their derivatives.

    Since the coefficients are real and normalized, ``<Psi|d Psi> = 0``
    and the pure-state QFI is ``4 <d Psi|d Psi> = 4 sum_n (d f_n / d eps)^2``.

    Raises
    ------
    ValueError
        If ``n_max`` leaves a norm deficit above ``1e-12``.
    """
    measure = GaussianMeasure(measure)
    if measure is GaussianMeasure.LOG_NEGATIVITY:
        if not eps >= 0:
            raise DomainError("eps", eps)
    elif measure is GaussianMeasure.LINEAR_ENTROPY:
        if not 0 < eps < 1:
            raise DomainError("eps", eps)
    else:
        raise ValueError("Fock representation is parametrized by log_negativity or linear_entropy")
    if n_max is None:
        n_max = default_n_max(measure, eps)
    if n_max > MAX_FOCK:
        raise ValueError(f"Fock cutoff {n_max} exceeds cap {MAX_FOCK}")
    n = np.arange(n_max + 1)
    if measure is GaussianMeasure.LOG_NEGATIVITY:
        t = math.tanh(eps / 2)
        sech = 1 / math.cosh(eps / 2)
        f = sech * t ** n
        # d/deps [sech(eps/2) t^n] = sech/2 (n t^{n-1} sech^2 - t^{n+1})
        tn1 = np.where(n > 0, t ** np.maximum(n - 1, 0), 0.0)
        df = 0.5 * sech * (n * tn1 * sech ** 2 - t ** (n + 1))
    else:
        u = eps / (2 - eps)
        pref = math.sqrt(2 * (1 - eps) / (2 - eps))
        f = pref * u ** (n / 2)
        dlog = 0.5 * (-1 / (1 - eps) + 1 / (2 - eps) + n * (1 / eps + 1 / (2 - eps)))
        df = f * dlog
    deficit = float(1 - np.sum(f ** 2))
    if deficit > NORM_DEFICIT_TOL:
        raise ValueError(f"n_max={n_max} too small: norm deficit {deficit:.2e}")
    return FockTwinBeam(f, df, deficit)


def _thermal(n, n_th):
    m = np.asarray(n, dtype=float)
    return n_th ** m / (n_th + 1) ** (m + 1)


def _thermal_dn(n, n_th):
    m = np.asarray(n, dtype=float)
    return _thermal(m, n_th) * (m / n_th - (m + 1) / (n_th + 1))


def sts_cutoff(r, n_th, tol=1e-11):
    nbar = (n_th + 0.5) * math.cosh(2 * r) - 0.5
    ratio = nbar / (nbar + 1)
    return int(math.ceil(math.log(tol) / math.log(ratio))) + 20


def sts_fock_blocks(r, n_th, n_max=None):
    """Sector blocks of the squeezed thermal state in the number basis.

    The state ``S(r) (nu (x) nu) S(r)^dagger`` commutes with the photon
    number difference, so it is block diagonal in sectors
    ``{|n + k, n>}``; sectors ``k`` and ``-k`` are mirror images.  Yields
    ``(multiplicity, rho_k, [d rho_k / dr, d rho_k / dNt])`` for
    ``k = 0, 1, ...`` in a basis truncated at ``n < n_max``, stopping once
    a block's weight drops below ``1e-15``.  Blocks are not normalized.
    """
    if not r > 0:
        raise DomainError("r", r)
    if not n_th > 0:
        raise DomainError("Nt", n_th)
    if n_max is None:
        n_max = sts_cutoff(r, n_th)
    n = np.arange(n_max)
    for k in range(n_max):
        # generator a^dag b^dag - a b restricted to sector k
        t = np.diag(np.sqrt((n[:-1] + k + 1.0) * (n[:-1] + 1.0)), -1)
        g = t - t.T
        s = expm(r * g)
        w = _thermal(n + k, n_th) * _thermal(n, n_th)
        if float(np.sum(w)) < SECTOR_WEIGHT_TOL:
            return
        dw = _thermal_dn(n + k, n_th) * _thermal(n, n_th) + _thermal(n + k, n_th) * _thermal_dn(n, n_th)
        rho = (s * w) @ s.T
        drho_r = g @ rho - rho @ g
        drho_n = (s * dw) @ s.T
        yield (1 if k == 0 else 2), rho, [drho_r, drho_n]


def sts_fock_qfi(r, n_th, n_max=None):
    """Numeric QFI matrix in ``(r, Nt)`` of the squeezed thermal state.

    Each sector block from :func:`sts_fock_blocks` is handed to the
    generic eigen-decomposition QFI; contributions add over blocks.

    Raises
    ------
    ValueError
        If the truncated blocks miss more than ``1e-8`` of the trace.
    """
    h = np.zeros((2, 2))
    trace = 0.0
    for mult, rho, drhos in sts_fock_blocks(r, n_th, n_max):
        trace += mult * float(np.trace(rho))
        h += mult * qfi_matrix_from_derivatives(rho, drhos, BLOCK_KERNEL_CUTOFF)
    if abs(1 - trace) > 1e-8:
        raise ValueError(f"Fock cutoff too small: trace deficit {1 - trace:.2e}")
    return QfiResult.from_matrix(h, ("r", "Nt"))
