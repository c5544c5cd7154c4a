"""
Dense linear algebra for small bipartite density matrices.

All routines work on plain ``numpy`` arrays.  Subsystem dimensions are
passed as a ``(dim_a, dim_b)`` pair; index ordering is the usual
``kron`` ordering, i.e. the basis state ``|i>_A |j>_B`` sits at row
``i * dim_b + j``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import NotHermitianError

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def max_asymmetry(m):
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def check_hermitian(m, tol=HERMITIAN_TOL):
    """Raise :class:`NotHermitianError` unless ``m`` is Hermitian.

    The tolerance is elementwise and scaled by ``max(1, max|m_ij|)``.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    asym = max_asymmetry(m)
    if asym > tol * scale:
        raise NotHermitianError(asym, tol * scale)


def hermitian_eig(m, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues come out ascending.  Each eigenvector's phase is fixed by
    making its largest-magnitude component real and positive, so identical
    input always gives identical output.

    Parameters
    ----------
    m : array_like, shape (n, n)
        Hermitian matrix.
    tol : float
        Elementwise Hermiticity tolerance.

    Returns
    -------
    SpectralDecomposition
    """
    m = np.asarray(m, dtype=complex)
    check_hermitian(m, tol)
    # symmetrize so that eigh sees an exactly Hermitian matrix
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    idx = np.argmax(np.abs(v), axis=0)
    pivots = v[idx, np.arange(v.shape[1])]
    v = v * (np.abs(pivots) / pivots)[np.newaxis, :]
    return SpectralDecomposition(w, v)


def kron(a, b):
    return np.kron(np.asarray(a), np.asarray(b))


def _check_dims(rho, dims):
    rho = np.asarray(rho)
    dim_a, dim_b = dims
    if rho.ndim != 2 or rho.shape != (dim_a * dim_b, dim_a * dim_b):
        raise ValueError(
            f"matrix of shape {rho.shape} does not match subsystem dims {dims}"
        )
    return rho, dim_a, dim_b


def partial_transpose(rho, dims, subsystem="A"):
    """Transpose the indices of one subsystem of a bipartite operator."""
    rho, dim_a, dim_b = _check_dims(rho, dims)
    t = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    if subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    elif subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return t.reshape(dim_a * dim_b, dim_a * dim_b)


def partial_trace(rho, dims, keep="A"):
    """Reduced operator on subsystem ``keep``."""
    rho, dim_a, dim_b = _check_dims(rho, dims)
    t = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def is_density_matrix(rho, tol=1e-10):
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if max_asymmetry(rho) > tol:
        return False
    if abs(np.trace(rho) - 1.0) > tol:
        return False
    return bool(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] > -tol)


def negativity(rho, dims):
    """Trace-norm negativity ``||rho^{T_A}||_1 - 1``.

    For two qubits this is twice the magnitude of the single negative
    eigenvalue of the partial transpose.
    """
    rho = np.asarray(rho)
    if not is_density_matrix(rho):
        raise ValueError("negativity requires a valid density matrix")
    pt = partial_transpose(rho, dims, "A")
    ev = np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))
    return max(0.0, float(np.sum(np.abs(ev)) - 1.0))


def min_pt_eigenvalue(rho, dims):
    pt = partial_transpose(rho, dims, "A")
    return float(np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))[0])


def matrix_exp_involution(g, theta, tol=1e-12):
    """``exp(i theta G)`` for an involution ``G`` (``G @ G == I``).

    Uses ``cos(theta) I + i sin(theta) G``, which is exact when ``G^2 = I``.
    """
    g = np.asarray(g, dtype=complex)
    eye = np.eye(g.shape[0])
    if np.max(np.abs(g @ g - eye)) > tol:
        raise ValueError("generator is not an involution (G^2 != I)")
    return np.cos(theta) * eye + 1j * np.sin(theta) * g


# Pauli matrices
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
