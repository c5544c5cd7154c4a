"""
Entanglement estimation for two-mode Gaussian states.

Everything is driven by the smallest symplectic eigenvalue ``d`` of the
partially transposed covariance matrix.  For the pure twin beam the QFI
of ``d`` is ``1/d^2``, so ``d`` itself has Q = 1 at every point.  The
log-negativity has H = 1.  For squeezed thermal states the bound on
``d`` is still ``d^2``, whatever the purity.

Run with ``python3 demos/gaussian_states.py``.
"""
import numpy as np

from entqfi import fock
from entqfi import gaussian as gs

# %% Twin beam: phase-space (Wick) route against the number basis.
print("twin beam, QFI per measure")
print(f"{'d':>6} {'dtilde':>10} {'log_neg':>8} {'lin_ent':>10} {'eps_s':>8} {'eps_b':>10}")
for d in (0.05, 0.15, 0.3, 0.45):
    row = [gs.twin_beam_qfi_closed(m, gs.gaussian_measure(m, d))
           for m in ("dtilde", "log_negativity", "linear_entropy", "eps_s", "eps_b")]
    print(f"{d:6.2f} " + " ".join(f"{h:10.4g}" for h in row))

eps = 1.2
wick = gs.wick_qfi_pure(eps, "log_negativity")
number_basis = fock.twin_beam_fock(eps).H
print(f"\nlog-negativity {eps}: Wick {wick:.12f}, Fock {number_basis:.12f}")

# %% Squeezed thermal states.  The QFI matrix in (r, Nt) is diagonal and
# independent of r in its Nt entry.
r, n_th = 0.6, 0.3
closed = gs.sts_qfi_matrix(r, n_th).H
numeric = fock.sts_fock_qfi(r, n_th).H
print(f"\nsqueezed thermal at r={r}, Nt={n_th}")
print("closed form\n", np.round(closed, 10))
print("number basis\n", np.round(numeric, 10))

d, mu = gs.sts_d_mu(r, n_th)
print(f"d = {d:.4f}, seed purity mu = {mu:.4f}, Var(d) >= {gs.sts_qfi_d_mu(d, mu).Hinv[0, 0]:.6f}"
      f" (d^2 = {d * d:.6f})")

# %% Bounds for two measures at several purities: identical, since the
# purity drops out of the d bound.
print("\nVar bounds at eps = 0.3")
for mu in (0.3, 0.6, 0.9):
    s = gs.sts_bounds("eps_s", 0.3, mu)
    b = gs.sts_bounds("eps_b", 0.3, mu)
    print(f"  mu={mu:.1f}: eps_s {s.var_bound:.5f} (Q {s.qsnr:.4f}), "
          f"eps_b {b.var_bound:.5f} (Q {b.qsnr:.4f})")
