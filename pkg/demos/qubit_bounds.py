"""
How well can the entanglement of a two-qubit state be estimated?

Walks through the pure Schmidt family, the unitary-orbit mixture and the
Werner-like mixture, printing variance bounds, the quantum signal-to-noise
ratio Q and the number of runs M_delta needed for a 10% relative error.
Finishes with a Monte Carlo run of the optimal measurement.

Run with ``python3 demos/qubit_bounds.py``.
"""
import numpy as np

from entqfi import families as fam
from entqfi.estimation import qfi_matrix, simulate_crb
from entqfi.report import evaluate

# %% Pure states: the QFI of the Schmidt weight q is 1/(q(1-q)).
# Trading q for the negativity flattens it to 1/(1 - eps^2): the bound on
# Var(eps) shrinks as the state becomes maximally entangled.
print("pure states, negativity")
print(f"{'eps':>6} {'varBound':>10} {'Q':>10} {'M_0.1':>12}")
for eps in (0.05, 0.2, 0.5, 0.8, 0.95):
    rec = evaluate("schmidt", "negativity", {"eps": eps})
    print(f"{eps:6.2f} {rec.var_bound:10.4f} {rec.qsnr:10.4g} {rec.m_delta[0.1]:12.4g}")

# Weak entanglement is expensive: Q ~ eps^2, so M_delta blows up.
rec = evaluate("schmidt", "linear_entropy", {"eps": 0.01}, "lower")
print(f"\nlinear entropy 0.01 needs about {rec.m_delta[0.1]:.3g} runs for 10% error\n")

# %% Mixed states along a unitary orbit.  At fixed purity mu the bound on
# the negativity is 1 - eps^2, exactly as for pure states.
print("orbit mixture at several purities, eps_N = 0.3")
for mu in (0.6, 0.75, 0.9):
    res = fam.orbit_qfi_mu_eps(mu, 0.3)
    print(f"  mu={mu:.2f}: Var(eps_N) >= {res.var_bounds[1]:.4f}")

# %% Werner-like states.  The QFI matrix in (p, q) is diagonal; the
# negativity bound follows from its gradient.
p, q = 0.8, 0.4
h = qfi_matrix(fam.werner_family(), [p, q])
print(f"\nWerner QFI at p={p}, q={q}:\n{np.round(h.H, 6)}")
grad = fam.werner_negativity_grad(p, q)
eps = fam.werner_negativity(p, q)
var = fam.scalar_bound(h, grad)
print(f"negativity {eps:.4f}, Var >= {var:.4f}, Q = {eps * eps / var:.4f}")

print("\nWerner sweep at q = 1/2")
for eps in np.linspace(0.1, 0.9, 5):
    rec = evaluate("werner", "negativity", {"eps": eps, "q": 0.5})
    print(f"  eps={eps:.2f}  p={rec.params['p']:.4f}  Q={rec.qsnr:.4f}")

# %% The SLD measurement attains the bound: repeat it M times and compare
# the variance of the averaged estimate with 1/(M H).
print("\nMonte Carlo, Schmidt family at q = 0.3")
for m in (1_000, 10_000, 100_000):
    res = simulate_crb(fam.schmidt_family(), [0.3], 0, m, seed=m)
    print(f"  M={m:>7}: var={res.empirical_var:.3e}  crb={res.crb:.3e}  ratio={res.ratio:.3f}")
