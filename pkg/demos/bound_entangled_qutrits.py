"""
Bound entanglement of a two-qutrit family.

The states have a positive partial transpose for every value of ``a``,
so the negativity is blind to their entanglement.  The relative violation
of a local uncertainty relation detects it instead.  It peaks at
``a = 4/13``, which splits the family into two branches.  Near the peak
and near zero violation the number of runs needed diverges.

Run with ``python3 demos/bound_entangled_qutrits.py``.
"""
import numpy as np

from entqfi import families as fam
from entqfi.linalg import min_pt_eigenvalue
from entqfi.report import evaluate

a_grid = np.linspace(0.01, 0.99, 99)
worst = min(min_pt_eigenvalue(fam.horodecki_state(a), fam.QUTRITS) for a in a_grid)
print(f"smallest partial-transpose eigenvalue over the family: {worst:.2e}")
print(f"peak violation {fam.lur_violation(fam.LUR_ARGMAX):.6g} at a = 4/13\n")

# %% M_delta along each branch, parametrized by the violation itself.
print(f"{'eps_U':>10} {'lower a':>9} {'M_0.1':>10} {'upper a':>9} {'M_0.1':>10}")
for frac in (0.01, 0.1, 0.5, 0.9, 0.99):
    eps = frac * fam.LUR_MAX
    lo = evaluate("horodecki", "lur", {"eps": eps}, "lower")
    hi = evaluate("horodecki", "lur", {"eps": eps}, "upper")
    print(f"{eps:10.3e} {lo.params['a']:9.4f} {lo.m_delta[0.1]:10.4g} "
          f"{hi.params['a']:9.4f} {hi.m_delta[0.1]:10.4g}")

# At the peak the violation does not depend on a to first order, so the
# Fisher information for it is infinite and one run suffices in principle.
peak = evaluate("horodecki", "lur", {"a": fam.LUR_ARGMAX})
print(f"\nat the peak: H = {peak.H}, status = {peak.status}")
