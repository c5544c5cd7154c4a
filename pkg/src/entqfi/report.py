"""
Bound records for the command-line front end.

A record bundles, for one family, one entanglement measure and one
parameter point, the effective QFI of the measure, its variance bound,
the QSNR and the measurement budget ``M_delta`` for each requested
relative error.  Sweeps produce one record per grid point and are
written as CSV.

Divergences are reported with ``inf`` and the status ``divergent``;
points where the measure vanishes identically (separable states) are
reported with ``nan`` bounds and the status ``undefined``.
"""
import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import families as fam
from . import gaussian as gs
from .errors import DomainError
from .estimation import QfiResult, m_delta, qfi_matrix
from .families import scalar_bound

FAMILIES = ("schmidt", "orbit", "werner", "horodecki", "twinBeam", "sts")

MEASURES = {
    "schmidt": ("q", "negativity", "linear_entropy"),
    "orbit": ("negativity",),
    "werner": ("negativity",),
    "horodecki": ("lur",),
    "twinBeam": tuple(m.value for m in gs.GaussianMeasure),
    "sts": tuple(m.value for m in gs.GaussianMeasure),
}

# parameter columns written for each family, in CSV order
PARAM_COLUMNS = {
    "schmidt": ("q",),
    "orbit": ("p", "q", "mu"),
    "werner": ("p", "q"),
    "horodecki": ("a",),
    "twinBeam": ("d",),
    "sts": ("r", "Nt", "d", "mu"),
}

# accepted parameter names per family (natural ones plus the measure value)
INPUT_PARAMS = {
    "schmidt": ("q", "eps"),
    "orbit": ("p", "q", "mu", "eps"),
    "werner": ("p", "q", "eps"),
    "horodecki": ("a", "eps"),
    "twinBeam": ("d", "eps"),
    "sts": ("r", "Nt", "d", "mu", "eps"),
}

GRAD_ZERO_TOL = 1e-12


def canonical_family(name):
    for f in FAMILIES:
        if f.lower() == str(name).lower():
            return f
    raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")


def canonical_measure(family, name):
    allowed = MEASURES[family]
    if name is None:
        return allowed[0]
    name = str(name).lower()
    if name not in allowed:
        raise ValueError(f"measure {name!r} not available for {family}; choose from {', '.join(allowed)}")
    return name


@dataclass
class BoundRecord:
    family: str
    measure: str
    branch: str
    params: dict
    eps: float
    H: float
    var_bound: float
    qsnr: float
    m_delta: dict = field(default_factory=dict)
    singular: bool = False
    status: str = "ok"

    def columns(self):
        cols = ["family", "measure", "branch", *self.params, "eps", "H", "varBound", "Q"]
        cols += [f"Mdelta_{float(d)!r}" for d in self.m_delta]
        return cols + ["singular", "status"]

    def values(self):
        vals = [self.family, self.measure, self.branch]
        vals += [fmt(v) for v in self.params.values()]
        vals += [fmt(self.eps), fmt(self.H), fmt(self.var_bound), fmt(self.qsnr)]
        vals += [fmt(v) for v in self.m_delta.values()]
        return vals + ["true" if self.singular else "false", self.status]

    def lines(self):
        """``key=value`` lines, one per column."""
        return [f"{k}={v}" for k, v in zip(self.columns(), self.values())]


def fmt(x):
    """Round-trip float formatting (17 significant digits, ``inf``/``nan`` literal)."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _finish(family, measure, branch, params, eps, var, deltas, singular=False):
    """Build a record from the measure value and its variance bound."""
    h = math.inf if var == 0 else 1 / var
    if eps == 0:
        q = 0.0
    else:
        q = math.inf if var == 0 else eps * eps / var
    md = {d: m_delta(q, d) for d in deltas}
    divergent = any(math.isinf(v) for v in (h, q, *md.values()))
    return BoundRecord(family, measure, branch, params, eps, h, var, q, md,
                       singular, "divergent" if divergent else "ok")


def _undefined(family, measure, branch, params, deltas):
    md = {d: math.inf for d in deltas}
    return BoundRecord(family, measure, branch, params, 0.0, math.nan, math.nan, math.nan,
                       md, False, "undefined")


def _only(params, allowed, family):
    extra = set(params) - set(allowed)
    if extra:
        name = sorted(extra)[0]
        raise DomainError(name, params[name], f"parameter {name!r} not used by family {family}")


def _need(params, *names):
    missing = [n for n in names if n not in params]
    if missing:
        raise DomainError(missing[0], None, f"missing parameter {missing[0]!r}")
    return [float(params[n]) for n in names]


def _branch_of(x, pivot, requested):
    natural = fam.Branch.LOWER if x <= pivot else fam.Branch.UPPER
    if requested is not None and fam.Branch(requested) is not natural and x != pivot:
        raise DomainError("branch", requested, f"point lies on the {natural.value} branch")
    return natural


def _schmidt(measure, params, branch, deltas):
    if measure == "q":
        (q,) = _need(params, "q")
        fam._check_unit("q", q, closed=False)
        h = qfi_matrix(fam.schmidt_family(), [q])
        return _finish("schmidt", measure, "", {"q": q}, q, scalar_bound(h, [1.0]), deltas, h.singular)
    if "eps" in params:
        (eps,) = _need(params, "eps")
        if not 0 < eps <= 1:
            raise DomainError("eps", eps, f"measure value {eps} outside (0, 1]")
        q, _ = fam.schmidt_q_from_measure(measure, eps, branch or fam.Branch.LOWER)
    else:
        (q,) = _need(params, "q")
    fam._check_unit("q", q, closed=False)
    b = _branch_of(q, 0.5, branch)
    if measure == "negativity":
        eps = fam.schmidt_negativity(q)
        grad = (1 - 2 * q) / math.sqrt(q * (1 - q))
    else:
        eps = fam.schmidt_linear_entropy(q)
        grad = 4 * (1 - 2 * q)
    h = qfi_matrix(fam.schmidt_family(), [q])
    return _finish("schmidt", measure, b.value, {"q": q}, eps, scalar_bound(h, [grad]), deltas, h.singular)


def _orbit(measure, params, branch, deltas):
    if "mu" in params or "eps" in params:
        mu, eps = _need(params, "mu", "eps")
        p, q = fam.orbit_params(mu, eps)
    else:
        p, q = _need(params, "p", "q")
    fam._check_unit("p", p, closed=False)
    fam._check_unit("q", q, closed=False)
    mu = fam.OrbitMixture(p, q).purity
    cols = {"p": p, "q": q, "mu": mu}
    eps = fam.orbit_negativity(p, q)
    if eps == 0:
        return _undefined("orbit", measure, "", cols, deltas)
    s = math.sqrt(q * (1 - q))
    sign = math.copysign(1.0, 1 - 2 * p)
    grad = [-4 * s * sign, abs(1 - 2 * p) * (1 - 2 * q) / s]
    h = qfi_matrix(fam.orbit_family(), [p, q])
    return _finish("orbit", measure, "", cols, eps, scalar_bound(h, grad), deltas, h.singular)


def _werner(measure, params, branch, deltas):
    if "eps" in params:
        if "p" in params and "q" in params:
            raise DomainError("eps", params["eps"], "give eps with exactly one of p, q")
        if "q" in params:
            eps, q = _need(params, "eps", "q")
            fam._check_unit("q", q, closed=False)
            p = fam.werner_p_from_negativity(eps, q)
        else:
            eps, p = _need(params, "eps", "p")
            fam._check_unit("p", p)
            q = fam.werner_q_from_negativity(eps, p)
    else:
        p, q = _need(params, "p", "q")
    fam._check_unit("p", p)
    fam._check_unit("q", q, closed=False)
    if not p > 0:
        raise DomainError("p", p)
    cols = {"p": p, "q": q}
    eps = fam.werner_negativity(p, q)
    if eps == 0:
        return _undefined("werner", measure, "", cols, deltas)
    grad = fam.werner_negativity_grad(p, q)
    if p == 1:
        # the p-direction carries infinite information at the pure edge, so
        # only the q-direction (pure-state QFI) contributes to the bound
        h = qfi_matrix(fam.schmidt_family(), [q])
        return _finish("werner", measure, "", cols, eps, scalar_bound(h, grad[1:]), deltas, h.singular)
    h = qfi_matrix(fam.werner_family(), [p, q])
    return _finish("werner", measure, "", cols, eps, scalar_bound(h, grad), deltas, h.singular)


def _horodecki(measure, params, branch, deltas):
    if "eps" in params:
        (eps,) = _need(params, "eps")
        a = fam.a_from_lur(eps, branch or fam.Branch.LOWER)
    else:
        (a,) = _need(params, "a")
    fam._check_unit("a", a)
    b = _branch_of(a, fam.LUR_ARGMAX, branch)
    eps = fam.lur_violation(a)
    grad = 0.0 if abs(a - fam.LUR_ARGMAX) < GRAD_ZERO_TOL else fam.lur_violation_derivative(a)
    h = qfi_matrix(fam.horodecki_family(), [a])
    return _finish("horodecki", measure, b.value, {"a": a}, eps, scalar_bound(h, [grad]), deltas, h.singular)


def _twin_beam(measure, params, branch, deltas):
    if "eps" in params:
        (eps,) = _need(params, "eps")
        d, _ = gs.gaussian_measure_inverse(measure, eps)
    else:
        (d,) = _need(params, "d")
    if not 0 < d <= 0.5:
        raise DomainError("d", d, f"twin beam needs d in (0, 1/2], got {d}")
    h_d = gs.wick_qfi_pure(d, gs.GaussianMeasure.DTILDE)
    grad = gs.gaussian_measure_derivative(measure, d)
    res = QfiResult.from_matrix([[h_d]], ("d",))
    eps = gs.gaussian_measure(measure, d)
    return _finish("twinBeam", measure, "", {"d": d}, eps, scalar_bound(res, [grad]), deltas)


def _sts(measure, params, branch, deltas):
    if "r" in params or "Nt" in params:
        r, n_th = _need(params, "r", "Nt")
        if not r > 0:
            raise DomainError("r", r)
        if not n_th > 0:
            raise DomainError("Nt", n_th)
        d, mu = gs.sts_d_mu(r, n_th)
    else:
        if "eps" in params:
            eps, mu = _need(params, "eps", "mu")
            d, _ = gs.gaussian_measure_inverse(measure, eps)
        else:
            d, mu = _need(params, "d", "mu")
        r, n_th = gs.sts_params(d, mu)
    cols = {"r": r, "Nt": n_th, "d": d, "mu": mu}
    if measure != "dtilde" and d >= 0.5:
        return _undefined("sts", measure, "", cols, deltas)
    res = gs.sts_qfi_d_mu(d, mu)
    grad = [gs.gaussian_measure_derivative(measure, d), 0.0]
    eps = gs.gaussian_measure(measure, d)
    return _finish("sts", measure, "", cols, eps, scalar_bound(res, grad), deltas, res.singular)


_EVALUATORS = {
    "schmidt": _schmidt,
    "orbit": _orbit,
    "werner": _werner,
    "horodecki": _horodecki,
    "twinBeam": _twin_beam,
    "sts": _sts,
}


def evaluate(family, measure, params, branch=None, deltas=(0.1,)):
    """Bound record for one parameter point.

    Parameters
    ----------
    family : str
        One of :data:`FAMILIES` (case-insensitive).
    measure : str or None
        Entanglement measure (or ``q``/``dtilde`` for the natural
        parameter); ``None`` selects the family default.
    params : dict
        Parameter assignments.  Either the natural parameters or the
        measure value ``eps`` together with the complementary parameter.
    branch : {'lower', 'upper'}, optional
        Branch of a non-monotone measure (Schmidt, Horodecki).
    deltas : sequence of float
        Relative errors for the measurement budget.

    Raises
    ------
    DomainError
        If a parameter is missing, unused or out of range.
    """
    family = canonical_family(family)
    measure = canonical_measure(family, measure)
    params = dict(params)
    _only(params, INPUT_PARAMS[family], family)
    for d in deltas:
        if not d > 0:
            raise DomainError("delta", d, f"relative error must be positive, got {d}")
    if branch is not None:
        branch = fam.Branch(branch)
    rec = _EVALUATORS[family](measure, params, branch, tuple(deltas))
    rec.params = {k: float(rec.params[k]) for k in PARAM_COLUMNS[family]}
    return rec


def sweep_grid(lo, hi, steps):
    if steps < 2:
        raise ValueError(f"sweep needs at least 2 steps, got {steps}")
    if not lo < hi:
        raise ValueError(f"sweep needs lo < hi, got {lo}:{hi}")
    return np.linspace(lo, hi, steps)


def sweep(family, measure, params, name, lo, hi, steps, branch=None, deltas=(0.1,)):
    """Records over a linear grid of parameter ``name``, in grid order."""
    records = []
    for x in sweep_grid(lo, hi, steps):
        point = dict(params)
        point[name] = float(x)
        records.append(evaluate(family, measure, point, branch, deltas))
    return records


def write_csv(records, stream):
    """Write records as CSV with a header row."""
    writer = csv.writer(stream, lineterminator="\n")
    if not records:
        return
    writer.writerow(records[0].columns())
    for rec in records:
        writer.writerow(rec.values())
