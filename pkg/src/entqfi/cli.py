"""
Command-line front end.

Subcommands::

    entqfi bound    --family schmidt --measure negativity --param eps=0.6
    entqfi sweep    --family werner --param q=0.5 --sweep eps:0.01:1:50 --out werner.csv
    entqfi verify
    entqfi simulate --family schmidt --param q=0.5 --samples 100000 --seed 7

A ``--config`` file holds flat ``key = value`` lines (``#`` starts a
comment).  Keys are the long flag names (``family``, ``measure``,
``branch``, ``sweep``, ``delta``, ``samples``, ``seed``, ``out``);
any other key is a parameter assignment.  Repeatable keys take
comma-separated lists.  Flags given on the command line win.

Exit codes: 0 success, 1 validation error, 2 verification failure.
"""
import argparse
import contextlib
import csv
import sys

import numpy as np

from . import report, verify
from .errors import DomainError
from .estimation import m_delta, qfi_matrix, simulate_crb
from .families import horodecki_family, schmidt_family
from .report import fmt

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY_FAILED = 2

CONFIG_KEYS = ("family", "measure", "branch", "sweep", "delta", "samples", "seed", "out")

# families with a single natural parameter, usable by ``simulate``
SCALAR_FAMILIES = {"schmidt": (schmidt_family, "q"), "horodecki": (horodecki_family, "a")}

DEFAULT_SAMPLES = (1000, 10000, 100000)


class UsageError(ValueError):
    pass


def parse_assignment(text):
    if "=" not in text:
        raise UsageError(f"expected name=value, got {text!r}")
    name, value = (s.strip() for s in text.split("=", 1))
    try:
        return name, float(value)
    except ValueError:
        raise UsageError(f"parameter {name!r} needs a number, got {value!r}") from None


def parse_sweep(text):
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"sweep must be name:lo:hi:steps, got {text!r}")
    name, lo, hi, steps = parts
    try:
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise UsageError(f"malformed sweep {text!r}") from None
    if steps < 2:
        raise UsageError(f"sweep needs at least 2 steps, got {steps}")
    if not lo < hi:
        raise UsageError(f"sweep needs lo < hi, got {lo} and {hi}")
    return name.strip(), lo, hi, steps


def read_config(path):
    """Parse a flat ``key = value`` file into settings and parameters."""
    settings, params = {}, {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key in CONFIG_KEYS:
                settings[key] = value
            else:
                params[key] = parse_assignment(f"{key}={value}")[1]
    return settings, params


def _list(value, cast):
    return [cast(v) for v in str(value).split(",") if v.strip()]


def build_config(args):
    """Merge the config file (if any) with command-line flags; flags win."""
    settings, params = read_config(args.config) if args.config else ({}, {})
    for text in args.param or []:
        name, value = parse_assignment(text)
        params[name] = value
    cfg = {
        "family": args.family or settings.get("family"),
        "measure": args.measure or settings.get("measure"),
        "branch": args.branch or settings.get("branch"),
        "out": args.out or settings.get("out"),
        "params": params,
    }
    sweep = getattr(args, "sweep", None) or settings.get("sweep")
    cfg["sweep"] = parse_sweep(sweep) if sweep else None
    if args.delta:
        cfg["deltas"] = list(args.delta)
    elif "delta" in settings:
        cfg["deltas"] = _list(settings["delta"], float)
    else:
        cfg["deltas"] = [0.1]
    seed = args.seed if args.seed is not None else settings.get("seed")
    cfg["seed"] = int(seed) if seed is not None else None
    samples = getattr(args, "samples", None)
    if samples:
        cfg["samples"] = list(samples)
    elif "samples" in settings:
        cfg["samples"] = _list(settings["samples"], int)
    else:
        cfg["samples"] = list(DEFAULT_SAMPLES)
    return cfg


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _require_family(cfg):
    if not cfg["family"]:
        raise UsageError("--family is required")
    return report.canonical_family(cfg["family"])


def cmd_bound(cfg):
    family = _require_family(cfg)
    rec = report.evaluate(family, cfg["measure"], cfg["params"], cfg["branch"], cfg["deltas"])
    with _output(cfg["out"]) as out:
        out.write("\n".join(rec.lines()) + "\n")
    return EXIT_OK


def cmd_sweep(cfg):
    family = _require_family(cfg)
    if cfg["sweep"] is None:
        raise UsageError("--sweep name:lo:hi:steps is required")
    name, lo, hi, steps = cfg["sweep"]
    # evaluate every point before touching the output file
    records = report.sweep(family, cfg["measure"], cfg["params"], name, lo, hi, steps,
                           cfg["branch"], cfg["deltas"])
    with _output(cfg["out"]) as out:
        report.write_csv(records, out)
    return EXIT_OK


def cmd_verify(cfg):
    seed = verify.DEFAULT_SEED if cfg["seed"] is None else cfg["seed"]
    results = verify.run(seed=seed)
    with _output(cfg["out"]) as out:
        out.write(verify.format_report(results))
    return EXIT_OK if verify.all_passed(results) else EXIT_VERIFY_FAILED


def simulate_rows(family_id, params, samples, seed, deltas):
    """One Monte Carlo run per sample size; row ``i`` uses the stream ``(seed, i)``."""
    make, name = SCALAR_FAMILIES[family_id]
    extra = set(params) - {name}
    if extra:
        bad = sorted(extra)[0]
        raise DomainError(bad, params[bad], f"parameter {bad!r} not used by family {family_id}")
    if name not in params:
        raise DomainError(name, None, f"missing parameter {name!r}")
    x = params[name]
    family = make()
    h = float(qfi_matrix(family, [x]).H[0, 0])
    q = x * x * h
    rows = []
    for i, m in enumerate(samples):
        res = simulate_crb(family, [x], 0, m, np.random.SeedSequence([seed, i]))
        row = {"M": m, "mean": res.mean, "bias": res.bias, "empiricalVar": res.empirical_var,
               "crb": res.crb, "ratio": res.ratio, "H": h, "Q": q}
        for d in deltas:
            row[f"Mdelta_{float(d)!r}"] = m_delta(q, d)
        rows.append(row)
    return rows


def cmd_simulate(cfg):
    family = _require_family(cfg)
    if family not in SCALAR_FAMILIES:
        raise UsageError(f"simulate needs a scalar-parameter family ({', '.join(SCALAR_FAMILIES)})")
    seed = 0 if cfg["seed"] is None else cfg["seed"]
    rows = simulate_rows(family, cfg["params"], cfg["samples"], seed, cfg["deltas"])
    with _output(cfg["out"]) as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow([fmt(v) for v in row.values()])
    return EXIT_OK


COMMANDS = {"bound": cmd_bound, "sweep": cmd_sweep, "verify": cmd_verify, "simulate": cmd_simulate}


class _Parser(argparse.ArgumentParser):
    # usage errors are validation errors (exit 1); 2 is reserved for verify

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(
        prog="entqfi", description="Quantum Cramer-Rao bounds for entanglement estimation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--family", help=", ".join(report.FAMILIES))
        p.add_argument("--measure", help="entanglement measure (family default if omitted)")
        p.add_argument("--param", action="append", metavar="NAME=VALUE",
                       help="parameter assignment (repeatable)")
        p.add_argument("--delta", action="append", type=float, metavar="VALUE",
                       help="relative error for M_delta (repeatable, default 0.1)")
        p.add_argument("--branch", choices=["lower", "upper"])
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--seed", type=int)

    common(sub.add_parser("bound", help="bounds at a single parameter point"))
    p_sweep = sub.add_parser("sweep", help="bounds over a parameter grid, as CSV")
    common(p_sweep)
    p_sweep.add_argument("--sweep", metavar="NAME:LO:HI:STEPS")
    common(sub.add_parser("verify", help="run the regression catalogue"))
    p_sim = sub.add_parser("simulate", help="Monte Carlo variance vs Cramer-Rao bound, as CSV")
    common(p_sim)
    p_sim.add_argument("--samples", action="append", type=int, metavar="M",
                       help="repetitions per run (repeatable)")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg)
    except DomainError as exc:
        print(f"entqfi: invalid parameter {exc.param}: {exc}", file=sys.stderr)
    except (UsageError, ValueError, OSError) as exc:
        print(f"entqfi: {exc}", file=sys.stderr)
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
