"""onofri-lab command line.

Usage:
    onofri-lab deficit --family conformal --c2 2 --lambda 1
    onofri-lab deficit --expr "0" --geometry sphere
    onofri-lab flow rigidity --family zlinear --lambda 1 --T 10
    onofri-lab flow fd --m 0.5 --family barenblatt
    onofri-lab sweep gn --p 10,20,40,80 --family bump
    onofri-lab transport --family neutral-bump --R 5,10,20
    onofri-lab constants
    onofri-lab selftest --quick

Exit status: 0 on success, 2 on a configuration error, 1 on a numerical failure.
Reports go to --output (written atomically) or to stdout.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__, families, limits, selftest
from .errors import (
    ExprDomainError,
    ExprSyntaxError,
    FlowError,
    GeometryError,
    GridError,
    InadmissibleInput,
    MeanNonzeroError,
    OnofriLabError,
    OverflowRisk,
    TransportError,
)
from .flows import mass_neutral, run_fast_diffusion, run_log_diffusion, run_rigidity_flow
from .functionals import (
    barenblatt,
    duality_decomposition,
    g_lambda_sym,
    normalize_sym,
    onofri_deficit,
)
from .numcore import Field, Geometry, make_grid, to_cylinder, to_euclidean, to_sphere
from .transport import transport_deficit_check

REPORT_VERSION = "onofri-lab/report/v1"
MAX_N = 4096


class ConfigError(OnofriLabError):
    """Invalid command-line configuration, detected before any computation."""


CONFIG_ERRORS = (ConfigError, ExprSyntaxError, ExprDomainError, GeometryError, GridError,
                 InadmissibleInput, ValueError)
NUMERICAL_ERRORS = (FlowError, TransportError, OverflowRisk, MeanNonzeroError,
                    FloatingPointError, OnofriLabError)

_CONVERT = {
    Geometry.SPHERE: to_sphere,
    Geometry.EUCLIDEAN: to_euclidean,
    Geometry.CYLINDER: to_cylinder,
}

_FAMILY_PARAMS = ("amp", "width", "c2", "c1", "eps", "shift", "c", "degree", "center", "D")


# -- argument parsing ---------------------------------------------------------------

def float_list(text):
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values or not all(math.isfinite(v) for v in values):
        raise argparse.ArgumentTypeError(f"expected finite numbers, got {text!r}")
    return values


def _common(parser, family="bump"):
    parser.add_argument("--n", type=int, default=128, help="Legendre grid size")
    parser.add_argument("--seed", type=int, default=0)
    src = parser.add_mutually_exclusive_group()
    src.add_argument("--family", choices=families.FAMILIES, default=family)
    src.add_argument("--expr", help='expression in the native coordinate, e.g. "0.3*z"')
    parser.add_argument("--geometry", choices=[g.value for g in Geometry],
                        help="geometry of the test function (default depends on the command)")
    parser.add_argument("--amp", type=float)
    parser.add_argument("--width", type=float)
    parser.add_argument("--c2", type=float)
    parser.add_argument("--c1", type=float)
    parser.add_argument("--eps", type=float, help="slope of the zlinear family")
    parser.add_argument("--shift", type=float)
    parser.add_argument("--c", type=float, help="value of the constant family")
    parser.add_argument("--degree", type=int)
    parser.add_argument("--center", type=float)
    parser.add_argument("--D", type=float)
    parser.add_argument("--lambda", dest="lam", type=float, default=1.0)
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--output", "-o", default="-")


def build_parser():
    parser = argparse.ArgumentParser(prog="onofri-lab", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("deficit", help="deficit in every form plus the duality split")
    _common(p)

    p = sub.add_parser("flow", help="run a gradient flow and write its trace")
    p.add_argument("kind", choices=("rigidity", "fd", "log"))
    _common(p, family="zlinear")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--m", type=float, default=0.5, help="fast-diffusion exponent in [1/2, 1)")

    p = sub.add_parser("sweep", help="approach Onofri through a family of inequalities")
    p.add_argument("name", choices=tuple(limits.SWEEPS) + ("linearization",))
    _common(p)
    p.add_argument("--values", "--p", "--t", "--d", dest="values", type=float_list,
                   help="sweep parameters (p, t, d or eps depending on the sweep)")
    p.add_argument("--alpha", type=float, default=-0.5, help="CKN weight exponent")
    p.add_argument("--c-values", type=float_list, default=[0.5, 1.0, 2.0],
                   help="constants c of the linearization family eps z + c")

    p = sub.add_parser("transport", help="radial transport proof on balls B_R")
    _common(p, family="neutral-bump")
    p.add_argument("--R", type=float_list, default=[5.0, 10.0, 20.0])
    p.add_argument("--nodes", type=int, default=200, help="transport grid size")

    p = sub.add_parser("constants", help="closed-form constants against quadrature")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default="-")

    p = sub.add_parser("selftest", help="run the invariant suite")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default="-")
    return parser


DEFAULT_SWEEP_VALUES = {
    "beckner": [10.0, 20.0, 40.0, 80.0],
    "gn": [10.0, 20.0, 40.0, 80.0],
    "sobolev": [1.9, 1.95, 1.975, 1.9875],
    "radial-d": [2.2, 2.1, 2.05, 2.025],
    "ckn": [0.2, 0.1, 0.05, 0.025],
    "line": [10.0, 20.0, 40.0, 80.0],
    "linearization": [0.01, 0.05, 0.1, 0.5, 1.0],
}

SWEEP_GEOMETRY = {
    "beckner": Geometry.SPHERE,
    "gn": Geometry.EUCLIDEAN,
    "sobolev": Geometry.EUCLIDEAN,
    "radial-d": Geometry.EUCLIDEAN,
    "ckn": Geometry.EUCLIDEAN,
    "line": Geometry.CYLINDER,
    "linearization": Geometry.SPHERE,
}


def validate(args):
    """Reject bad numbers before anything is computed."""
    if hasattr(args, "n") and not 8 <= args.n <= MAX_N:
        raise ConfigError(f"--n must lie in [8, {MAX_N}], got {args.n}")
    for name in ("T", "dt", "tol", "width", "lam"):
        val = getattr(args, name, None)
        if val is not None and not (math.isfinite(val) and val > 0):
            raise ConfigError(f"--{'lambda' if name == 'lam' else name} must be positive, got {val}")
    for name in _FAMILY_PARAMS + ("m", "alpha"):
        val = getattr(args, name, None)
        if val is not None and not math.isfinite(val):
            raise ConfigError(f"--{name} must be finite")
    if getattr(args, "samples", 1) < 1:
        raise ConfigError("--samples must be at least 1")
    if getattr(args, "command", None) == "flow" and args.kind == "fd" and not 0.5 <= args.m < 1.0:
        raise ConfigError(f"--m must lie in [1/2, 1), got {args.m}")
    if getattr(args, "command", None) == "transport":
        if any(r <= 0 for r in args.R):
            raise ConfigError("--R values must be positive")
        if args.nodes < 8:
            raise ConfigError("--nodes must be at least 8")


# -- test function --------------------------------------------------------------------

def build_field(args, default_geometry):
    grid = make_grid(args.n)
    geometry = Geometry(args.geometry) if args.geometry else default_geometry
    if args.expr is not None:
        return families.from_expr(grid, args.expr, geometry)
    params = {k: getattr(args, k) for k in _FAMILY_PARAMS if getattr(args, k, None) is not None}
    rng = np.random.default_rng(args.seed)
    field = families.build(args.family, grid, None, rng, **params)
    return _CONVERT[geometry](field)


# -- output ---------------------------------------------------------------------------

def write_output(text, path):
    """Write to stdout, or atomically to a file (never a partial file)."""
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".onofri-lab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_num(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {k: _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    return x


def _json(doc):
    return json.dumps(_num(doc), indent=2, sort_keys=True) + "\n"


def _header(meta):
    return "# " + " ".join([REPORT_VERSION] + [f"{k}={v}" for k, v in meta.items()]) + "\n"


def _kv_csv(meta, rows):
    """CSV of (section, name, value) rows."""
    buf = io.StringIO()
    buf.write(_header(meta))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("section", "name", "value"))
    for section, name, value in rows:
        writer.writerow((section, name, repr(float(value))))
    return buf.getvalue()


def _source(args):
    return f"expr:{args.expr}" if args.expr is not None else args.family


# -- commands -------------------------------------------------------------------------

def cmd_deficit(args):
    u = build_field(args, Geometry.SPHERE)
    forms = {g.value: onofri_deficit(_CONVERT[g](u)) for g in Geometry}
    sphere = to_sphere(u)
    g_lam = g_lambda_sym(sphere, args.lam)
    dual = duality_decomposition(sphere)
    meta = {"command": "deficit", "source": _source(args), "geometry": u.geometry.value,
            "n": args.n, "lambda": args.lam}
    if args.format == "json":
        return _json({"meta": meta, "forms": {k: v.as_dict() for k, v in forms.items()},
                      "g_lambda": g_lam.as_dict(), "duality": dual.as_dict()})
    rows = []
    for name, rep in forms.items():
        rows += [(name, k, getattr(rep, k)) for k in ("kinetic", "linear", "logterm", "deficit")]
    rows += [("g_lambda", k, getattr(g_lam, k)) for k in ("kinetic", "linear", "logterm", "deficit")]
    rows += [("duality", k, v) for k, v in dual.as_dict().items()]
    return _kv_csv(meta, rows)


def _flow_trace(args):
    if args.kind == "rigidity":
        f0 = normalize_sym(to_sphere(build_field(args, Geometry.SPHERE)))
        return run_rigidity_flow(f0, args.lam, args.T, args.dt, args.samples, args.tol)
    if args.kind == "log":
        u = to_sphere(build_field(args, Geometry.SPHERE))
        u = u.shift(-2.0 * np.log(0.5 * u.grid.quad(np.exp(0.5 * u.values))))
        return run_log_diffusion(u, args.T, args.dt, args.samples, args.tol)
    field = to_euclidean(build_field(args, Geometry.EUCLIDEAN))
    if args.expr is None and args.family == "barenblatt":
        # the family already is a density
        v0 = field
    else:
        # the field is a perturbation u of the Barenblatt profile with D = 1
        u = mass_neutral(field)
        r = np.sqrt((1.0 + u.grid.z) / (1.0 - u.grid.z))
        v0 = u.with_values(np.exp(u.values) * barenblatt(r, 1.0, args.m))
    return run_fast_diffusion(v0, args.m, args.T, args.dt, args.samples, args.tol)


def cmd_flow(args):
    trace = _flow_trace(args)
    meta = {"command": f"flow-{args.kind}", "source": _source(args), "n": args.n,
            "lambda": args.lam, "T": args.T, "dt": args.dt}
    if args.kind == "fd":
        meta["m"] = args.m
    meta.update({k: v for k, v in trace.stats.items()})
    meta["integral_of_dissipation"] = repr(trace.integral_of_dissipation)
    if args.format == "json":
        doc = {"meta": meta, **{k: list(v) for k, v in trace.arrays().items()},
               "extras": trace.extras}
        return _json(doc)
    return trace.to_csv(meta)


def cmd_sweep(args):
    u = build_field(args, SWEEP_GEOMETRY[args.name])
    u = _CONVERT[SWEEP_GEOMETRY[args.name]](u)
    values = args.values or DEFAULT_SWEEP_VALUES[args.name]
    if args.name == "linearization":
        res = limits.linearization_suite(u.grid, args.lam, values, args.c_values)
    elif args.name == "ckn":
        res = limits.ckn_limit(u, args.alpha, values)
    else:
        res = limits.SWEEPS[args.name](u, values)
    return res.to_json() + "\n" if args.format == "json" else res.to_csv()


TRANSPORT_COLUMNS = ("R", "Z_R", "normalization_shift", "monge_ampere_residual",
                     "push_forward_error", "amgm_pointwise", "amgm", "cauchy_schwarz", "final",
                     "deficit", "boundary_term", "boundary_term_error", "limit_display_error")


def cmd_transport(args):
    u = to_euclidean(build_field(args, Geometry.EUCLIDEAN))
    reports = [transport_deficit_check(u, R, args.nodes) for R in args.R]
    meta = {"command": "transport", "source": _source(args), "n": args.n, "nodes": args.nodes}
    if args.format == "json":
        return _json({"meta": meta, "reports": [r.to_dict() for r in reports]})
    buf = io.StringIO()
    buf.write(_header(meta))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRANSPORT_COLUMNS)
    for rep in reports:
        flat = dict(rep.slacks, R=rep.R, Z_R=rep.Z_R,
                    normalization_shift=rep.normalization_shift,
                    monge_ampere_residual=rep.monge_ampere_residual,
                    push_forward_error=rep.push_forward_error,
                    boundary_term=rep.boundary_term,
                    boundary_term_error=rep.boundary_term_error,
                    limit_display_error=rep.limit_display_error)
        writer.writerow([repr(float(flat[c])) for c in TRANSPORT_COLUMNS])
    return buf.getvalue()


def cmd_constants(args):
    table = limits.constants_table()
    if args.format == "json":
        return _json({"meta": {"command": "constants"}, "constants": table.rows(), "ok": table.ok})
    buf = io.StringIO()
    buf.write(_header({"command": "constants"}))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("name", "closed_form", "quadrature", "rel_error", "tolerance", "ok"))
    for row in table.rows():
        writer.writerow((row["name"], repr(float(row["closed_form"])), repr(float(row["quadrature"])),
                         repr(float(row["rel_error"])), repr(row["tolerance"]), row["ok"]))
    return buf.getvalue()


def cmd_selftest(args):
    checks = selftest.run_checks(args.seed, args.quick)
    failed = [c.name for c in checks if not c.passed]
    print(f"selftest: {len(checks) - len(failed)}/{len(checks)} passed"
          + (f"; failed: {', '.join(failed)}" if failed else ""), file=sys.stderr)
    return selftest.render(checks, args.format, args.seed, args.quick), (1 if failed else 0)


COMMANDS = {
    "deficit": cmd_deficit,
    "flow": cmd_flow,
    "sweep": cmd_sweep,
    "transport": cmd_transport,
    "constants": cmd_constants,
    "selftest": cmd_selftest,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        validate(args)
    except ConfigError as exc:
        print(f"onofri-lab: error: {exc}", file=sys.stderr)
        return 2
    try:
        with np.errstate(over="raise", invalid="raise", divide="raise"):
            out = COMMANDS[args.command](args)
    except CONFIG_ERRORS as exc:
        print(f"onofri-lab: error: {exc}", file=sys.stderr)
        return 2
    except NUMERICAL_ERRORS as exc:
        print(f"onofri-lab: numerical failure: {exc}", file=sys.stderr)
        return 1
    code = 0
    if isinstance(out, tuple):
        out, code = out
    write_output(out, args.output)
    return code
