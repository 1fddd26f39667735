"""Deterministic invariant suite behind ``onofri-lab selftest``."""

import csv
import io
import json
from dataclasses import asdict, dataclass

import numpy as np

from . import families, limits
from .flows import bakry_emery_remainder, run_fast_diffusion, run_log_diffusion, run_rigidity_flow
from .functionals import (
    duality_decomposition,
    euler_lagrange_residual,
    g_lambda_sym,
    normalize_sym,
    onofri_deficit,
    remainder_R_lambda,
)
from .numcore import Field, Geometry, make_grid, to_cylinder, to_sphere
from .transport import transport_deficit_check

REPORT_VERSION = "onofri-lab/selftest/v1"


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    bound: float
    kind: str  # "max": value <= bound, "min": value >= bound

    @property
    def passed(self):
        if not np.isfinite(self.value):
            return False
        return bool(self.value <= self.bound if self.kind == "max" else self.value >= self.bound)


def _nonnegativity(grid, rng, count):
    worst = np.inf
    for _ in range(count):
        f = families.legendre_poly(grid, rng, 8, 1.0)
        for lam in (0.25, 0.5, 1.0):
            worst = min(worst, g_lambda_sym(f, lam).deficit)
    return worst


def _extremal(grid):
    worst = 0.0
    for c2 in (1.5, 2.0, 5.0):
        f = families.conformal(grid, c2)
        _, el = euler_lagrange_residual(f, 1.0)
        worst = max(worst, abs(g_lambda_sym(f).deficit), remainder_R_lambda(f), el)
    return worst


def _three_forms(grid, rng, count):
    worst = 0.0
    for _ in range(count):
        amp, width = rng.uniform(-1.5, 1.5), rng.uniform(0.3, 3.0)
        u = families.bump(grid, amp, width)
        vals = [onofri_deficit(u).deficit, onofri_deficit(to_sphere(u)).deficit,
                onofri_deficit(to_cylinder(u)).deficit]
        worst = max(worst, max(vals) - min(vals))
    return worst


def _duality(grid, rng):
    fields = [families.zlinear(grid, 0.7), families.conformal(grid, 3.0),
              families.legendre_poly(grid, rng, 6, 0.5), to_sphere(families.bump(grid, 1.0))]
    return max(abs(duality_decomposition(f).residual) for f in fields)


def _rigidity(grid, T):
    f0 = normalize_sym(families.zlinear(grid, 1.0))
    tr = run_rigidity_flow(f0, 1.0, T=T, dt=1e-3, samples=10)
    g0 = tr.lyapunov[0]
    return abs(tr.lyapunov_drop - tr.integral_of_dissipation) / g0


def _fast_diffusion(grid):
    v = families.barenblatt_field(grid, 1.0, 0.5)
    tr = run_fast_diffusion(v, 0.5, T=0.2, dt=1e-2, samples=4, D=1.0)
    return max(tr.dissipation)


def _fd_rate(grid):
    r = np.sqrt((1.0 + grid.z) / (1.0 - grid.z))
    v = Field(grid, np.exp(0.3 * np.exp(-r * r)) * (1.0 + r * r) ** (1.0 / (0.7 - 1.0)),
              Geometry.EUCLIDEAN)
    tr = run_fast_diffusion(v, 0.7, T=0.05, dt=1e-3, samples=5)
    rate = np.asarray(tr.extras["dE_dt"])
    fisher = np.asarray(tr.dissipation)
    return float(np.max(np.abs(rate + fisher) / fisher))


def _log_diffusion(grid):
    u = families.zlinear(grid, 1.0)
    u = u.shift(-2.0 * np.log(0.5 * grid.quad(np.exp(0.5 * u.values))))
    tr = run_log_diffusion(u, T=0.2, dt=1e-3, samples=4)
    rate = np.asarray(tr.extras["dH_dt"])
    return float(np.max(np.abs(rate + np.asarray(tr.dissipation))))


def _sweep_zero(grid):
    zero = Field.constant(grid, 0.0, Geometry.EUCLIDEAN)
    res = limits.gn_limit_r2(zero, [10.0, 20.0, 40.0])
    return float(np.max(np.abs(res.gap)))


def _sweep_positive(grid):
    u = families.bump(grid, 0.5, 1.0)
    return limits.gn_limit_r2(u, [10.0, 20.0, 40.0]).min_gap


def _transport(grid):
    rep = transport_deficit_check(families.neutral_bump(grid, 0.5), 10.0)
    slacks = rep.slacks
    return min(min(slacks.values()), 1e-6 - rep.monge_ampere_residual)


def run_checks(seed=0, quick=False):
    """Return the list of Check results; the same seed gives the same numbers."""
    rng = np.random.default_rng(seed)
    grid = make_grid(64 if quick else 128)
    count = 10 if quick else 100
    table = limits.constants_table()
    lin = limits.linearization_suite(grid, 0.5, [0.05, 0.1, 0.5, 1.0], [0.5, 1.0, 2.0])
    return [
        Check("deficit_nonnegative", _nonnegativity(grid, rng, count), -1e-9, "min"),
        Check("conformal_extremal", _extremal(grid), 1e-8, "max"),
        Check("three_forms_agree", _three_forms(grid, rng, 5 if quick else 20), 1e-8, "max"),
        Check("duality_identity", _duality(grid, rng), 1e-9, "max"),
        Check("rigidity_endpoint_identity", _rigidity(grid, 0.5 if quick else 2.0), 1e-4, "max"),
        Check("barenblatt_stationary", _fast_diffusion(grid), 1e-10, "max"),
        Check("entropy_rate_m07", _fd_rate(grid), 1e-3, "max"),
        Check("log_diffusion_rate", _log_diffusion(grid), 1e-9, "max"),
        Check("constants_table", max(e.rel_error / e.tolerance for e in table.entries), 1.0, "max"),
        Check("sweep_zero_equality", _sweep_zero(grid), 1e-9, "max"),
        Check("sweep_gap_nonnegative", _sweep_positive(grid), -1e-9, "min"),
        Check("linearization_floor", lin.min_gap, -1e-9, "min"),
        Check("transport_chain", _transport(grid), -1e-8, "min"),
    ]


def render(checks, fmt="csv", seed=0, quick=False):
    if fmt == "json":
        doc = {"version": REPORT_VERSION, "seed": seed, "quick": quick,
               "passed": all(c.passed for c in checks),
               "checks": [dict(asdict(c), value=float(c.value), passed=c.passed) for c in checks]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# {REPORT_VERSION} seed={seed} quick={quick}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("check", "value", "bound", "kind", "status"))
    for c in checks:
        writer.writerow((c.name, repr(float(c.value)), repr(c.bound), c.kind,
                         "PASS" if c.passed else "FAIL"))
    return buf.getvalue()
