"""Symmetric rigidity flow  g_t = (nu/2) |g'|^2 e^{-g/2} - L(e^{-g/2}).

Expanded, the right side is e^{-g/2} (L g / 2 + nu |g'|^2 / 4), a forward
parabolic equation along which G_lambda decreases at rate R_lambda.  The
opposite sign gives the backward equation, on which G_lambda grows.
"""

import numpy as np

from ..errors import FlowError, InadmissibleInput
from ..functionals import g_lambda_sym, remainder_R_lambda
from ..numcore import Field, Geometry
from .integrator import integrate
from .trace import FlowState, FlowTrace

MASS_TOL = 1e-7
NORMALIZATION_TOL = 1e-10


def rigidity_rhs(grid, g):
    d1 = grid.diff @ g
    damp = np.exp(-0.5 * g)
    lap = grid.nu * (grid.diff2 @ damp) - 2.0 * grid.z * (grid.diff @ damp)
    return 0.5 * grid.nu * d1**2 * damp - lap


def g_lambda_rate(grid, g, gt, lam):
    """d/dt of G_lambda along a velocity gt, via the variational derivative."""
    lg = grid.nu * (grid.diff2 @ g) - 2.0 * grid.z * (grid.diff @ g)
    eg = np.exp(g)
    grad = -0.25 * lg + 0.5 * lam - lam * eg / grid.quad(eg)
    return grid.quad(grad * gt)


def _mass(grid, g):
    return 0.5 * grid.quad(np.exp(g))


def run_rigidity_flow(f0, lam=1.0, T=1.0, dt=1e-3, samples=50, tol=1e-10):
    """Integrate the flow from f0 and record G_lambda and R_lambda.

    f0 must satisfy 1/2 int e^{f0} dz = 1 (see ``functionals.normalize_sym``).
    The trace also carries ``dG_dt`` from the variational derivative, which
    should equal -R_lambda at every sample.
    """
    f0.require(Geometry.SPHERE)
    grid = f0.grid
    m0 = _mass(grid, f0.values)
    if abs(m0 - 1.0) > NORMALIZATION_TOL:
        raise InadmissibleInput(f"need 1/2 int e^f dz = 1, got {m0:.12f}; normalise first")
    if T <= 0 or dt <= 0:
        raise InadmissibleInput("T and dt must be positive")
    n = grid.n
    trace = FlowTrace("rigidity")

    def rhs(_t, y):
        out = np.empty_like(y)
        g = y[:n]
        out[:n] = rigidity_rhs(grid, g)
        out[n] = remainder_R_lambda(Field(grid, g, Geometry.SPHERE), lam)
        return out

    def check(y_new, _y_old):
        if not np.all(np.isfinite(y_new)) or np.max(np.abs(y_new[:n])) > 600:
            return "blow-up"
        if abs(_mass(grid, y_new[:n]) - m0) > MASS_TOL:
            return "mass"
        return None

    def on_sample(t, y):
        g = y[:n]
        field = Field(grid, g, Geometry.SPHERE)
        G = g_lambda_sym(field, lam).deficit
        R = remainder_R_lambda(field, lam)
        rate = g_lambda_rate(grid, g, rigidity_rhs(grid, g), lam)
        trace.record(FlowState(t, field, _mass(grid, g), G, R),
                     dG_dt=rate, R_integral=float(y[n]))

    y0 = np.concatenate([f0.values, [0.0]])
    times = np.linspace(0.0, T, samples + 1)
    try:
        y, stats = integrate(rhs, y0, times, dt, tol=tol, check=check, on_sample=on_sample)
    except FlowError:
        raise
    trace.integral_of_dissipation = float(y[n])
    trace.stats = stats
    return trace
