"""Logarithmic (super-fast) diffusion f_t = L(log f) on the sphere, in z."""

import numpy as np

from ..errors import InadmissibleInput
from ..functionals import onofri_deficit
from ..numcore import Field, Geometry, inverse_laplacian_sphere
from .integrator import integrate
from .trace import FlowState, FlowTrace

MASS_TOL = 1e-9
MASS_NORMALIZATION_TOL = 1e-10


def log_diffusion_rhs(grid, f):
    logf = np.log(f)
    return grid.nu * (grid.diff2 @ logf) - 2.0 * grid.z * (grid.diff @ logf)


def _green(grid, f):
    """psi = (-Delta)^(-1)(f - 1) for f of unit mean."""
    excess = Field(grid, f - 1.0, Geometry.SPHERE)
    excess = excess.shift(-0.5 * grid.quad(excess.values))
    return inverse_laplacian_sphere(excess).values


def log_entropy(grid, f):
    """H = int f log f d sigma - int (f - 1)(-Delta)^(-1)(f - 1) d sigma."""
    psi = _green(grid, f)
    return 0.5 * grid.quad(f * np.log(f)) - 0.5 * grid.quad((f - 1.0) * psi)


def log_diffusion_diagnostics(grid, f):
    """Return the quantities compared along the flow, for u = 2 log f.

    ``bracket``  -dH/dt = 1/4 int |grad u|^2 + int u - int u e^(u/2)
    ``deficit``  1/4 int |grad u|^2 + int u - log int e^u (the Onofri deficit)
    ``jensen``   log int e^u - int u e^(u/2), nonnegative when int e^(u/2) = 1
    ``dH_dt``    variational derivative of H against the flow velocity
    """
    u = 2.0 * np.log(f)
    uz = grid.diff @ u
    kinetic = 0.125 * grid.quad(grid.nu * uz**2)
    mean_u = 0.5 * grid.quad(u)
    cross = 0.5 * grid.quad(u * f)
    deficit = onofri_deficit(Field(grid, u, Geometry.SPHERE)).deficit
    log_mean = np.log(0.5 * grid.quad(np.exp(u)))
    ft = log_diffusion_rhs(grid, f)
    dH = 0.5 * grid.quad(ft * (np.log(f) + 1.0 - 2.0 * _green(grid, f)))
    return {
        "bracket": kinetic + mean_u - cross,
        "deficit": deficit,
        "jensen": log_mean - cross,
        "dH_dt": dH,
        "full_gradient_bracket": 4.0 * kinetic + mean_u - log_mean,
    }


def run_log_diffusion(u0, T=1.0, dt=1e-3, samples=50, tol=1e-10):
    """Evolve f = e^(u/2) from u0; requires int e^(u0/2) d sigma = 1.

    Lyapunov is H, dissipation is -dH/dt in closed form.  The extras record
    the Onofri deficit of u, the Jensen gap and the variational dH/dt.
    """
    u0.require(Geometry.SPHERE)
    grid = u0.grid
    n = grid.n
    f0 = np.exp(0.5 * u0.values)
    m0 = 0.5 * grid.quad(f0)
    if abs(m0 - 1.0) > MASS_NORMALIZATION_TOL:
        raise InadmissibleInput(f"need int e^(u/2) d sigma = 1, got {m0:.12f}")
    if T <= 0 or dt <= 0:
        raise InadmissibleInput("T and dt must be positive")
    trace = FlowTrace("log-diffusion")

    def bracket(f):
        u = 2.0 * np.log(f)
        uz = grid.diff @ u
        return 0.125 * grid.quad(grid.nu * uz**2) + 0.5 * grid.quad(u) - 0.5 * grid.quad(u * f)

    def rhs(_t, y):
        f = y[:n]
        if not np.all(np.isfinite(y)) or np.min(f) <= 0.0:
            return np.full_like(y, np.nan)
        return np.append(log_diffusion_rhs(grid, f), bracket(f))

    def check(y_new, _y_old):
        f = y_new[:n]
        if not np.all(np.isfinite(y_new)) or np.min(f) <= 0.0:
            return "positivity"
        if abs(0.5 * grid.quad(f) - m0) > MASS_TOL:
            return "mass"
        return None

    def on_sample(t, y):
        f = y[:n]
        diag = log_diffusion_diagnostics(grid, f)
        state = FlowState(t, Field(grid, f, Geometry.SPHERE), 0.5 * grid.quad(f),
                          log_entropy(grid, f), diag.pop("bracket"))
        trace.record(state, bracket_integral=float(y[n]), **diag)

    times = np.linspace(0.0, T, samples + 1)
    y, stats = integrate(rhs, np.append(f0, 0.0), times, dt, tol=tol, check=check,
                         on_sample=on_sample)
    trace.stats = stats
    trace.integral_of_dissipation = float(y[n])
    return trace
