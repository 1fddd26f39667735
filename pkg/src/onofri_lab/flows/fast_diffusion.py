"""Radial fast diffusion in self-similar variables, advanced in u = log(v / v_inf).

With w = v / v_inf and q = (D + r^2)(w^(m-1) - 1) the velocity field is
grad q, so the equation reads v_t = -div(v grad q).  Everything is pulled
back to z, where (nu/r)^2 = (1-z)^3 (1+z) and 1/r d/dr = (1-z)^2 d/dz.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..errors import FlowError, InadmissibleInput
from ..functionals import barenblatt, entropy_fisher, log_mean_exp, onofri_deficit
from ..numcore import Field, Geometry, integrate_lebesgue, radius_of
from .integrator import integrate
from .trace import FlowState, FlowTrace, exponential_tail

MASS_TOL = 1e-9


def _radial_coefficients(z):
    p = (1.0 - z) ** 3 * (1.0 + z)
    half_dp = (1.0 - z) ** 2 * (-1.0 - 2.0 * z)
    return p, half_dp, (1.0 - z) ** 2


def _check_m(m):
    if not 0.5 <= m < 1.0:
        raise InadmissibleInput(f"m must lie in [1/2, 1), got {m}")


def barenblatt_mass(D, m):
    """Closed-form mass of (D + |x|^2)^(1/(m-1)) on R^2."""
    return np.pi * D ** (m / (m - 1.0)) * (1.0 - m) / m


def fit_barenblatt_D(grid, mass, m, bracket=(1e-6, 1e6)):
    """D such that the grid mass of the Barenblatt profile equals ``mass``.

    The map D -> mass is strictly decreasing, so bisection on the grid
    quadrature (not the closed form) keeps the flow's mass exactly consistent.
    """
    r = radius_of(grid.z)
    template = Field(grid, np.zeros(grid.n), Geometry.EUCLIDEAN)

    def excess(log_d):
        vals = barenblatt(r, np.exp(log_d), m)
        return integrate_lebesgue(template.with_values(vals)) - mass

    lo, hi = np.log(bracket[0]), np.log(bracket[1])
    if excess(lo) * excess(hi) > 0:
        raise FlowError(f"no Barenblatt profile with mass {mass:.6g} for D in {bracket}")
    return float(np.exp(brentq(excess, lo, hi, xtol=1e-15, rtol=1e-15)))


class RadialOperators:
    """Precomputed z-coefficients of the radial flow for one grid, D and m."""

    def __init__(self, grid, D, m):
        z = grid.z
        self.grid, self.D, self.m = grid, float(D), float(m)
        self.p, self.half_dp, self.inv_r = _radial_coefficients(z)
        self.r2 = (1.0 + z) / (1.0 - z)
        self.vinf = barenblatt(np.sqrt(self.r2), D, m)
        # weights of int . dx on the grid
        self.dx = 2.0 * np.pi * grid.weights / (1.0 - z) ** 2
        self.drift = 2.0 * grid.nu / ((m - 1.0) * (D + self.r2))

    def q(self, u):
        return (self.D + self.r2) * np.expm1((self.m - 1.0) * u)

    def rhs(self, u):
        g = self.grid
        q = self.q(u)
        qz = g.diff @ q
        qzz = g.diff2 @ q
        uz = g.diff @ u
        lap_q = self.p * qzz + (self.half_dp + self.inv_r) * qz
        return -(self.p * uz * qz + self.drift * qz + lap_q)

    def mass(self, u):
        return float(self.dx @ (np.exp(u) * self.vinf))

    def fisher(self, u):
        qz = self.grid.diff @ self.q(u)
        m = self.m
        return m / (1.0 - m) * float(self.dx @ (np.exp(u) * self.vinf * self.p * qz**2))

    def remainder(self, u):
        g = self.grid
        q = self.q(u)
        qz = g.diff @ q
        qzz = g.diff2 @ q
        zr_over_r = self.inv_r * qz
        dzr = self.p * qzz + self.half_dp * qz
        vm = (np.exp(u) * self.vinf) ** self.m
        dens = vm * (dzr**2 + zr_over_r**2 - (1.0 - self.m) * (dzr + zr_over_r) ** 2)
        return float(self.dx @ dens)

    def entropy_rate(self, u):
        """dE/dt from the variational derivative m/(m-1) q against v_t."""
        v = np.exp(u) * self.vinf
        return self.m / (self.m - 1.0) * float(self.dx @ (self.q(u) * v * self.rhs(u)))


def fd_rhs(grid, u, D, m):
    return RadialOperators(grid, D, m).rhs(u)


def bakry_emery_remainder(v, m=0.5, D=None):
    """int v^m [ |grad z|^2 - (1 - m)(div z)^2 ] dx for the radial field z = grad v^(m-1) - 2x.

    For a radial z, |grad z|^2 = z_r'^2 + (z_r/r)^2 and div z = z_r' + z_r/r.
    D defaults to the one matching the mass of v.
    """
    v.require(Geometry.EUCLIDEAN)
    _check_m(m)
    if np.any(v.values <= 0.0):
        raise InadmissibleInput("v must be positive on the grid")
    g = v.grid
    if D is None:
        D = fit_barenblatt_D(g, integrate_lebesgue(v), m)
    ops = RadialOperators(g, D, m)
    return ops.remainder(np.log(v.values / ops.vinf))


def run_fast_diffusion(v0, m=0.5, T=1.0, dt=1e-3, samples=50, tol=1e-10, D=None,
                       remainder=False):
    """Evolve v0 and record the relative entropy E and Fisher information I.

    Extras: ``dE_dt`` (variational derivative) and, with ``remainder=True``,
    the Bakry-Emery remainder, whose time integral is then carried in the
    state as well.  ``stats`` holds the D of the limiting Barenblatt profile.
    """
    v0.require(Geometry.EUCLIDEAN)
    _check_m(m)
    if np.any(v0.values <= 0.0):
        raise InadmissibleInput("v0 must be positive on the grid")
    if T <= 0 or dt <= 0:
        raise InadmissibleInput("T and dt must be positive")
    grid = v0.grid
    n = grid.n
    m0 = integrate_lebesgue(v0)
    if D is None:
        D = fit_barenblatt_D(grid, m0, m)
    ops = RadialOperators(grid, D, m)
    u0 = np.log(v0.values / ops.vinf)
    trace = FlowTrace("fast-diffusion")

    def rhs(_t, y):
        out = np.empty_like(y)
        if not np.all(np.isfinite(y)) or np.max(np.abs(y[:n])) > 600:
            # an unstable trial stage; NaN makes the integrator reject the step
            out[:] = np.nan
            return out
        u = y[:n]
        out[:n] = ops.rhs(u)
        out[n] = ops.fisher(u)
        out[n + 1] = ops.remainder(u) if remainder else 0.0
        return out

    def check(y_new, _y_old):
        if not np.all(np.isfinite(y_new)) or np.max(np.abs(y_new[:n])) > 600:
            return "positivity"
        if abs(ops.mass(y_new[:n]) - m0) > MASS_TOL * max(1.0, m0):
            return "mass"
        return None

    def on_sample(t, y):
        u = y[:n]
        w = Field(grid, np.exp(u), Geometry.EUCLIDEAN)
        pair = entropy_fisher(w, D, m)
        extra = {"dE_dt": ops.entropy_rate(u), "I_integral": float(y[n])}
        if remainder:
            extra["remainder"] = ops.remainder(u)
            extra["R_integral"] = float(y[n + 1])
        state = FlowState(t, w.with_values(np.exp(u) * ops.vinf), ops.mass(u), pair.E, pair.I)
        trace.record(state, **extra)

    y0 = np.concatenate([u0, [0.0, 0.0]])
    times = np.linspace(0.0, T, samples + 1)
    y, stats = integrate(rhs, y0, times, dt, tol=tol, check=check, on_sample=on_sample)
    trace.integral_of_dissipation = float(y[n])
    trace.stats = dict(stats, D=D, m=m)
    return trace


def mass_neutral(u0):
    """Subtract c (1 - z)/2 = c / (1 + |x|^2) from u0 so that int e^u d mu = 1.

    A constant shift would do the same for the deficit, but the flow needs
    u to vanish at infinity (otherwise v0 has the wrong tail and E diverges);
    the correction decays like |x|^-2 and keeps u smooth in z.
    """
    u0.require(Geometry.EUCLIDEAN)
    profile = 0.5 * (1.0 - u0.grid.z)

    def excess(c):
        return log_mean_exp(u0.with_values(u0.values - c * profile))

    lo, hi = -1.0, 1.0
    while excess(lo) < 0.0:
        lo *= 2.0
    while excess(hi) > 0.0:
        hi *= 2.0
    c = brentq(excess, lo, hi, xtol=1e-15, rtol=1e-15)
    return u0.with_values(u0.values - c * profile)


@dataclass(frozen=True)
class EntropyProductionIntegral:
    """Deficit of u0 against factor * int_0^inf R dt.

    ``gap0`` is I/4 - E at t = 0, which equals pi times the deficit.
    """

    lhs: float
    rhs: float
    integral: float
    tail: float
    rate: float
    factor: float
    gap0: float
    converged: bool

    @property
    def discrepancy(self):
        return abs(self.lhs - self.rhs)


def bakry_emery_integral(u0, T=10.0, dt=1e-2, samples=100, factor=2.0, tol=1e-10,
                         stop_ratio=1e-6):
    """Run the m = 1/2 flow from v0 = e^u0 / (1 + |x|^2)^2 and integrate R.

    u0 is made mass-neutral first (see ``mass_neutral``) so that the limit
    profile has D = 1; ``lhs`` is the Onofri deficit of that adjusted u0.
    The time integral up to T gets an exponential tail fitted on the last
    tenth; ``converged`` tells whether R(T) <= stop_ratio * R(0).
    """
    u = mass_neutral(u0)
    lhs = onofri_deficit(u).deficit
    r = radius_of(u.grid.z)
    v0 = u.with_values(np.exp(u.values) * barenblatt(r, 1.0, 0.5))
    trace = run_fast_diffusion(v0, 0.5, T, dt, samples, tol, D=1.0, remainder=True)
    rem = np.asarray(trace.extras["remainder"])
    integral = trace.extras["R_integral"][-1]
    if rem[0] <= 0.0:
        tail, rate = 0.0, np.inf
    else:
        tail, rate = exponential_tail(trace.t, rem)
    converged = rem[0] <= 0.0 or rem[-1] <= stop_ratio * rem[0]
    if not converged:
        warnings.warn(f"R(T)/R(0) = {rem[-1] / rem[0]:.2e}; the tail estimate {tail:.3e} carries the rest",
                      RuntimeWarning, stacklevel=2)
    rhs = factor * (integral + (tail if np.isfinite(tail) else 0.0))
    gap0 = 0.25 * trace.dissipation[0] - trace.lyapunov[0]
    return EntropyProductionIntegral(lhs, rhs, integral, tail, rate, factor, gap0, bool(converged))
