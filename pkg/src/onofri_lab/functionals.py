"""Deficits, remainders and identities of the Onofri inequality.

All integrals use the shared Legendre grid.  The probability measures
d sigma, d mu and the cylinder weight all pull back to dz/2, so the three
forms of the inequality differ only in how the kinetic term is computed.
"""

from dataclasses import asdict, dataclass

import numpy as np

from .errors import InadmissibleInput, OverflowRisk
from .numcore import (
    Field,
    Geometry,
    derivative,
    dirichlet_energy,
    integrate,
    integrate_lebesgue,
    inverse_laplacian_sphere,
    radius_of,
    ultraspherical_apply,
)

MAX_EXPONENT = 700.0


@dataclass(frozen=True)
class DeficitReport:
    kinetic: float
    linear: float
    logterm: float
    deficit: float
    lam: float = 1.0
    geometry: str = "sphere"

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class DualityReport:
    deficit: float
    entropy_term: float
    hls_term: float
    square_term: float
    residual: float

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class EntropyPair:
    E: float
    I: float
    D: float
    m: float

    @property
    def gap(self):
        return 0.25 * self.I - self.E


def _check_exponent(values, scale=1.0):
    top = float(np.max(values)) * scale
    if top > MAX_EXPONENT:
        raise OverflowRisk(
            f"max exponent {top:.1f} exceeds {MAX_EXPONENT:.0f}; subtract a constant from the field first")


def log_mean_exp(f):
    """log of the integral of e^f against the geometry's probability measure."""
    _check_exponent(f.values)
    return float(np.log(integrate(f.with_values(np.exp(f.values)))))


def kinetic_term(u):
    """The Dirichlet term with the prefactor of the matching inequality form.

    1/(16 pi) int |grad u|^2 dx on R^2, 1/4 int |grad v|^2 d sigma on the sphere,
    1/(16 pi) int |grad w|^2 on the cylinder.  All three agree.
    """
    energy = dirichlet_energy(u)
    if u.geometry is Geometry.SPHERE:
        return 0.25 * energy
    return energy / (16.0 * np.pi)


def onofri_deficit(u, lam=1.0):
    """Itemised G_lambda = kinetic + lam * (mean of u - log mean of e^u).

    At lam = 1 this is the literal deficit of the Euclidean, sphere or
    cylinder inequality, selected by the field's geometry.
    """
    kin = kinetic_term(u)
    lin = lam * integrate(u)
    logt = lam * log_mean_exp(u)
    return DeficitReport(kin, lin, logt, kin + lin - logt, float(lam), u.geometry.value)


def g_lambda_sym(f, lam=1.0):
    """1/8 int |f'|^2 nu dz + lam/2 int f dz - lam log(1/2 int e^f dz), written in z."""
    f.require(Geometry.SPHERE)
    _check_exponent(f.values)
    g = f.grid
    fp = f.z_derivative()
    kin = g.quad(g.nu * fp**2) / 8.0
    lin = 0.5 * lam * g.quad(f.values)
    logt = lam * float(np.log(0.5 * g.quad(np.exp(f.values))))
    return DeficitReport(kin, lin, logt, kin + lin - logt, float(lam), "sphere")


def q_lambda(v, lam):
    """The quotient (1/4 int |grad v|^2 + lam int v) / log int e^v on the sphere."""
    v.require(Geometry.SPHERE)
    mean = integrate(v)
    if mean <= 0.0:
        raise InadmissibleInput(f"need int v d sigma > 0, got {mean:.3e}")
    return (kinetic_term(v) + lam * mean) / log_mean_exp(v)


def normalize_sym(f):
    """Shift f so that 1/2 int e^f dz = 1."""
    f.require(Geometry.SPHERE)
    return f.shift(-log_mean_exp(f))


def remainder_R_lambda(f, lam=1.0):
    """Rigidity remainder.

    1/8 int nu^2 |f'' - |f'|^2/2|^2 e^{-f/2} dz + (1 - lam)/4 int nu |f'|^2 e^{-f/2} dz
    """
    f.require(Geometry.SPHERE)
    g = f.grid
    fp = g.diff @ f.values
    fpp = g.diff2 @ f.values
    damp = np.exp(-0.5 * f.values)
    first = g.quad(g.nu**2 * (fpp - 0.5 * fp**2) ** 2 * damp) / 8.0
    second = (1.0 - lam) / 4.0 * g.quad(g.nu * fp**2 * damp)
    return first + second


def euler_lagrange_residual(f, lam=1.0, normalize=False):
    """Pointwise -1/2 L f + lam - lam e^f and its L^2(d sigma) norm.

    The equation assumes 1/2 int e^f dz = 1; pass ``normalize=True`` to
    apply that shift first.
    """
    if normalize:
        f = normalize_sym(f)
    res = -0.5 * ultraspherical_apply(f).values + lam - lam * np.exp(f.values)
    field = f.with_values(res)
    norm = float(np.sqrt(integrate(field.with_values(res**2))))
    return field, norm


def duality_decomposition(u):
    """Split the sphere deficit into entropy, Green energy and a square.

    With f = e^u / int e^u and psi = (-Delta)^{-1}(f - 1):

        deficit = int f log f - int (f - 1) psi + int |grad u / 2 - grad psi|^2
    """
    u.require(Geometry.SPHERE)
    rep = onofri_deficit(u, 1.0)
    g = u.grid
    log_z = log_mean_exp(u)
    logf = u.values - log_z
    fvals = np.exp(logf)
    excess = u.with_values(fvals - 1.0)
    # f - 1 has zero mean up to rounding; remove it so the operator accepts it
    excess = excess.shift(-integrate(excess))
    psi = inverse_laplacian_sphere(excess)
    entropy = integrate(u.with_values(fvals * logf))
    hls = integrate(u.with_values(excess.values * psi.values))
    grad = 0.5 * u.z_derivative() - psi.z_derivative()
    square = 0.5 * g.quad(g.nu * grad**2)
    residual = rep.deficit - (entropy - hls + square)
    return DualityReport(rep.deficit, entropy, hls, square, residual)


def barenblatt(r, D, m):
    return (D + np.asarray(r) ** 2) ** (1.0 / (m - 1.0))


def entropy_fisher(w, D=1.0, m=0.5):
    """Relative entropy and Fisher information of v = w v_inf against v_inf.

    E = 1/(m-1) int [v^m - v_inf^m - m v_inf^(m-1) (v - v_inf)] dx
    I = m/(1-m) int v |grad (v^(m-1) - v_inf^(m-1))|^2 dx

    The m/(1-m) factor makes dE/dt = -I hold for every m; at m = 1/2 it is 1.
    """
    w.require(Geometry.EUCLIDEAN)
    if np.any(w.values <= 0.0):
        raise InadmissibleInput("w must be positive on the grid")
    g = w.grid
    r = radius_of(g.z)
    vinf = barenblatt(r, D, m)
    v = w.values * vinf
    # E pulled out as v_inf^m * (w^m - 1 - m (w - 1)) for accuracy in the tails
    wv = w.values
    e_dens = vinf**m * (wv**m - 1.0 - m * (wv - 1.0)) / (m - 1.0)
    E = integrate_lebesgue(w.with_values(e_dens))
    q = (D + r**2) * (wv ** (m - 1.0) - 1.0)
    qz = g.diff @ q
    # |d/dr q|^2 = (nu/r)^2 q_z^2 and (nu/r)^2 = (1 - z)^3 (1 + z)
    grad2 = (1.0 - g.z) ** 3 * (1.0 + g.z) * qz**2
    I = m / (1.0 - m) * integrate_lebesgue(w.with_values(v * grad2))
    return EntropyPair(E, I, float(D), float(m))


def fd_gap_log_form(u, D=1.0):
    """1/16 int |grad u|^2 dx - D int (e^u - 1 - u) / (D + |x|^2)^2 dx."""
    u.require(Geometry.EUCLIDEAN)
    _check_exponent(u.values)
    r = radius_of(u.grid.z)
    dens = (np.expm1(u.values) - u.values) / (D + r**2) ** 2
    return dirichlet_energy(u) / 16.0 - D * integrate_lebesgue(u.with_values(dens))


@dataclass(frozen=True)
class FDGap:
    gap: float
    shift: float
    shifted_gap: float


def fd_deficit_identity(u, D=1.0):
    """Gap of 1/(16 pi) int |grad u|^2 >= int e^u d mu - 1 - int u d mu.

    Also returns the shift c = -log int e^u d mu minimising the right side
    and the gap of u + c, which equals the Onofri deficit of u.
    """
    u.require(Geometry.EUCLIDEAN)
    if D != 1.0:
        raise InadmissibleInput("the d mu normalisation needs D = 1")
    kin = kinetic_term(u)
    mean = integrate(u)
    log_m = log_mean_exp(u)

    def gap_of(c):
        return kin - (np.exp(log_m + c) - 1.0 - mean - c)

    shift = -log_m
    return FDGap(gap_of(0.0), shift, gap_of(shift))
