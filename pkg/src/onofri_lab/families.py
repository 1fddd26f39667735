"""Named test functions used by the tests, the CLI and the self-test."""

import numpy as np
from numpy.polynomial import legendre
from scipy.optimize import brentq

from .numcore import Field, Geometry, compile_expr

FAMILIES = ("zero", "constant", "zlinear", "legendre-poly", "conformal", "bump", "neutral-bump",
            "barenblatt", "gauss-s")


def zero(grid, geometry=Geometry.SPHERE):
    return Field.constant(grid, 0.0, geometry)


def constant(grid, c, geometry=Geometry.SPHERE):
    return Field.constant(grid, c, geometry)


def zlinear(grid, eps=1.0, shift=0.0):
    return Field(grid, eps * grid.z + shift, Geometry.SPHERE)


def conformal(grid, c2=2.0, c1=None):
    """f(z) = C1 - 2 log(C2 - z); by default C1 = log(C2^2 - 1) so 1/2 int e^f dz = 1."""
    if c2 <= 1.0:
        raise ValueError("the conformal family needs C2 > 1")
    if c1 is None:
        c1 = np.log(c2 * c2 - 1.0)
    return Field(grid, c1 - 2.0 * np.log(c2 - grid.z), Geometry.SPHERE)


def legendre_poly(grid, rng, degree=8, amp=1.0):
    """Random sum of P_0..P_degree with coefficients ~ amp * N(0, 1) / (1 + l)."""
    coeffs = rng.standard_normal(degree + 1) * amp / (1.0 + np.arange(degree + 1))
    return Field(grid, legendre.legval(grid.z, coeffs), Geometry.SPHERE)


def bump(grid, amp=1.0, width=1.0, geometry=Geometry.EUCLIDEAN):
    """Radial bump amp * exp(-r^2 / width^2), carried to any geometry."""
    r = np.sqrt((1.0 + grid.z) / (1.0 - grid.z))
    return Field(grid, amp * np.exp(-(r / width) ** 2), geometry)


def neutral_bump(grid, amp=1.0, width=1.0):
    """amp * (1 - k x) e^(-x), x = r^2 / width^2, with k chosen so that int e^u d mu = 1.

    Decays like a Gaussian, so it is numerically supported in any ball of a
    few widths, and it already carries the normalisation of the transport
    argument and of the fast-diffusion initial data.
    """
    r = np.sqrt((1.0 + grid.z) / (1.0 - grid.z))
    x = (r / width) ** 2
    bell = np.exp(-x)

    def mass(k):
        return 0.5 * grid.quad(np.expm1(amp * (1.0 - k * x) * bell))

    if amp == 0.0:
        return Field(grid, np.zeros(grid.n), Geometry.EUCLIDEAN)
    lo, hi = -1.0, 1.0
    while np.sign(mass(lo)) == np.sign(mass(hi)):
        lo, hi = 2.0 * lo, 2.0 * hi
    k = brentq(mass, lo, hi, xtol=1e-15, rtol=1e-15)
    return Field(grid, amp * (1.0 - k * x) * bell, Geometry.EUCLIDEAN)


def gauss_s(grid, amp=1.0, center=0.0, width=1.0):
    """Cylinder profile amp * exp(-((s - center)/width)^2), decaying at both ends."""
    return Field.from_function(
        grid, lambda s: amp * np.exp(-((s - center) / width) ** 2), Geometry.CYLINDER)


def barenblatt_field(grid, D=1.0, m=0.5):
    r = np.sqrt((1.0 + grid.z) / (1.0 - grid.z))
    return Field(grid, (D + r * r) ** (1.0 / (m - 1.0)), Geometry.EUCLIDEAN)


def from_expr(grid, src, geometry=Geometry.SPHERE):
    return Field.from_function(grid, compile_expr(src), geometry)


def build(name, grid, geometry=None, rng=None, **params):
    """Dispatch a family name plus keyword parameters to a field."""
    if name == "zero":
        return zero(grid, geometry or Geometry.SPHERE)
    if name == "constant":
        return constant(grid, params.get("c", 1.0), geometry or Geometry.SPHERE)
    if name == "zlinear":
        return zlinear(grid, params.get("eps", 1.0), params.get("shift", 0.0))
    if name == "conformal":
        return conformal(grid, params.get("c2", 2.0), params.get("c1"))
    if name == "legendre-poly":
        rng = rng if rng is not None else np.random.default_rng(params.get("seed", 0))
        return legendre_poly(grid, rng, int(params.get("degree", 8)), params.get("amp", 1.0))
    if name == "bump":
        return bump(grid, params.get("amp", 1.0), params.get("width", 1.0),
                    geometry or Geometry.EUCLIDEAN)
    if name == "neutral-bump":
        return neutral_bump(grid, params.get("amp", 1.0), params.get("width", 1.0))
    if name == "gauss-s":
        return gauss_s(grid, params.get("amp", 1.0), params.get("center", 0.0),
                       params.get("width", 1.0))
    if name == "barenblatt":
        return barenblatt_field(grid, params.get("D", 1.0), params.get("m", 0.5))
    raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
