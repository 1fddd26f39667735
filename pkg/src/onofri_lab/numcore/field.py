"""Symmetric fields on the shared Legendre grid and the three geometries.

Every geometry is a reparametrisation of z in (-1, 1):

* sphere:    z = cos(theta)
* euclidean: r = sqrt((1 + z) / (1 - z)), i.e. z = (r^2 - 1) / (r^2 + 1)
* cylinder:  s = -log r = -artanh(z)

The probability measures d(sigma), d(mu) and the cylinder weight all pull
back to dz / 2, so ``integrate`` is the same Gauss sum in every geometry.
"""

import enum
from dataclasses import dataclass

import numpy as np

from ..errors import GeometryError, MeanNonzeroError
from .grid import LegendreGrid


class Geometry(str, enum.Enum):
    SPHERE = "sphere"
    EUCLIDEAN = "euclidean"
    CYLINDER = "cylinder"


def radius_of(z):
    z = np.asarray(z, dtype=float)
    return np.sqrt((1.0 + z) / (1.0 - z))


def z_of_radius(r):
    r2 = np.asarray(r, dtype=float) ** 2
    return (r2 - 1.0) / (r2 + 1.0)


def s_of_z(z):
    return -np.arctanh(np.asarray(z, dtype=float))


def z_of_s(s):
    return -np.tanh(np.asarray(s, dtype=float))


def native_coordinate(grid, geometry):
    geometry = Geometry(geometry)
    if geometry is Geometry.SPHERE:
        return grid.z
    if geometry is Geometry.EUCLIDEAN:
        return radius_of(grid.z)
    return s_of_z(grid.z)


def _dz_dnative(grid, geometry):
    # dz/dr = nu / r and dz/ds = -nu
    if geometry is Geometry.SPHERE:
        return np.ones(grid.n)
    if geometry is Geometry.EUCLIDEAN:
        return grid.nu / radius_of(grid.z)
    return -grid.nu


@dataclass(frozen=True, eq=False)
class Field:
    grid: LegendreGrid
    values: np.ndarray
    geometry: Geometry = Geometry.SPHERE

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "geometry", Geometry(self.geometry))

    @classmethod
    def from_function(cls, grid, func, geometry=Geometry.SPHERE):
        """Sample ``func`` at the native coordinate (z, r or s) of each node."""
        geometry = Geometry(geometry)
        coord = native_coordinate(grid, geometry)
        vals = np.broadcast_to(np.asarray(func(coord), dtype=float), coord.shape)
        return cls(grid, vals, geometry)

    @classmethod
    def constant(cls, grid, c, geometry=Geometry.SPHERE):
        return cls(grid, np.full(grid.n, float(c)), geometry)

    @property
    def coordinate(self):
        return native_coordinate(self.grid, self.geometry)

    def with_values(self, values):
        return Field(self.grid, values, self.geometry)

    def shift(self, c):
        return self.with_values(self.values + c)

    def scale(self, a):
        return self.with_values(self.values * a)

    def require(self, geometry):
        if self.geometry is not Geometry(geometry):
            raise GeometryError(
                f"operation needs a {Geometry(geometry).value} field, got {self.geometry.value}")
        return self

    def z_derivative(self):
        """Derivative with respect to z regardless of geometry (plain array)."""
        return self.grid.diff @ self.values

    def at_z(self, z):
        return self.grid.interpolate(self.values, z)

    def at(self, coord):
        """Interpolate at points given in the native coordinate."""
        if self.geometry is Geometry.SPHERE:
            return self.at_z(coord)
        if self.geometry is Geometry.EUCLIDEAN:
            return self.at_z(z_of_radius(coord))
        return self.at_z(z_of_s(coord))


def integrate(f):
    """Integral against the geometry's probability measure (d sigma, d mu, or the cylinder weight)."""
    return 0.5 * f.grid.quad(f.values)


def integrate_lebesgue(f):
    """Unweighted integral: dA on the unit sphere, dx on R^2, d theta ds on the cylinder."""
    g = f.grid
    if f.geometry is Geometry.SPHERE:
        return 2.0 * np.pi * g.quad(f.values)
    if f.geometry is Geometry.EUCLIDEAN:
        return 2.0 * np.pi * g.quad(f.values / (1.0 - g.z) ** 2)
    return 2.0 * np.pi * g.quad(f.values / g.nu)


def derivative(f):
    """Spectral derivative with respect to the native coordinate (z, r or s)."""
    return f.with_values(f.z_derivative() * _dz_dnative(f.grid, f.geometry))


def dirichlet_energy(f):
    """Integral of |grad f|^2 computed in the native variables.

    Sphere: against the probability measure d sigma.  Euclidean: over R^2 in
    dx.  Cylinder: over S^1 x R in d theta ds.
    """
    g = f.grid
    df = derivative(f).values
    if f.geometry is Geometry.SPHERE:
        return 0.5 * g.quad(g.nu * df**2)
    if f.geometry is Geometry.EUCLIDEAN:
        r = radius_of(g.z)
        # 2 pi int |u_r|^2 r dr with dr = (r / nu) dz
        return 2.0 * np.pi * g.quad(df**2 * r * r / g.nu)
    return 2.0 * np.pi * g.quad(df**2 / g.nu)


def ultraspherical_apply(f):
    """(1 - z^2) f'' - 2 z f'."""
    f.require(Geometry.SPHERE)
    g = f.grid
    return f.with_values(g.nu * (g.diff2 @ f.values) - 2.0 * g.z * (g.diff @ f.values))


def inverse_laplacian_sphere(f, tol=1e-10):
    """Apply (-Delta)^{-1} on mean-zero symmetric functions via the Legendre series."""
    f.require(Geometry.SPHERE)
    mean = integrate(f)
    if abs(mean) > tol:
        raise MeanNonzeroError(f"(-Delta)^-1 needs a mean-zero input, mean is {mean:.3e}")
    coeffs = f.grid.to_coefficients(f.values)
    ell = np.arange(f.grid.n, dtype=float)
    out = np.zeros_like(coeffs)
    out[1:] = coeffs[1:] / (ell[1:] * (ell[1:] + 1.0))
    return f.with_values(f.grid.from_coefficients(out))


def to_sphere(u):
    """u(x) = v(omega, z): same nodal values, relabelled as a sphere field."""
    return Field(u.grid, u.values, Geometry.SPHERE)


def to_euclidean(v):
    return Field(v.grid, v.values, Geometry.EUCLIDEAN)


def to_cylinder(v):
    return Field(v.grid, v.values, Geometry.CYLINDER)


def resample(f, grid):
    """Move a field to another grid by interpolation in z."""
    return Field(grid, f.at_z(grid.z), f.geometry)
