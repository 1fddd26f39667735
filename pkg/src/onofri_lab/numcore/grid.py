"""Gauss-Legendre grid with spectral differentiation and Legendre transform."""

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from numpy.polynomial import legendre

from ..errors import GridError

MIN_NODES = 8


@dataclass(frozen=True, eq=False)
class LegendreGrid:
    """Gauss-Legendre nodes on (-1, 1) and the operators built on them.

    ``diff`` is the barycentric collocation derivative, ``fwd`` maps node
    values to coefficients of P_0..P_{n-1} and ``inv`` maps back.
    """

    n: int
    nodes: np.ndarray
    weights: np.ndarray
    diff: np.ndarray
    fwd: np.ndarray
    inv: np.ndarray
    bary: np.ndarray = field(repr=False)

    @property
    def z(self):
        return self.nodes

    @property
    def nu(self):
        return (1.0 - self.nodes) * (1.0 + self.nodes)

    @cached_property
    def diff2(self):
        return self.diff @ self.diff

    def quad(self, values):
        """Plain Gauss sum, i.e. the integral over (-1, 1) in dz."""
        return float(np.dot(self.weights, values))

    def to_coefficients(self, values):
        return self.fwd @ np.asarray(values, dtype=float)

    def from_coefficients(self, coeffs):
        return self.inv @ np.asarray(coeffs, dtype=float)

    def interpolate(self, values, points):
        """Barycentric interpolation of node values at arbitrary points of [-1, 1]."""
        shape = np.shape(points)
        pts = np.asarray(points, dtype=float).ravel()
        diff = pts[:, None] - self.nodes[None, :]
        exact = diff == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            kernel = self.bary[None, :] / diff
            out = (kernel @ values) / kernel.sum(axis=1)
        hit_rows, hit_cols = np.nonzero(exact)
        out[hit_rows] = np.asarray(values)[hit_cols]
        if np.ndim(points) == 0:
            return float(out[0])
        return out.reshape(shape)


def _barycentric_weights(nodes, weights):
    # Gauss nodes: lambda_j ~ (-1)^j sqrt((1 - x_j^2) w_j)
    signs = (-1.0) ** np.arange(nodes.size)
    return signs * np.sqrt((1.0 - nodes**2) * weights)


def _diff_matrix(nodes, bary):
    dx = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(dx, 1.0)
    d = (bary[None, :] / bary[:, None]) / dx
    np.fill_diagonal(d, 0.0)
    np.fill_diagonal(d, -d.sum(axis=1))
    return d


@lru_cache(maxsize=32)
def make_grid(n):
    """Build the Gauss-Legendre grid with ``n`` nodes (n >= 8)."""
    if int(n) != n or n < MIN_NODES:
        raise GridError(f"need an integer node count >= {MIN_NODES}, got {n!r}")
    n = int(n)
    nodes, weights = legendre.leggauss(n)
    if not (np.all(np.isfinite(nodes)) and np.all(np.diff(nodes) > 0)):
        raise GridError(f"Gauss-Legendre root finding failed for n={n}")
    if abs(weights.sum() - 2.0) > 1e-12:
        raise GridError(f"Gauss-Legendre weights do not sum to 2 for n={n}")
    bary = _barycentric_weights(nodes, weights)
    vander = legendre.legvander(nodes, n - 1)
    scale = (2.0 * np.arange(n) + 1.0) / 2.0
    fwd = scale[:, None] * (vander.T * weights[None, :])
    for arr in (nodes, weights, bary, vander, fwd):
        arr.setflags(write=False)
    diff = _diff_matrix(nodes, bary)
    diff.setflags(write=False)
    return LegendreGrid(n=n, nodes=nodes, weights=weights, diff=diff,
                        fwd=fwd, inv=vander, bary=bary)
