import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import legendre
from scipy.integrate import quad

from onofri_lab.errors import GeometryError, GridError, MeanNonzeroError
from onofri_lab.numcore import (
    Field,
    Geometry,
    derivative,
    dirichlet_energy,
    integrate,
    integrate_lebesgue,
    inverse_laplacian_sphere,
    make_grid,
    radius_of,
    resample,
    s_of_z,
    to_cylinder,
    to_euclidean,
    to_sphere,
    ultraspherical_apply,
    z_of_radius,
    z_of_s,
)


def test_grid_rejects_small_or_fractional_sizes():
    with pytest.raises(GridError):
        make_grid(4)
    with pytest.raises(GridError):
        make_grid(10.5)


def test_grid_is_cached_and_immutable():
    g = make_grid(32)
    assert make_grid(32) is g
    with pytest.raises(ValueError):
        g.nodes[0] = 0.0


@pytest.mark.parametrize("degree", [0, 5, 31, 63])
def test_gauss_sum_exact_for_polynomials(degree):
    g = make_grid(32)
    coeffs = np.zeros(degree + 1)
    coeffs[-1] = 1.0
    mono = np.polynomial.Polynomial(coeffs)
    exact = mono.integ()(1.0) - mono.integ()(-1.0)
    assert g.quad(mono(g.z)) == pytest.approx(exact, abs=1e-14)


def test_differentiation_matches_analytic_derivative(grid):
    vals = np.exp(np.sin(2.0 * grid.z))
    exact = 2.0 * np.cos(2.0 * grid.z) * vals
    assert np.max(np.abs(grid.diff @ vals - exact)) < 1e-10


def test_legendre_transform_round_trip(grid, rng):
    coeffs = rng.standard_normal(grid.n) / (1.0 + np.arange(grid.n)) ** 2
    vals = grid.from_coefficients(coeffs)
    assert np.allclose(grid.to_coefficients(vals), coeffs, atol=1e-12)
    assert np.allclose(vals, legendre.legval(grid.z, coeffs), atol=1e-12)


def test_interpolation_reproduces_nodes_and_smooth_functions(grid):
    vals = np.cos(3.0 * grid.z)
    assert np.array_equal(grid.interpolate(vals, grid.z), vals)
    pts = np.linspace(-0.99, 0.99, 17)
    assert np.max(np.abs(grid.interpolate(vals, pts) - np.cos(3.0 * pts))) < 1e-12
    assert grid.interpolate(vals, 0.3) == pytest.approx(np.cos(0.9), abs=1e-12)
    block = grid.interpolate(vals, pts.reshape(-1, 1))
    assert block.shape == (17, 1)


@given(st.floats(-0.999, 0.999))
def test_coordinate_maps_invert(z):
    assert float(z_of_radius(radius_of(z))) == pytest.approx(z, abs=1e-12)
    assert float(z_of_s(s_of_z(z))) == pytest.approx(z, abs=1e-12)


def test_field_validation(grid):
    with pytest.raises(ValueError):
        Field(grid, np.zeros(3))
    with pytest.raises(ValueError):
        Field(grid, np.full(grid.n, np.nan))
    u = Field(grid, np.zeros(grid.n), Geometry.EUCLIDEAN)
    with pytest.raises(GeometryError):
        u.require(Geometry.SPHERE)
    assert u.values.flags.writeable is False


def test_three_measures_are_probabilities(grid):
    one = Field.constant(grid, 1.0)
    for convert in (to_sphere, to_euclidean, to_cylinder):
        assert integrate(convert(one)) == pytest.approx(1.0, abs=1e-14)


def test_lebesgue_integral_against_quad(grid):
    # int_{R^2} e^{-r^2} dx = pi ; area of the unit sphere = 4 pi
    gauss = Field.from_function(grid, lambda r: np.exp(-r * r), Geometry.EUCLIDEAN)
    assert integrate_lebesgue(gauss) == pytest.approx(np.pi, rel=1e-12)
    assert integrate_lebesgue(Field.constant(grid, 1.0)) == pytest.approx(4.0 * np.pi, rel=1e-14)
    sech = Field.from_function(grid, lambda s: 1.0 / np.cosh(s) ** 4, Geometry.CYLINDER)
    oracle = 2.0 * np.pi * quad(lambda s: 1.0 / np.cosh(s) ** 4, -40.0, 40.0)[0]
    assert integrate_lebesgue(sech) == pytest.approx(oracle, rel=1e-10)


def test_native_derivatives(grid):
    u = Field.from_function(grid, lambda r: np.exp(-r * r), Geometry.EUCLIDEAN)
    r = radius_of(grid.z)
    assert np.max(np.abs(derivative(u).values + 2.0 * r * np.exp(-r * r))) < 1e-9
    # sech(s)^2 = 1 - z^2 is smooth in z (sech itself is not)
    w = Field.from_function(grid, lambda s: 1.0 / np.cosh(s) ** 2, Geometry.CYLINDER)
    s = s_of_z(grid.z)
    assert np.max(np.abs(derivative(w).values + 2.0 * np.tanh(s) / np.cosh(s) ** 2)) < 1e-9


def test_dirichlet_energy_against_quad(grid):
    u = Field.from_function(grid, lambda r: np.exp(-r * r), Geometry.EUCLIDEAN)
    oracle = 2.0 * np.pi * quad(lambda r: 4.0 * r**3 * np.exp(-2 * r * r), 0, np.inf)[0]
    assert dirichlet_energy(u) == pytest.approx(oracle, rel=1e-10)
    v = Field(grid, grid.z, Geometry.SPHERE)
    # 1/2 int (1 - z^2) dz = 2/3
    assert dirichlet_energy(v) == pytest.approx(2.0 / 3.0, rel=1e-14)


def test_dirichlet_energy_is_conformally_invariant(grid):
    v = Field(grid, np.exp(grid.z) * np.sin(3 * grid.z), Geometry.SPHERE)
    e_sphere = 4.0 * np.pi * dirichlet_energy(v)
    assert dirichlet_energy(to_euclidean(v)) == pytest.approx(e_sphere, rel=1e-10)
    assert dirichlet_energy(to_cylinder(v)) == pytest.approx(e_sphere, rel=1e-10)


@pytest.mark.parametrize("ell", [1, 2, 5, 12])
def test_legendre_polynomials_are_eigenfunctions(grid, ell):
    p = Field(grid, legendre.legval(grid.z, np.eye(ell + 1)[ell]))
    lap = ultraspherical_apply(p).values
    assert np.max(np.abs(lap + ell * (ell + 1) * p.values)) < 1e-8
    back = inverse_laplacian_sphere(p)
    assert np.max(np.abs(back.values - p.values / (ell * (ell + 1)))) < 1e-12


def test_inverse_laplacian_requires_zero_mean(grid):
    with pytest.raises(MeanNonzeroError):
        inverse_laplacian_sphere(Field.constant(grid, 1.0))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=2, max_size=10))
def test_inverse_laplacian_round_trip(coeffs):
    g = make_grid(48)
    c = np.array([0.0] + coeffs)
    f = Field(g, legendre.legval(g.z, c))
    psi = inverse_laplacian_sphere(f)
    assert np.max(np.abs(-ultraspherical_apply(psi).values - f.values)) < 1e-9
    assert abs(integrate(psi)) < 1e-12


def test_resample_between_grids(grid):
    f = Field(grid, np.cosh(grid.z))
    g2 = make_grid(40)
    assert np.max(np.abs(resample(f, g2).values - np.cosh(g2.z))) < 1e-13
