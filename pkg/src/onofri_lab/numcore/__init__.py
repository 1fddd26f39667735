from .expr import compile_expr, eval_expr, parse_expr, to_source
from .field import (
    Field,
    Geometry,
    derivative,
    dirichlet_energy,
    integrate,
    integrate_lebesgue,
    inverse_laplacian_sphere,
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
from .grid import LegendreGrid, make_grid

__all__ = [
    "Field", "Geometry", "LegendreGrid", "compile_expr", "derivative",
    "dirichlet_energy", "eval_expr", "integrate", "integrate_lebesgue",
    "inverse_laplacian_sphere", "make_grid", "parse_expr", "radius_of",
    "resample", "s_of_z", "to_cylinder", "to_euclidean", "to_sphere",
    "to_source", "ultraspherical_apply", "z_of_radius", "z_of_s",
]
