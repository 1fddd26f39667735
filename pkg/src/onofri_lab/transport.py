"""Radial optimal transport on a ball and the transport proof of the Onofri inequality.

The monotone map between two radial densities is the inverse-CDF composition:
phi'(r) solves int_0^{phi'(r)} G s ds = int_0^r F rho d rho, found node by node
by bisection.  ``transport_deficit_check`` then walks through every inequality
of the radial argument on B_R with F = e^u mu / Z_R and G = mu / Z_R and
reports each side, so that each slack can be inspected separately.

The r-grid is Gauss-Legendre in xi with r = R ((1 + xi) / 2)^2, which keeps
radial maps (odd and smooth in r) smooth in xi.
"""

import json
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import InadmissibleInput, TransportError
from .functionals import log_mean_exp, onofri_deficit
from .numcore import Geometry, make_grid
from .limits import RadialProfile

MASS_TOL = 1e-10
PUSH_FORWARD_TOL = 1e-8
SUPPORT_TOL = 1e-8
_SEGMENT_ORDER = 24
_BISECTIONS = 80


def mu(r):
    return 1.0 / (np.pi * (1.0 + r * r) ** 2)


def ball_mass_mu(R):
    """Z_R = int_{B_R} mu dx in closed form."""
    return R * R / (1.0 + R * R)


class _RadialQuadrature:
    """Nodes r_i on (0, R) with weights for int_0^R h(r) dr."""

    def __init__(self, R, n):
        grid = make_grid(n)
        xi = grid.z
        self.R = float(R)
        self.xi = xi
        self.r = R * (0.5 * (1.0 + xi)) ** 2
        self.dr_dxi = 0.5 * R * (1.0 + xi)
        self.weights = grid.weights * self.dr_dxi
        self.diff = grid.diff

    def ball(self, h):
        """int_{B_R} h dx for radial h given at the nodes."""
        return 2.0 * np.pi * float(self.weights @ (h * self.r))

    def d_dr(self, values):
        return (self.diff @ values) / self.dr_dxi


_GL_X, _GL_W = leggauss(_SEGMENT_ORDER)


def _segment_integrals(density, a, b):
    """int_a^b density(s) s ds for arrays of endpoints, by fixed Gauss-Legendre."""
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    half = 0.5 * (b - a)
    s = a + half * (_GL_X + 1.0)
    return np.sum(_GL_W * density(s) * s, axis=-1) * half[..., 0]


def _cumulative(density, nodes):
    """int_0^{nodes[i]} density(s) s ds for increasing nodes, segment by segment."""
    edges = np.concatenate([[0.0], nodes])
    return np.cumsum(_segment_integrals(density, edges[:-1], edges[1:]))


@dataclass
class RadialMap:
    """The monotone map r -> phi'(r) pushing F r dr forward to G s ds."""

    r: np.ndarray
    dphi: np.ndarray
    d2phi: np.ndarray
    F: object
    G: object
    R: float
    R_target: float
    push_forward_error: float
    monge_ampere_residual: float
    quadrature: _RadialQuadrature = field(repr=False)

    @property
    def convex(self):
        return bool(np.all(self.d2phi >= -1e-10 * np.max(np.abs(self.d2phi))))

    def amgm_slack(self):
        """1/2 (phi'' + phi'/r) - sqrt(phi'' phi'/r) at every node."""
        ratio = self.dphi / self.r
        d2 = np.maximum(self.d2phi, 0.0)
        return 0.5 * (d2 + ratio) - np.sqrt(d2 * ratio)


def radial_brenier(F, G, R, n=200, R_target=None):
    """Monotone transport map from F on B_R to G on B_{R_target}.

    F and G are positive vectorised functions of the radius.  Their masses on
    the two balls must agree to 1e-10 (relative).
    """
    if R <= 0 or n < 8:
        raise InadmissibleInput("need R > 0 and n >= 8")
    R_target = float(R if R_target is None else R_target)
    quad = _RadialQuadrature(R, n)
    r = quad.r
    if np.any(F(r) <= 0.0) or np.any(G(r * R_target / R) <= 0.0):
        raise InadmissibleInput("densities must be positive on the ball")

    mass_F = _cumulative(F, r)
    mass_F = np.append(mass_F, mass_F[-1] + _segment_integrals(F, r[-1], R))
    target_nodes = r * (R_target / R)
    mass_G = _cumulative(G, target_nodes)
    total_G = mass_G[-1] + _segment_integrals(G, target_nodes[-1], R_target)
    if abs(mass_F[-1] - total_G) > MASS_TOL * max(abs(total_G), 1e-300):
        raise TransportError(f"mass mismatch: {2 * np.pi * mass_F[-1]:.12g} vs "
                             f"{2 * np.pi * total_G:.12g}")
    want = mass_F[:-1]

    def cumulative_G(s):
        # tabulated value at the last target node below s plus one short segment
        k = np.searchsorted(target_nodes, s, side="right") - 1
        base = np.where(k >= 0, mass_G[np.maximum(k, 0)], 0.0)
        start = np.where(k >= 0, target_nodes[np.maximum(k, 0)], 0.0)
        return base + _segment_integrals(G, start, s)

    lo = np.zeros_like(want)
    hi = np.full_like(want, R_target)
    for _ in range(_BISECTIONS):
        mid = 0.5 * (lo + hi)
        below = cumulative_G(mid) < want
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    dphi = 0.5 * (lo + hi)
    if np.any(np.diff(dphi) < 0.0) or np.any(dphi <= 0.0):
        raise TransportError("internal error: transport map is not monotone")

    push = float(np.max(np.abs(cumulative_G(dphi) - want)))
    d2phi = quad.d_dr(dphi)
    residual = G(dphi) * (dphi / r) * d2phi - F(r)
    rel_residual = quad.ball(np.abs(residual)) / quad.ball(F(r))
    return RadialMap(r, dphi, d2phi, F, G, float(R), R_target, 2.0 * np.pi * push,
                     float(rel_residual), quad)


def amgm_pointwise_check(tmap):
    """Minimum over nodes of 1/2 (phi'' + phi'/r) - sqrt(phi'' phi'/r)."""
    if not tmap.convex:
        raise TransportError("radial potential is not convex: phi'' < 0 at some node")
    return float(np.min(tmap.amgm_slack()))


@dataclass
class TransportReport:
    R: float
    n: int
    Z_R: float
    Z_R_closed_form: float
    normalization_shift: float
    phi_prime_R: float
    kappa: float
    push_forward_error: float
    monge_ampere_residual: float
    amgm_pointwise_min: float
    change_of_variables: dict
    amgm: dict
    integration_by_parts: dict
    cauchy_schwarz: dict
    log_mu_boundary: dict
    final: dict
    deficit: dict
    mu_identity: dict
    boundary_term: float
    boundary_term_error: float
    limit_display_lhs: float
    limit_display_error: float

    @property
    def slacks(self):
        return {
            "amgm_pointwise": self.amgm_pointwise_min,
            "amgm": self.amgm["slack"],
            "cauchy_schwarz": self.cauchy_schwarz["slack"],
            "final": self.final["slack"],
            "deficit": self.deficit["slack"],
        }

    def ok(self, tol=1e-8, deficit_tol=1e-6):
        s = self.slacks
        return (all(v >= -tol for k, v in s.items() if k != "deficit")
                and s["deficit"] >= -deficit_tol)

    def to_dict(self):
        out = asdict(self)
        out["slacks"] = self.slacks
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def transport_deficit_check(u, R, n=200):
    """Follow the radial transport argument on B_R for a Euclidean field u.

    u must vanish (to 1e-8) outside B_R.  It is shifted by c so that
    F = e^(u - c) mu / Z_R has unit mass on B_R; both boundary terms of the
    integrations by parts are kept exactly, including the one produced by
    u - c = -c on the sphere of radius R.
    """
    u.require(Geometry.EUCLIDEAN)
    g = u.grid
    r_nodes = np.sqrt((1.0 + g.z) / (1.0 - g.z))
    outside = r_nodes >= R
    prof = RadialProfile(u)
    edge = abs(float(prof(np.array([R]))[0]))
    if edge > SUPPORT_TOL or (np.any(outside) and np.max(np.abs(u.values[outside])) > SUPPORT_TOL):
        raise InadmissibleInput(f"u is not supported inside B_{R:g} (|u| up to "
                                f"{max(edge, np.max(np.abs(u.values[outside]), initial=0.0)):.2e})")

    Z = ball_mass_mu(R)
    quad = _RadialQuadrature(R, n)
    r = quad.r
    Z_quad = quad.ball(mu(r))
    c = float(np.log(quad.ball(np.exp(prof(r)) * mu(r)) / Z_quad))

    def F(s):
        return np.exp(prof(s) - c) * mu(s) / Z

    def G(s):
        return mu(s) / Z

    tmap = radial_brenier(F, G, R, n)
    dphi, d2phi = tmap.dphi, tmap.d2phi
    lap_phi = d2phi + dphi / r
    Fr = F(r)
    sqrtF = np.sqrt(Fr)
    ut = prof(r) - c
    dut = prof.dr(r)
    dlog_mu = -4.0 * r / (1.0 + r * r)
    dlogF = dut + dlog_mu

    # the map ends on the sphere of radius R because both masses are one
    phiR = R
    FR = float(F(np.array([R]))[0])
    ut_R = -c

    sqrtG_total = quad.ball(np.sqrt(G(r)))
    det_side = quad.ball(sqrtF * np.sqrt(np.maximum(d2phi, 0.0) * dphi / r))
    amgm_left = det_side
    amgm_right = quad.ball(0.5 * sqrtF * lap_phi)

    cross = quad.ball(dlogF * sqrtF * dphi)
    ibp_boundary = 2.0 * np.pi * R * np.sqrt(FR) * phiR
    ibp_residual = quad.ball(sqrtF * lap_phi) + 0.5 * cross - ibp_boundary
    boundary_term = np.pi * R * np.sqrt(FR) * phiR
    A = sqrtG_total - boundary_term

    fisher_F = quad.ball(dlogF**2)
    second_moment = quad.ball(Fr * dphi**2)
    second_moment_G = quad.ball(G(r) * r**2)
    cs_square = cross**2
    cs_product = fisher_F * second_moment

    mu_r = mu(r)
    grad_u2 = quad.ball(dut**2)
    u_mu = quad.ball(ut * mu_r)
    fisher_mu = quad.ball(dlog_mu**2)
    mixed = 2.0 * quad.ball(dut * dlog_mu)
    # Delta log mu = -8 pi mu
    mixed_by_parts = 2.0 * quad.ball(ut * 8.0 * np.pi * mu_r)
    log_mu_boundary = 4.0 * np.pi * R * (-4.0 * R / (1.0 + R * R)) * ut_R
    expansion = grad_u2 + mixed + fisher_mu

    if A < 0.0:
        raise TransportError("boundary term exceeds int sqrt(G); squaring step is invalid")
    lhs = 16.0 * A**2 / second_moment_G - fisher_mu - log_mu_boundary
    rhs = grad_u2 + 16.0 * np.pi * u_mu

    direct = onofri_deficit(u).deficit
    lower = lhs / (16.0 * np.pi) + c * Z - log_mean_exp(u)

    sqrt_mu_ball = quad.ball(np.sqrt(mu_r))
    mu_y2 = quad.ball(mu_r * r**2)
    exact_left = 16.0 * (sqrt_mu_ball - np.pi * R**2 * np.sqrt(mu(R))) ** 2
    limit_left = 16.0 * (sqrt_mu_ball - np.sqrt(np.pi)) ** 2
    mu_product = mu_y2 * fisher_mu
    limit_lhs = limit_left / mu_y2 - fisher_mu

    return TransportReport(
        R=float(R), n=n, Z_R=Z_quad, Z_R_closed_form=Z, normalization_shift=c,
        phi_prime_R=phiR,
        kappa=float(dphi[-1] ** 2 / (1.0 + dphi[-1] ** 2) - r[-1] ** 2 / (1.0 + r[-1] ** 2)),
        push_forward_error=tmap.push_forward_error,
        monge_ampere_residual=tmap.monge_ampere_residual,
        amgm_pointwise_min=amgm_pointwise_check(tmap),
        change_of_variables={"int_sqrt_G": sqrtG_total, "int_sqrt_F_sqrt_det": det_side,
                             "residual": det_side - sqrtG_total},
        amgm={"left": amgm_left, "right": amgm_right, "slack": amgm_right - amgm_left},
        integration_by_parts={"boundary": ibp_boundary, "cross": cross, "residual": ibp_residual,
                              "A": A},
        cauchy_schwarz={"square": cs_square, "product": cs_product,
                        "slack": cs_product - cs_square,
                        "second_moment_F_map": second_moment,
                        "second_moment_G": second_moment_G,
                        "transported_moment_residual": second_moment - second_moment_G},
        log_mu_boundary={"boundary": log_mu_boundary, "mixed": mixed,
                         "by_parts": mixed_by_parts,
                         "residual": mixed - mixed_by_parts - log_mu_boundary,
                         "expansion": expansion},
        final={"lhs": lhs, "rhs": rhs, "slack": rhs - lhs},
        deficit={"lower_bound": lower, "direct": direct, "slack": direct - lower},
        mu_identity={"exact_left": exact_left, "product": mu_product,
                     "exact_residual": (exact_left - mu_product) / mu_product,
                     "limit_left": limit_left,
                     "limit_residual": (limit_left - mu_product) / mu_product},
        boundary_term=boundary_term,
        boundary_term_error=abs(boundary_term - np.sqrt(np.pi)),
        limit_display_lhs=limit_lhs,
        limit_display_error=abs(lhs - limit_lhs),
    )

