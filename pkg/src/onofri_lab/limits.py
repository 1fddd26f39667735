"""Onofri's inequality as the endpoint of six families of inequalities.

Each sweep evaluates one family at a list of parameters on a perturbation of
that family's extremal profile, in a log-ratio form that is exactly zero for
the unperturbed profile.  The gap of the family inequality is nonnegative at
every admissible parameter and tends to the Onofri deficit of the test
function as the small parameter goes to zero.

Radial integrals use ``scipy.integrate.quad`` on the barycentric interpolant
of the test field, so the limit target is computed the same way.
"""

import csv
import io
import json
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import gammaln

from .errors import InadmissibleInput
from .functionals import dirichlet_energy, onofri_deficit
from .numcore import Field, Geometry, integrate, z_of_radius, z_of_s
from .parallel import pmap

SWEEP_VERSION = "onofri-lab/sweep/v1"
SWEEP_COLUMNS = ("param", "lhs", "rhs", "gap")
QUAD_RTOL = 1e-12


def _quad(fun, a=0.0, b=np.inf):
    with warnings.catch_warnings():
        # quad reports roundoff once it is at machine precision; the value is still usable
        warnings.simplefilter("ignore", IntegrationWarning)
        return quad(fun, a, b, epsabs=0.0, epsrel=QUAD_RTOL, limit=500)[0]


class RadialProfile:
    """A Euclidean radial field as a function of r, with its r-derivative."""

    def __init__(self, u, shift=0.0):
        u.require(Geometry.EUCLIDEAN)
        self.field = u
        self.shift = float(shift)
        self._dz = u.with_values(u.z_derivative())

    def __call__(self, r):
        return self.field.at(r) + self.shift

    def dr(self, r):
        # dz/dr = 4 r / (1 + r^2)^2
        return self._dz.at_z(z_of_radius(r)) * 4.0 * r / (1.0 + r * r) ** 2

    def shifted(self, c):
        return RadialProfile(self.field, self.shift + c)

    @property
    def node_values(self):
        return self.field.values + self.shift


class LineProfile:
    """A cylinder field as a function of s, with its s-derivative."""

    def __init__(self, w):
        w.require(Geometry.CYLINDER)
        self.field = w
        self._dz = w.with_values(w.z_derivative())

    def __call__(self, s):
        return self.field.at(s)

    def ds(self, s):
        z = z_of_s(s)
        return -(1.0 - z * z) * self._dz.at_z(z)

    @property
    def node_values(self):
        return self.field.values


def radial_onofri_deficit(prof):
    """(1/16 pi) int |grad u|^2 dx + int u d mu - log int e^u d mu by quadrature."""
    mu = lambda r: 2.0 * r / (1.0 + r * r) ** 2
    kinetic = _quad(lambda r: prof.dr(r) ** 2 * r) / 8.0
    mean = _quad(lambda r: prof(r) * mu(r))
    return kinetic + mean - np.log(_quad(lambda r: np.exp(prof(r)) * mu(r)))


def _log_cosh(s):
    a = abs(s)
    return a + np.log1p(np.exp(-2.0 * a)) - np.log(2.0)


def _xi(s):
    return 0.5 * np.exp(-2.0 * _log_cosh(s))


def line_onofri_deficit(prof):
    """1/8 int |w'|^2 ds + int w xi ds - log int e^w xi ds, xi = sech^2 / 2."""
    xi = _xi
    kinetic = _quad(lambda s: prof.ds(s) ** 2, -np.inf, np.inf) / 8.0
    mean = _quad(lambda s: prof(s) * xi(s), -np.inf, np.inf)
    return kinetic + mean - np.log(_quad(lambda s: np.exp(prof(s)) * xi(s), -np.inf, np.inf))


@dataclass
class SweepResult:
    name: str
    param: str
    values: list = field(default_factory=list)
    lhs: list = field(default_factory=list)
    rhs: list = field(default_factory=list)
    gap: list = field(default_factory=list)
    limit_target: float = float("nan")
    small: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, value, lhs, rhs, gap, small):
        self.values.append(value)
        self.lhs.append(float(lhs))
        self.rhs.append(float(rhs))
        self.gap.append(float(gap))
        self.small.append(float(small))

    @property
    def min_gap(self):
        return min(self.gap) if self.gap else float("nan")

    @property
    def errors(self):
        return np.abs(np.asarray(self.gap) - self.limit_target)

    @property
    def fitted_rate(self):
        """Log-log slope of |gap - limit_target| against the small parameter."""
        err = self.errors
        small = np.asarray(self.small)
        keep = err > 0
        if keep.sum() < 2:
            return float("nan")
        return float(np.polyfit(np.log(small[keep]), np.log(err[keep]), 1)[0])

    def summary(self):
        return {
            "name": self.name,
            "param": self.param,
            "limit_target": float(self.limit_target),
            "fitted_rate": float(self.fitted_rate),
            "min_gap": float(self.min_gap),
            "skipped": [[v, why] for v, why in self.skipped],
            **self.meta,
        }

    def to_csv(self):
        buf = io.StringIO()
        head = [SWEEP_VERSION, f"sweep={self.name}", f"param={self.param}",
                f"limit_target={float(self.limit_target)!r}", f"fitted_rate={float(self.fitted_rate)!r}"]
        buf.write("# " + " ".join(head) + "\n")
        for v, why in self.skipped:
            buf.write(f"# skipped {self.param}={v!r}: {why}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in zip(self.values, self.lhs, self.rhs, self.gap):
            writer.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    def to_json(self):
        doc = self.summary()
        doc["rows"] = [dict(zip(SWEEP_COLUMNS, map(float, row)))
                       for row in zip(self.values, self.lhs, self.rhs, self.gap)]
        return json.dumps(doc, indent=2, sort_keys=True)


def _run(result, points, evaluate, positive):
    """Evaluate each admissible parameter; inadmissible ones are flagged, not clipped."""
    admissible = []
    for value in points:
        reason = positive(value)
        if reason:
            result.skipped.append((float(value), reason))
        else:
            admissible.append(value)
    for value, row in zip(admissible, pmap(evaluate, admissible)):
        result.add(value, *row)
    return result


def _positivity(node_values, factor):
    def check(value):
        low = 1.0 + factor(value) * float(np.min(node_values))
        return None if low > 0.0 else f"perturbed profile not positive (min factor {low:.3g})"
    return check


# -- sphere interpolation inequalities, q = 2(1 + t) --------------------------------

def beckner_limit(v, t_values):
    v.require(Geometry.SPHERE)
    grid = v.grid
    kinetic = dirichlet_energy(v)
    m1 = integrate(v)
    m2 = integrate(v.with_values(v.values**2))

    def evaluate(t):
        base = kinetic / (4.0 * t) + 1.0 + m1 / t + m2 / (4.0 * t * t)
        f = 1.0 + v.values / (2.0 * t)
        log_rhs = np.log(0.5 * grid.quad(f ** (2.0 * (1.0 + t))))
        log_lhs = (1.0 + t) * np.log(base)
        return np.exp(log_lhs), np.exp(log_rhs), log_lhs - log_rhs, 1.0 / t

    res = SweepResult("beckner", "t", limit_target=onofri_deficit(v).deficit)
    return _run(res, t_values, evaluate, _positivity(v.values, lambda t: 0.5 / t))


# -- Gagliardo-Nirenberg on R^2, p -> infinity --------------------------------------

def gn_profile(p):
    """F_p = (1 + r^2)^(-1/(p-1)) and its r-derivative."""
    k = 1.0 / (p - 1.0)
    return (lambda r: (1.0 + r * r) ** -k,
            lambda r: -2.0 * k * r * (1.0 + r * r) ** (-k - 1.0))


def gn_limit_r2(u, p_values):
    prof = RadialProfile(u)
    mu = lambda r: 2.0 * r / (1.0 + r * r) ** 2
    shift = -_quad(lambda r: prof(r) * mu(r))
    prof = prof.shifted(shift)

    def evaluate(p):
        F, dF = gn_profile(p)
        e = 1.0 / (2.0 * p)
        f = lambda r: F(r) * (1.0 + e * prof(r))
        df = lambda r: dF(r) * (1.0 + e * prof(r)) + F(r) * e * prof.dr(r)
        ratio = lambda g, h: _quad(lambda r: g(r) * r) / _quad(lambda r: h(r) * r)
        a = ratio(lambda r: f(r) ** (2 * p), lambda r: F(r) ** (2 * p))
        b = ratio(lambda r: df(r) ** 2, lambda r: dF(r) ** 2)
        c = ratio(lambda r: f(r) ** (p + 1), lambda r: F(r) ** (p + 1))
        log_rhs = 0.5 * (p - 1.0) * np.log(b) + np.log(c)
        return a, np.exp(log_rhs), log_rhs - np.log(a), 1.0 / p

    res = SweepResult("gn", "p", limit_target=radial_onofri_deficit(prof), meta={"shift": shift})
    return _run(res, p_values, evaluate, _positivity(prof.node_values, lambda p: 0.5 / p))


# -- Sobolev with an L^p gradient on R^2, p -> 2 ------------------------------------

def sobolev_constant(p):
    """Optimal C_p in ||f||_{2p/(2-p)}^p <= C_p ||grad f||_p^p on R^2."""
    if not 1.0 < p < 2.0:
        raise InadmissibleInput(f"need 1 < p < 2, got {p}")
    return 0.5 * ((p - 1.0) / (2.0 - p)) ** (p - 1.0) * (
        p * p * abs(np.sin(2.0 * np.pi / p)) / (2.0 * (p - 1.0) * (2.0 - p) * np.pi**2)) ** (p / 2.0)


def sobolev_profile(p):
    """Aubin-Talenti profile (1 + r^(p/(p-1)))^(-(2-p)/p) and its r-derivative."""
    beta = p / (p - 1.0)
    k = (2.0 - p) / p
    return (lambda r: (1.0 + r**beta) ** -k,
            lambda r: -k * beta * r ** (beta - 1.0) * (1.0 + r**beta) ** (-k - 1.0))


def sobolev_p_limit(u, p_values):
    for p in p_values:
        if not 1.0 < p < 2.0:
            raise InadmissibleInput(f"need 1 < p < 2, got {p}")
    prof = RadialProfile(u)

    def evaluate(p):
        F, dF = sobolev_profile(p)
        e = (2.0 - p) / (2.0 * p)
        q = 2.0 * p / (2.0 - p)
        f = lambda r: F(r) * (1.0 + e * prof(r))
        df = lambda r: dF(r) * (1.0 + e * prof(r)) + F(r) * e * prof.dr(r)
        grad_f = _quad(lambda r: abs(df(r)) ** p * r)
        grad_star = _quad(lambda r: abs(dF(r)) ** p * r)
        norm_f = _quad(lambda r: f(r) ** q * r)
        norm_star = _quad(lambda r: F(r) ** q * r)
        lhs = (2.0 * np.pi * norm_f) ** (p / q)
        rhs = sobolev_constant(p) * 2.0 * np.pi * grad_f
        gap = 2.0 / (2.0 - p) * np.log(grad_f / grad_star) - np.log(norm_f / norm_star)
        return lhs, rhs, gap, 2.0 - p

    res = SweepResult("sobolev", "p", limit_target=radial_onofri_deficit(prof))
    return _run(res, p_values, evaluate, _positivity(prof.node_values, lambda p: (2.0 - p) / (2.0 * p)))


# -- radial Sobolev in real dimension d -> 2 ----------------------------------------

def radial_sobolev_constant(d):
    """s_d = 4/(d(d-2)) (Gamma((d+1)/2) / (sqrt(pi) Gamma(d/2)))^(2/d)."""
    if d <= 2.0:
        raise InadmissibleInput(f"need d > 2, got {d}")
    log_ratio = gammaln((d + 1.0) / 2.0) - 0.5 * np.log(np.pi) - gammaln(d / 2.0)
    return 4.0 / (d * (d - 2.0)) * np.exp(2.0 / d * log_ratio)


def radial_sobolev_d_limit(u, d_values):
    """Gap (2/(d-2)) log X - (2/d) log Y with X, Y the Dirichlet and L^(2d/(d-2)) ratios."""
    for d in d_values:
        if not 2.0 < d <= 3.0:
            raise InadmissibleInput(f"need 2 < d <= 3, got {d}")
    prof = RadialProfile(u)

    def evaluate(d):
        e = (d - 2.0) / (2.0 * d)
        q = 2.0 * d / (d - 2.0)
        F = lambda r: (1.0 + r * r) ** (-(d - 2.0) / 2.0)
        dF = lambda r: -(d - 2.0) * r * (1.0 + r * r) ** (-d / 2.0)
        f = lambda r: F(r) * (1.0 + e * prof(r))
        df = lambda r: dF(r) * (1.0 + e * prof(r)) + F(r) * e * prof.dr(r)
        w = lambda r: r ** (d - 1.0)
        grad_f = _quad(lambda r: df(r) ** 2 * w(r))
        grad_star = _quad(lambda r: dF(r) ** 2 * w(r))
        norm_f = _quad(lambda r: abs(f(r)) ** q * w(r))
        norm_star = _quad(lambda r: F(r) ** q * w(r))
        lhs = radial_sobolev_constant(d) * grad_f
        rhs = norm_f ** (1.0 - 2.0 / d)
        gap = 2.0 / (d - 2.0) * np.log(grad_f / grad_star) - 2.0 / d * np.log(norm_f / norm_star)
        return lhs, rhs, gap, d - 2.0

    res = SweepResult("radial-d", "d", limit_target=radial_onofri_deficit(prof))
    return _run(res, d_values, evaluate, _positivity(prof.node_values, lambda d: (d - 2.0) / (2.0 * d)))


# -- Caffarelli-Kohn-Nirenberg, eps -> 0 --------------------------------------------

def ckn_constants(alpha, eps):
    """Closed forms of kappa_eps and lambda_eps."""
    g = 1.0 / (1.0 - eps)
    beta = np.exp(2.0 * gammaln(g) - gammaln(2.0 * g))
    a = -eps / (1.0 - eps) * (alpha + 1.0)
    return np.pi / (alpha + 1.0) * beta, 4.0 * np.pi * abs(a) / (1.0 - eps) * beta


class _SProfile:
    """u(r) re-expressed in s = r^(2(1+alpha)), in which d mu_alpha = ds / (1+s)^2."""

    def __init__(self, prof, alpha):
        self.prof = prof
        self.k = 2.0 * (1.0 + alpha)

    def __call__(self, s):
        return self.prof(s ** (1.0 / self.k))

    def ds(self, s):
        r = s ** (1.0 / self.k)
        return self.prof.dr(r) * r / (self.k * s)


def ckn_integrals(U, k, eps):
    """int |w|^p |x|^(-bp) dx and int |grad w|^2 |x|^(-2a) dx for w = (1 + eps U/2) u_eps, in s."""
    gam = eps / (1.0 - eps)
    p = 2.0 / eps
    amp = lambda s: 1.0 + 0.5 * eps * U(s)
    n1 = 2.0 * np.pi / k * _quad(
        lambda s: abs(amp(s)) ** p * s**gam * (1.0 + s) ** (-2.0 / (1.0 - eps)))
    ws = lambda s: (0.5 * eps * U.ds(s) * (1.0 + s) ** -gam
                    - gam * amp(s) * (1.0 + s) ** (-gam - 1.0))
    n2 = 2.0 * np.pi * k * _quad(lambda s: ws(s) ** 2 * s ** (1.0 / (1.0 - eps)))
    return n1, n2


class _Zero:
    def __call__(self, s):
        return 0.0

    def ds(self, s):
        return 0.0


def ckn_limit(u, alpha, eps_values):
    """Sweep eps with a_eps = -eps(1+alpha)/(1-eps), b_eps = a_eps + eps, p_eps = 2/eps.

    Per eps the gap is (1/eps) log(N2 / N2*) - log(N1 / N1*), where * marks
    u = 0; ``meta`` records the two limit quantities N1/kappa and
    (N2/lambda - 1)/eps.
    """
    if not -1.0 < alpha <= 0.0:
        raise InadmissibleInput(f"need -1 < alpha <= 0, got {alpha}")
    for eps in eps_values:
        if not 0.0 < eps < 1.0:
            raise InadmissibleInput(f"need 0 < eps < 1, got {eps}")
    prof = RadialProfile(u)
    U = _SProfile(prof, alpha)
    k = U.k

    def evaluate(eps):
        n1, n2 = ckn_integrals(U, k, eps)
        s1, s2 = ckn_integrals(_Zero(), k, eps)
        kappa, lam = ckn_constants(alpha, eps)
        gap = np.log(n2 / s2) / eps - np.log(n1 / s1)
        return n1 / kappa, (n2 / lam - 1.0) / eps, gap, eps

    mu = lambda s: 1.0 / (1.0 + s) ** 2
    target = (0.25 * _quad(lambda s: s * U.ds(s) ** 2) + _quad(lambda s: U(s) * mu(s))
              - np.log(_quad(lambda s: np.exp(U(s)) * mu(s))))
    res = SweepResult("ckn", "eps", limit_target=target, meta={"alpha": alpha})
    _run(res, eps_values, evaluate, _positivity(prof.node_values, lambda e: 0.5 * e))
    first = _quad(lambda s: np.exp(U(s)) * mu(s))
    second = _quad(lambda s: U(s) * mu(s)) + 0.25 * _quad(lambda s: s * U.ds(s) ** 2)
    res.meta.update(first_limit=first, second_limit=second)
    return res


# -- Gagliardo-Nirenberg on the line, p -> infinity ---------------------------------

def line_profile(p):
    """f* = cosh(s)^(-2/(p-1)) and its derivative."""
    k = 2.0 / (p - 1.0)
    return (lambda s: np.exp(-k * _log_cosh(s)),
            lambda s: -k * np.tanh(s) * np.exp(-k * _log_cosh(s)))


def line_gn_limit(w, p_values):
    """Gap (p/2)[theta log K + (1 - theta) log L] - log N, theta = (p-2)/(2p)."""
    for p in p_values:
        if p <= 2.0:
            raise InadmissibleInput(f"need p > 2, got {p}")
    prof = LineProfile(w)
    line = lambda g: _quad(g, -np.inf, np.inf)

    def evaluate(p):
        F, dF = line_profile(p)
        f = lambda s: F(s) * (1.0 + prof(s) / p)
        df = lambda s: dF(s) * (1.0 + prof(s) / p) + F(s) * prof.ds(s) / p
        n = line(lambda s: abs(f(s)) ** p) / line(lambda s: F(s) ** p)
        kin = line(lambda s: df(s) ** 2) / line(lambda s: dF(s) ** 2)
        l2 = line(lambda s: f(s) ** 2) / line(lambda s: F(s) ** 2)
        theta = (p - 2.0) / (2.0 * p)
        lhs = 2.0 / p * np.log(n)
        rhs = theta * np.log(kin) + (1.0 - theta) * np.log(l2)
        return lhs, rhs, 0.5 * p * (rhs - lhs), 1.0 / p

    res = SweepResult("line", "p", limit_target=line_onofri_deficit(prof))
    return _run(res, p_values, evaluate, _positivity(prof.node_values, lambda p: 1.0 / p))


# -- linearisation around constants -------------------------------------------------

def q_ratio(v, lam):
    """Q_lambda[v] = (1/4 int |grad v|^2 + lam int v) / log int e^v on the sphere."""
    mean = integrate(v)
    if mean <= 0.0:
        raise InadmissibleInput(f"need int v d sigma > 0, got {mean:.3e}")
    rep = onofri_deficit(v, 1.0)
    return (rep.kinetic + lam * mean) / rep.logterm


def linearization_suite(grid, lam, eps_values, c_values):
    """Q_lambda over v = eps z + c.  Rows carry (eps, c) in ``meta['pairs']``.

    lhs is the numerator, rhs the log term, gap = Q - min(lam, 1).
    """
    res = SweepResult("linearization", "eps,c", meta={"lam": lam, "pairs": []})
    floor = min(lam, 1.0)
    for eps in eps_values:
        for c in c_values:
            v = Field(grid, eps * grid.z + c, Geometry.SPHERE)
            if integrate(v) <= 0.0:
                res.skipped.append((float(c), f"eps={eps!r}: int v d sigma <= 0"))
                continue
            rep = onofri_deficit(v, 1.0)
            q = (rep.kinetic + lam * integrate(v)) / rep.logterm
            res.meta["pairs"].append([float(eps), float(c)])
            res.add(float(c), rep.kinetic + lam * integrate(v), rep.logterm, q - floor, float(eps))
    res.limit_target = 0.0
    return res


# -- closed-form constants against quadrature ---------------------------------------

@dataclass(frozen=True)
class ConstantEntry:
    name: str
    closed_form: float
    quadrature: float
    tolerance: float

    @property
    def rel_error(self):
        return abs(self.closed_form - self.quadrature) / abs(self.quadrature)

    @property
    def ok(self):
        return self.rel_error <= self.tolerance


@dataclass
class ConstantsTable:
    entries: list

    @property
    def ok(self):
        return all(e.ok for e in self.entries)

    def __getitem__(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def rows(self):
        return [{"name": e.name, "closed_form": e.closed_form, "quadrature": e.quadrature,
                 "rel_error": e.rel_error, "tolerance": e.tolerance, "ok": e.ok}
                for e in self.entries]


def constants_table(p_sobolev=1.5, d=3.0, p_gn=3.0, alpha=-0.5, eps=0.1, d_near=2.001, p_line=20.0):
    entries = []
    two_pi = 2.0 * np.pi

    # C_p: ||f*||_q^p / ||grad f*||_p^p
    F, dF = sobolev_profile(p_sobolev)
    q = 2.0 * p_sobolev / (2.0 - p_sobolev)
    ratio = (two_pi * _quad(lambda r: F(r) ** q * r)) ** (p_sobolev / q) / (
        two_pi * _quad(lambda r: abs(dF(r)) ** p_sobolev * r))
    entries.append(ConstantEntry("C_p", sobolev_constant(p_sobolev), ratio, 1e-8))

    # s_d from the radial Aubin-Talenti profile
    qd = 2.0 * d / (d - 2.0)
    F = lambda r: (1.0 + r * r) ** (-(d - 2.0) / 2.0)
    dF = lambda r: -(d - 2.0) * r * (1.0 + r * r) ** (-d / 2.0)
    s_quad = _quad(lambda r: F(r) ** qd * r ** (d - 1.0)) ** (1.0 - 2.0 / d) / _quad(
        lambda r: dF(r) ** 2 * r ** (d - 1.0))
    entries.append(ConstantEntry("s_d", radial_sobolev_constant(d), s_quad, 1e-8))
    if d == 3.0:
        entries.append(ConstantEntry("s_3 special value", 4.0 / 3.0 * (2.0 / np.pi) ** (2.0 / 3.0),
                                     s_quad, 1e-8))

    F, dF = gn_profile(p_gn)
    entries.append(ConstantEntry("int |grad F_p|^2", two_pi / (p_gn + 1.0),
                                 two_pi * _quad(lambda r: dF(r) ** 2 * r), 1e-8))
    entries.append(ConstantEntry("int F_p^(p+1)", (p_gn - 1.0) * np.pi / 2.0,
                                 two_pi * _quad(lambda r: F(r) ** (p_gn + 1.0) * r), 1e-8))

    # kappa and lambda directly in r, independent of the s-substitution used by the sweep
    a = -eps / (1.0 - eps) * (alpha + 1.0)
    k = 2.0 * (1.0 + alpha)
    ue = lambda r: (1.0 + r**k) ** (-eps / (1.0 - eps))
    due = lambda r: -eps / (1.0 - eps) * k * r ** (k - 1.0) * (1.0 + r**k) ** (-eps / (1.0 - eps) - 1.0)
    bp = (a + eps) * 2.0 / eps
    kappa_q = two_pi * (_quad(lambda r: ue(r) ** (2.0 / eps) * r ** (1.0 - bp), 0.0, 1.0)
                        + _quad(lambda r: ue(r) ** (2.0 / eps) * r ** (1.0 - bp), 1.0))
    lam_q = two_pi * (_quad(lambda r: due(r) ** 2 * r ** (1.0 - 2.0 * a), 0.0, 1.0)
                      + _quad(lambda r: due(r) ** 2 * r ** (1.0 - 2.0 * a), 1.0))
    kappa, lam = ckn_constants(alpha, eps)
    entries.append(ConstantEntry("kappa_eps", kappa, kappa_q, 1e-8))
    entries.append(ConstantEntry("lambda_eps", lam, lam_q, 1e-8))

    # expansions, checked at their own looser scale
    entries.append(ConstantEntry("s_d - 1/(d-2) near d=2", 0.5 - 0.5 * np.log(2.0),
                                 radial_sobolev_constant(d_near) - 1.0 / (d_near - 2.0), 1e-2))
    F, _ = line_profile(p_line)
    entries.append(ConstantEntry("int f*^2 on the line", (p_line - 1.0) / 2.0 + 2.0 * np.log(2.0),
                                 _quad(lambda s: F(s) ** 2, -np.inf, np.inf), 1.0 / p_line))
    return ConstantsTable(entries)


SWEEPS = {
    "beckner": beckner_limit,
    "gn": gn_limit_r2,
    "sobolev": sobolev_p_limit,
    "radial-d": radial_sobolev_d_limit,
    "ckn": ckn_limit,
    "line": line_gn_limit,
}
