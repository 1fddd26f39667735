import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import gamma

from onofri_lab import families, limits
from onofri_lab.errors import InadmissibleInput
from onofri_lab.functionals import onofri_deficit
from onofri_lab.numcore import Field, Geometry, make_grid, to_sphere
from onofri_lab.parallel import ENV_VAR, pmap, worker_count

G = make_grid(128)
U = families.bump(G, 0.5, 1.0)
W = families.gauss_s(G, 0.5, 0.0, 1.0)

SWEEP_CASES = {
    "beckner": (lambda: to_sphere(U), [20.0, 40.0, 80.0, 160.0]),
    "gn": (lambda: U, [20.0, 40.0, 80.0, 160.0]),
    "sobolev": (lambda: U, [1.95, 1.975, 1.9875, 1.99375]),
    "radial-d": (lambda: U, [2.1, 2.05, 2.025, 2.0125]),
    "line": (lambda: W, [20.0, 40.0, 80.0, 160.0]),
}


def _sweep(name, field, values):
    if name == "ckn":
        return limits.ckn_limit(field, -0.5, values)
    return limits.SWEEPS[name](field, values)


@pytest.mark.parametrize("name", sorted(SWEEP_CASES))
def test_sweep_gap_nonnegative_and_first_order(name):
    make, values = SWEEP_CASES[name]
    res = _sweep(name, make(), values)
    assert res.min_gap >= -1e-9
    assert abs(res.fitted_rate - 1.0) <= 0.3
    assert np.all(np.diff(res.errors) < 0)


def test_ckn_sweep():
    res = limits.ckn_limit(U, -0.5, [0.1, 0.05, 0.025, 0.0125])
    assert res.min_gap >= -1e-9
    assert abs(res.fitted_rate - 1.0) <= 0.3
    assert {"first_limit", "second_limit"} <= set(res.meta)


@pytest.mark.parametrize("name", sorted(SWEEP_CASES) + ["ckn"])
def test_sweep_is_exact_for_zero(name):
    geometry = Geometry.CYLINDER if name == "line" else (
        Geometry.SPHERE if name == "beckner" else Geometry.EUCLIDEAN)
    zero = Field.constant(G, 0.0, geometry)
    values = [0.1, 0.05] if name == "ckn" else SWEEP_CASES[name][1]
    res = _sweep(name, zero, values)
    assert np.max(np.abs(res.gap)) <= 1e-9
    assert abs(res.limit_target) <= 1e-12


def test_radial_targets_equal_the_onofri_deficit():
    for name in ("gn", "sobolev", "radial-d"):
        res = _sweep(name, U, SWEEP_CASES[name][1][:1])
        assert res.limit_target == pytest.approx(onofri_deficit(U).deficit, abs=1e-12)


def test_inadmissible_parameters_are_skipped_not_clipped():
    big = families.bump(G, -30.0, 1.0)
    res = limits.gn_limit_r2(big, [5.0, 80.0])
    assert [v for v, _ in res.skipped] == [5.0]
    assert res.values == [80.0]
    assert "# skipped p=5.0" in res.to_csv()


def test_parameter_validation():
    with pytest.raises(InadmissibleInput):
        limits.sobolev_p_limit(U, [2.5])
    with pytest.raises(InadmissibleInput):
        limits.radial_sobolev_d_limit(U, [1.9])
    with pytest.raises(InadmissibleInput):
        limits.sobolev_constant(2.0)
    with pytest.raises(InadmissibleInput):
        limits.radial_sobolev_constant(2.0)


def test_sweep_serialisation():
    res = limits.gn_limit_r2(U, [20.0, 40.0])
    text = res.to_csv()
    lines = text.splitlines()
    assert lines[0].startswith("# onofri-lab/sweep/v1 sweep=gn param=p")
    assert lines[1] == "param,lhs,rhs,gap"
    doc = json.loads(res.to_json())
    assert doc["rows"][1]["param"] == 40.0
    assert doc["limit_target"] == pytest.approx(res.limit_target)


# -- constants against oracles written out here -------------------------------------

def _sobolev_constant_oracle(p):
    # ratio of the Aubin-Talenti norms, integrated by quad
    beta, k, q = p / (p - 1), (2 - p) / p, 2 * p / (2 - p)
    F = lambda r: (1 + r**beta) ** -k
    dF = lambda r: k * beta * r ** (beta - 1) * (1 + r**beta) ** (-k - 1)
    num = (2 * np.pi * quad(lambda r: F(r) ** q * r, 0, np.inf, epsrel=1e-13, limit=200)[0]) ** (p / q)
    return num / (2 * np.pi * quad(lambda r: dF(r) ** p * r, 0, np.inf, epsrel=1e-13, limit=200)[0])


@pytest.mark.parametrize("p", [1.2, 1.5, 1.8])
def test_sobolev_constant_against_quad(p):
    assert limits.sobolev_constant(p) == pytest.approx(_sobolev_constant_oracle(p), rel=1e-8)


@pytest.mark.parametrize("d", [2.5, 3.0, 4.0])
def test_radial_sobolev_constant_against_gamma_form(d):
    closed = 4 / (d * (d - 2)) * (gamma((d + 1) / 2) / (np.sqrt(np.pi) * gamma(d / 2))) ** (2 / d)
    assert limits.radial_sobolev_constant(d) == pytest.approx(closed, rel=1e-13)


def test_s3_special_value():
    assert limits.radial_sobolev_constant(3.0) == pytest.approx(4 / 3 * (2 / np.pi) ** (2 / 3), rel=1e-14)


def test_radial_sobolev_expansion_near_two():
    d = 2.001
    assert limits.radial_sobolev_constant(d) - 1 / (d - 2) == pytest.approx(
        0.5 - 0.5 * np.log(2.0), abs=1e-2)


@pytest.mark.parametrize("alpha, eps", [(-0.5, 0.1), (0.0, 0.2), (1.0, 0.05)])
def test_ckn_constants_against_quad(alpha, eps):
    kappa, lam = limits.ckn_constants(alpha, eps)
    # in s = r^(2(1+alpha)), the weights become Beta integrals
    g = 1 / (1 - eps)
    beta = quad(lambda s: s ** (g - 1) * (1 + s) ** (-2 * g), 0, np.inf, epsrel=1e-13)[0]
    assert kappa == pytest.approx(np.pi / (alpha + 1) * beta, rel=1e-9)
    a = eps / (1 - eps) * (alpha + 1)
    assert lam == pytest.approx(4 * np.pi * a / (1 - eps) * beta, rel=1e-9)


def test_constants_table_passes():
    table = limits.constants_table()
    assert table.ok
    assert table["C_p"].rel_error < 1e-8
    assert table["int f*^2 on the line"].tolerance == pytest.approx(0.05)
    assert {row["name"] for row in table.rows()} >= {"C_p", "s_d", "kappa_eps", "lambda_eps"}


# -- linearisation ------------------------------------------------------------------

# Q_1[eps z + 1] - 1 ~ K eps^4; K fitted once at n = 128 (eps = 0.02) and frozen
Q1_QUARTIC = 0.005555043924854175


def test_linearization_floor_for_lambda_half():
    res = limits.linearization_suite(G, 0.5, [0.01, 0.05, 0.1, 0.5, 1.0, 2.0],
                                     [0.1, 0.5, 1.0, 2.0, 5.0])
    assert res.min_gap >= -1e-9
    assert len(res.meta["pairs"]) == len(res.gap)


@pytest.mark.parametrize("eps", [0.1, 0.05, 0.02, 0.01])
def test_q1_near_one(eps):
    q = limits.q_ratio(Field(G, eps * G.z + 1.0), 1.0)
    assert abs(q - 1.0) <= 5 * eps**2


def test_q1_quartic_golden():
    q = limits.q_ratio(Field(G, 0.02 * G.z + 1.0), 1.0)
    assert (q - 1.0) / 0.02**4 == pytest.approx(Q1_QUARTIC, rel=1e-6)
    # series of log(sinh eps / eps) gives 1/180 in the limit
    assert Q1_QUARTIC == pytest.approx(1.0 / 180.0, rel=1e-3)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 2.0), st.floats(0.05, 5.0))
def test_q_half_above_floor(eps, c):
    assert limits.q_ratio(Field(G, eps * G.z + c), 0.5) >= 0.5 - 1e-9


# -- thread pool --------------------------------------------------------------------

def test_worker_count_validation(monkeypatch):
    monkeypatch.setenv(ENV_VAR, "3")
    assert worker_count() == 3
    for bad in ("0", "-1", "two"):
        monkeypatch.setenv(ENV_VAR, bad)
        with pytest.raises(ValueError):
            worker_count()


def test_threads_do_not_change_results(monkeypatch):
    monkeypatch.setenv(ENV_VAR, "1")
    serial = limits.gn_limit_r2(U, [20.0, 40.0, 80.0]).to_csv()
    monkeypatch.setenv(ENV_VAR, "4")
    assert limits.gn_limit_r2(U, [20.0, 40.0, 80.0]).to_csv() == serial
    assert pmap(lambda x: x * x, range(10)) == [x * x for x in range(10)]
