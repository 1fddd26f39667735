import numpy as np
import pytest
from scipy.integrate import quad

from onofri_lab import families
from onofri_lab.errors import FlowError, InadmissibleInput
from onofri_lab.flows import (
    bakry_emery_integral,
    bakry_emery_remainder,
    barenblatt_mass,
    exponential_tail,
    fit_barenblatt_D,
    integrate,
    log_diffusion_diagnostics,
    mass_neutral,
    read_trace_csv,
    rk4_step,
    run_fast_diffusion,
    run_log_diffusion,
    run_rigidity_flow,
)
from onofri_lab.functionals import (
    barenblatt,
    entropy_fisher,
    g_lambda_sym,
    log_mean_exp,
    normalize_sym,
    onofri_deficit,
)
from onofri_lab.numcore import Field, Geometry, integrate_lebesgue, make_grid, radius_of

G48 = make_grid(48)
G64 = make_grid(64)


def _perturbed_barenblatt(grid, amp, m, width=1.0):
    r = radius_of(grid.z)
    vals = np.exp(amp * np.exp(-(r / width) ** 2)) * barenblatt(r, 1.0, m)
    return Field(grid, vals, Geometry.EUCLIDEAN)


def _half_mass_normalised(u):
    g = u.grid
    return u.shift(-2.0 * np.log(0.5 * g.quad(np.exp(0.5 * u.values))))


# -- integrator -----------------------------------------------------------------------

def test_rk4_step_is_fourth_order():
    rhs = lambda t, y: -y
    errs = [abs(rk4_step(rhs, 0.0, np.array([1.0]), h)[0] - np.exp(-h)) for h in (0.1, 0.05)]
    assert errs[0] / errs[1] == pytest.approx(32.0, rel=0.05)


def test_integrate_hits_sample_times_and_tolerance():
    seen = []
    y, stats = integrate(lambda t, y: np.array([y[1], -y[0]]), [1.0, 0.0],
                         np.linspace(0, 2 * np.pi, 5), 0.1, tol=1e-11,
                         on_sample=lambda t, y: seen.append((t, y.copy())))
    assert [t for t, _ in seen] == pytest.approx(np.linspace(0, 2 * np.pi, 5).tolist())
    assert np.allclose(y, [1.0, 0.0], atol=1e-8)
    assert stats["steps"] > 0


def test_integrate_rejects_on_check_and_budget():
    calls = []

    def check(y_new, y_old):
        calls.append(1)
        return "mass" if len(calls) < 3 else None

    integrate(lambda t, y: -y, [1.0], [0.0, 0.1], 0.1, check=check)
    assert len(calls) >= 3
    with pytest.raises(FlowError):
        integrate(lambda t, y: -y, [1.0], [0.0, 1.0], 1e-3, max_steps=5)
    with pytest.raises(FlowError):
        integrate(lambda t, y: -y, [1.0], [0.0, 1.0], 0.1, check=lambda a, b: "never")


def test_nan_stage_forces_smaller_step():
    def rhs(t, y):
        return np.array([np.nan]) if abs(y[0]) > 1.5 else -y
    y, stats = integrate(lambda t, y: rhs(t, y), [1.0], [0.0, 1.0], 0.5, tol=1e-10)
    assert y[0] == pytest.approx(np.exp(-1.0), rel=1e-8)


# -- rigidity -------------------------------------------------------------------------

def test_rigidity_from_constant_is_stationary():
    tr = run_rigidity_flow(families.zero(G48), 1.0, T=1.0, dt=1e-2, samples=4)
    assert np.max(np.abs(tr.lyapunov)) < 1e-14
    assert tr.mass_drift < 1e-12


@pytest.mark.parametrize("lam", [0.5, 1.0])
def test_rigidity_endpoint_identity(lam):
    f0 = normalize_sym(families.zlinear(G48, 1.0))
    tr = run_rigidity_flow(f0, lam, T=2.0, dt=1e-3, samples=20)
    g0 = tr.lyapunov[0]
    assert g0 == pytest.approx(g_lambda_sym(f0, lam).deficit, rel=1e-14)
    assert abs(tr.lyapunov_drop - tr.integral_of_dissipation) <= 1e-6 * g0
    assert tr.mass_drift <= 1e-8
    assert tr.max_lyapunov_increase <= 0.0


def test_rigidity_rate_matches_remainder():
    f0 = normalize_sym(families.zlinear(G48, 0.8))
    tr = run_rigidity_flow(f0, 1.0, T=0.5, dt=1e-3, samples=5)
    rate = np.asarray(tr.extras["dG_dt"])
    rem = np.asarray(tr.dissipation)
    assert np.all(np.abs(rate + rem) <= 1e-6 * rem + 1e-14)


def test_rigidity_rejects_unnormalised_data():
    with pytest.raises(InadmissibleInput):
        run_rigidity_flow(families.zlinear(G48, 1.0, 0.3))
    with pytest.raises(InadmissibleInput):
        run_rigidity_flow(normalize_sym(families.zlinear(G48)), T=-1.0)


# -- fast diffusion --------------------------------------------------------------------

@pytest.mark.parametrize("D, m", [(1.0, 0.5), (2.5, 0.5), (0.7, 0.7)])
def test_barenblatt_mass_closed_form_and_fit(D, m):
    oracle = quad(lambda r: 2 * np.pi * r * (D + r * r) ** (1 / (m - 1)), 0, np.inf)[0]
    assert barenblatt_mass(D, m) == pytest.approx(oracle, rel=1e-10)
    assert fit_barenblatt_D(make_grid(128), oracle, m) == pytest.approx(D, rel=1e-9)


def test_barenblatt_is_stationary():
    v = families.barenblatt_field(G64, 1.0, 0.5)
    tr = run_fast_diffusion(v, 0.5, T=1.0, dt=1e-2, samples=10, D=1.0)
    assert max(tr.dissipation) <= 1e-10
    assert tr.mass_drift <= 1e-12
    assert bakry_emery_remainder(v) < 1e-12


def test_fast_diffusion_entropy_rate_dense_samples():
    v0 = _perturbed_barenblatt(G48, 0.5, 0.7)
    tr = run_fast_diffusion(v0, 0.7, T=0.5, dt=1e-3, samples=50)
    rate = np.asarray(tr.extras["dE_dt"])
    fisher = np.asarray(tr.dissipation)
    assert np.all(np.abs(rate + fisher) <= 1e-3 * fisher)
    # the same rate from differences of E along the trace
    t = np.asarray(tr.t)
    fd = np.gradient(np.asarray(tr.lyapunov), t)
    assert np.max(np.abs(fd[1:-1] + fisher[1:-1]) / fisher[1:-1]) < 1e-2
    assert tr.mass_drift <= 1e-9 * tr.mass[0]
    assert np.all(np.diff(tr.lyapunov) < 0)


def test_fast_diffusion_validation():
    v = families.barenblatt_field(G48)
    with pytest.raises(InadmissibleInput):
        run_fast_diffusion(v, m=1.0)
    with pytest.raises(InadmissibleInput):
        run_fast_diffusion(v.with_values(-v.values))


def test_mass_neutral_decays_and_normalises():
    u = mass_neutral(families.bump(G64, 0.8))
    assert log_mean_exp(u) == pytest.approx(0.0, abs=1e-14)
    # the correction is c (1 - z)/2, which vanishes at infinity (z -> 1)
    assert abs(u.values[-1]) < 1e-3


@pytest.mark.parametrize("amp", [-0.8, 0.3, 1.0])
def test_fd_inequality_on_normalised_bumps(amp):
    u = mass_neutral(families.bump(make_grid(128), amp))
    pair = entropy_fisher(u.with_values(np.exp(u.values)), 1.0, 0.5)
    assert pair.gap >= -1e-9
    # at D = 1 the gap is pi times the Onofri deficit
    assert pair.gap == pytest.approx(np.pi * onofri_deficit(u).deficit, rel=1e-10)


def test_entropy_production_integral_uses_one_over_two_pi():
    res = bakry_emery_integral(families.bump(G48, 0.5), T=8.0, factor=1.0 / (2.0 * np.pi))
    assert res.converged
    assert res.gap0 == pytest.approx(np.pi * res.lhs, rel=1e-10)
    assert res.discrepancy <= 1e-2 * res.lhs


# -- log diffusion --------------------------------------------------------------------

def test_log_diffusion_rate_identity_and_mass():
    u0 = _half_mass_normalised(families.zlinear(G64, 1.0))
    tr = run_log_diffusion(u0, T=0.5, dt=1e-3, samples=25)
    rate = np.asarray(tr.extras["dH_dt"])
    bracket = np.asarray(tr.dissipation)
    assert np.max(np.abs(rate + bracket)) < 1e-10
    assert tr.mass_drift < 1e-9
    assert tr.lyapunov_drop == pytest.approx(tr.integral_of_dissipation, abs=1e-10)


def test_log_diffusion_bracket_changes_sign():
    # the dissipation is not a sign-definite quantity: H is not a Lyapunov function
    u0 = _half_mass_normalised(families.zlinear(G64, 1.0))
    tr = run_log_diffusion(u0, T=0.5, dt=1e-3, samples=50)
    assert min(tr.dissipation) < -1e-6
    assert tr.max_lyapunov_increase > 0.0


@pytest.mark.parametrize("a, gap", [(0.1, -8.9e-6), (0.5, -5.5e-3)])
def test_jensen_counterexample(a, gap):
    # f = 1 + a z, u = 2 log f, normalised since 1/2 int f dz = 1
    oracle = (np.log(quad(lambda z: 0.5 * (1 + a * z) ** 2, -1, 1)[0])
              - quad(lambda z: 0.5 * 2 * np.log(1 + a * z) * (1 + a * z), -1, 1)[0])
    assert oracle == pytest.approx(gap, rel=2e-2)
    f = 1.0 + a * G64.z
    assert log_diffusion_diagnostics(G64, f)["jensen"] == pytest.approx(oracle, abs=1e-13)


def test_log_diffusion_requires_half_mass():
    with pytest.raises(InadmissibleInput):
        run_log_diffusion(families.zlinear(G48, 1.0))


# -- traces ---------------------------------------------------------------------------

def test_trace_csv_round_trip():
    tr = run_rigidity_flow(normalize_sym(families.zlinear(G48, 0.5)), T=0.1, dt=1e-2, samples=3)
    text = tr.to_csv({"n": 48})
    assert text.startswith("# onofri-lab/trace/v1 kind=rigidity n=48\n")
    cols = read_trace_csv(text)
    assert np.array_equal(cols["lyapunov"], np.asarray(tr.lyapunov))
    with pytest.raises(ValueError):
        read_trace_csv("a,b\n1,2\n")


def test_exponential_tail_is_exact_on_exponentials():
    t = np.linspace(0, 5, 51)
    tail, rate = exponential_tail(t, 3.0 * np.exp(-2.0 * t))
    assert rate == pytest.approx(2.0, rel=1e-10)
    assert tail == pytest.approx(1.5 * np.exp(-10.0), rel=1e-10)
    assert exponential_tail(t, np.zeros_like(t)) == (0.0, np.inf)
