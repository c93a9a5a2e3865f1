import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from oracles import exact_sample, star_region
from singular_euler import (
    DomainError,
    GasModel,
    GasState,
    InconsistentStatesError,
    Side,
    VacuumError,
    WaveFamily,
    WaveKind,
    contact_state,
    eigenvalues,
    entropy_invariant,
    mirror_state,
    rarefaction_state,
    sample_crp,
    shock_speed,
    shock_state,
    solve_crp,
    sound_speed,
    wave_curve_velocity,
)
from singular_euler.waves import rh_residual, riemann_invariant

G = GasModel(1.4)
SOD_L = GasState(1.0, 0.0, 1.0)
SOD_R = GasState(0.125, 0.0, 0.1)

# bisection oracle, frozen
SOD_P_STAR = 0.30313017805064684
SOD_U_STAR = 0.92745262004895


@st.composite
def states(draw, umax=3.0):
    return GasState(draw(st.floats(0.05, 5.0)), draw(st.floats(-umax, umax)), draw(st.floats(0.05, 5.0)))


gammas = st.floats(1.1, 2.0)


# ------------------------------------------------------------ wave curves


def test_shock_state_zero_strength_returns_anchor():
    assert shock_state(WaveFamily.ONE, 1.0, SOD_L, G) is SOD_L
    assert rarefaction_state(WaveFamily.THREE, 1.0, SOD_L, G) is SOD_L


def test_shock_state_example():
    s = shock_state(WaveFamily.ONE, 2.0, SOD_L, G)
    assert s.rho == pytest.approx(1.625, rel=1e-14)
    # direct evaluation of the 1-shock curve, frozen
    assert s.u == pytest.approx(-math.sqrt(2.0 / 5.2), rel=1e-14)
    assert s.u == pytest.approx(-0.6201736729460423, abs=1e-12)


def test_shock_speed_example():
    s = shock_state(WaveFamily.ONE, 2.0, SOD_L, G)
    sigma = shock_speed(WaveFamily.ONE, SOD_L, s, G)
    # mass-equation quotient as the independent route
    assert sigma == pytest.approx((s.rho * s.u) / (s.rho - 1.0), rel=1e-12)
    assert sigma == pytest.approx(-1.6124515496597098, abs=1e-12)


def test_shock_strong_limit():
    s = shock_state(WaveFamily.ONE, 1e12, SOD_L, G)
    assert s.rho == pytest.approx(6.0, rel=1e-10)


def test_shock_state_domain():
    with pytest.raises(DomainError):
        shock_state(WaveFamily.ONE, 0.5, SOD_L, G)
    with pytest.raises(ValueError):
        shock_state(WaveFamily.TWO, 2.0, SOD_L, G)


def test_rarefaction_state_example():
    s = rarefaction_state(WaveFamily.ONE, 0.5, SOD_L, G)
    assert s.rho == pytest.approx(0.5 ** (1 / 1.4), rel=1e-14)
    assert s.rho == pytest.approx(0.6095068, abs=1e-7)
    assert s.u == pytest.approx(-(2 * math.sqrt(1.4) / 0.4) * (0.5 ** (1 / 7) - 1), rel=1e-14)
    assert s.u == pytest.approx(0.5577463, abs=1e-7)


def test_rarefaction_escape_velocity():
    s = rarefaction_state(WaveFamily.ONE, 1e-300, SOD_L, G)
    assert s.u == pytest.approx(2 * sound_speed(SOD_L, G) / 0.4, rel=1e-12)


def test_rarefaction_state_domain():
    with pytest.raises(DomainError):
        rarefaction_state(WaveFamily.ONE, 2.0, SOD_L, G)
    with pytest.raises(DomainError):
        rarefaction_state(WaveFamily.ONE, 0.0, SOD_L, G)


def test_contact_state():
    assert contact_state(SOD_L, 1.0) == SOD_L
    s = contact_state(SOD_L, 3.0)
    assert (s.u, s.p, s.rho) == (SOD_L.u, SOD_L.p, 3.0)
    with pytest.raises(ValueError):
        contact_state(SOD_L, 0.0)


def test_wave_curve_velocity_at_anchor():
    for side in Side:
        assert wave_curve_velocity(side, SOD_L.p, SOD_L, G) == SOD_L.u


def test_wave_curve_monotone_on_random_anchors():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = GasState(rng.uniform(0.1, 3), rng.uniform(-2, 2), rng.uniform(0.1, 3))
        ps = np.geomspace(1e-3 * a.p, 1e3 * a.p, 1000)
        left = np.array([wave_curve_velocity(Side.FROM_LEFT_STATE, p, a, G) for p in ps])
        right = np.array([wave_curve_velocity(Side.FROM_RIGHT_STATE, p, a, G) for p in ps])
        assert np.all(np.diff(left) < 0)
        assert np.all(np.diff(right) > 0)


def test_wave_curve_c1_at_anchor():
    a = GasState(0.7, 0.3, 1.3)
    h = 1e-6
    for side in Side:
        d_lo = (wave_curve_velocity(side, a.p, a, G) - wave_curve_velocity(side, a.p - h, a, G)) / h
        d_hi = (wave_curve_velocity(side, a.p + h, a, G) - wave_curve_velocity(side, a.p, a, G)) / h
        assert d_lo == pytest.approx(d_hi, rel=1e-4)


def test_shock_speed_inconsistent_states():
    with pytest.raises(InconsistentStatesError):
        shock_speed(WaveFamily.ONE, SOD_L, GasState(2.0, -0.1, 2.0), G)


def test_zero_strength_shock_speed_is_characteristic():
    assert shock_speed(WaveFamily.ONE, SOD_L, SOD_L, G) == eigenvalues(SOD_L, G)[0]
    assert shock_speed(WaveFamily.THREE, SOD_L, SOD_L, G) == eigenvalues(SOD_L, G)[2]


@given(states(), st.floats(1.0001, 50.0), gammas)
def test_lax_and_rh_for_random_shocks(anchor, ratio, g):
    m = GasModel(g)
    post = shock_state(WaveFamily.ONE, ratio * anchor.p, anchor, m)
    sigma = shock_speed(WaveFamily.ONE, anchor, post, m)
    assert eigenvalues(anchor, m)[0] > sigma > eigenvalues(post, m)[0]
    assert rh_residual(anchor, post, sigma, m) <= 1e-10
    assert post.rho / anchor.rho < (g + 1) / (g - 1)
    pre3 = shock_state(WaveFamily.THREE, ratio * anchor.p, anchor, m)
    s3 = shock_speed(WaveFamily.THREE, pre3, anchor, m)
    assert eigenvalues(pre3, m)[2] > s3 > eigenvalues(anchor, m)[2]


@given(states(), st.floats(1e-4, 0.9999), gammas)
def test_rarefaction_invariants(anchor, ratio, g):
    m = GasModel(g)
    s = rarefaction_state(WaveFamily.ONE, ratio * anchor.p, anchor, m)
    j0 = riemann_invariant(anchor, WaveFamily.ONE, m)
    assert abs(riemann_invariant(s, WaveFamily.ONE, m) - j0) <= 1e-10 * (abs(j0) + sound_speed(anchor, m))
    assert entropy_invariant(s, m) == pytest.approx(entropy_invariant(anchor, m), rel=1e-12)


# ------------------------------------------------------------- solve_crp


def test_sod_star_values():
    sol = solve_crp(SOD_L, SOD_R, G)
    assert sol.p_star == pytest.approx(SOD_P_STAR, rel=1e-10)
    assert sol.u_star == pytest.approx(SOD_U_STAR, rel=1e-10)
    assert sol.p_star == pytest.approx(0.30313, abs=1e-5)
    assert sol.u_star == pytest.approx(0.92745, abs=1e-5)


def test_frozen_sod_matches_live_oracle():
    p, u = star_region(SOD_L.as_tuple(), SOD_R.as_tuple(), 1.4)
    assert p == pytest.approx(SOD_P_STAR, rel=1e-12)
    assert u == pytest.approx(SOD_U_STAR, rel=1e-12)


def test_sod_wave_kinds_and_order():
    sol = solve_crp(SOD_L, SOD_R, G)
    kinds = [w.kind for w in sol.waves]
    assert kinds == [WaveKind.RAREFACTION, WaveKind.CONTACT, WaveKind.SHOCK]
    speeds = [x for w in sol.waves for x in (w.speed_lo, w.speed_hi)]
    assert speeds == sorted(speeds)


def test_identical_states_trivial_solution():
    s = GasState(0.8, 0.4, 1.2)
    sol = solve_crp(s, s, G)
    assert sol.p_star == s.p and sol.u_star == s.u
    assert all(w.is_trivial for w in sol.waves)
    for xi in np.linspace(-3, 3, 13):
        assert sample_crp(sol, xi) == s


def test_symmetric_expansion_has_zero_velocity():
    sol = solve_crp(GasState(1, -0.5, 1), GasState(1, 0.5, 1), G)
    assert abs(sol.u_star) < 1e-14


def test_vacuum_detected():
    with pytest.raises(VacuumError):
        solve_crp(GasState(1, -10, 1), GasState(1, 10, 1), G)


def test_sample_limits_and_fan():
    sol = solve_crp(SOD_L, SOD_R, G)
    assert sample_crp(sol, -10.0) == SOD_L
    assert sample_crp(sol, 10.0) == SOD_R
    fan = sol.waves[0]
    for xi in np.linspace(fan.speed_lo, fan.speed_hi, 9)[1:-1]:
        s = sample_crp(sol, xi)
        assert eigenvalues(s, G)[0] == pytest.approx(xi, rel=1e-10, abs=1e-14)
    # the origin sits inside the left fan for Sod; compare with the textbook sampler
    s0 = sample_crp(sol, 0.0)
    assert s0.as_tuple() == pytest.approx(exact_sample(SOD_L.as_tuple(), SOD_R.as_tuple(), 1.4, 0.0), rel=1e-10)


def test_sample_is_function_of_similarity_variable():
    sol = solve_crp(SOD_L, SOD_R, G)
    for x in np.linspace(-1, 1, 21):
        assert sample_crp(sol, x / 0.3) == sample_crp(sol, (2 * x) / (2 * 0.3))


@given(states(), states(), gammas)
def test_crp_matches_textbook_sampler(ul, ur, g):
    m = GasModel(g)
    assume(ur.u - ul.u < 0.9 * 2 * (sound_speed(ul, m) + sound_speed(ur, m)) / (g - 1))
    sol = solve_crp(ul, ur, m)
    assert abs(wave_curve_velocity(Side.FROM_LEFT_STATE, sol.p_star, ul, m)
               - wave_curve_velocity(Side.FROM_RIGHT_STATE, sol.p_star, ur, m)) \
        <= 1e-10 * max(abs(sol.u_star), sound_speed(ul, m))
    # even count keeps the grid off xi = 0, where one-sided conventions differ
    for xi in np.linspace(-6, 6, 24):
        a = sample_crp(sol, xi).as_tuple()
        b = exact_sample(ul.as_tuple(), ur.as_tuple(), g, xi)
        assert a[0] == pytest.approx(b[0], rel=1e-9)
        assert a[2] == pytest.approx(b[2], rel=1e-9)
        assert a[1] == pytest.approx(b[1], abs=1e-9 * (abs(b[1]) + sound_speed(ul, m)))


@given(states(), states())
def test_crp_mirror_covariance(ul, ur):
    assume(ur.u - ul.u < 0.9 * 5 * (sound_speed(ul, G) + sound_speed(ur, G)))
    a = solve_crp(ul, ur, G)
    b = solve_crp(mirror_state(ur), mirror_state(ul), G)
    assert b.p_star == pytest.approx(a.p_star, rel=1e-10)
    assert b.u_star == pytest.approx(-a.u_star, abs=1e-10 * (abs(a.u_star) + 1))
    for xi in (-2.0, -0.7, 0.3, 1.9):
        # a right limit maps to a left limit under the reflection
        s = sample_crp(a, xi, "+")
        t = mirror_state(sample_crp(b, -xi, "-"))
        assert s.as_tuple() == pytest.approx(t.as_tuple(), rel=1e-9, abs=1e-9)
