import math

import numpy as np
import pytest

from heismag import (
    Case,
    IsometryScaling,
    LorentzForce,
    act_on_curve,
    classify,
    ellip_K,
    period_and_image,
    solve,
    solve_canonical,
    solve_exact,
    solve_x,
)
from heismag.oracle import integrate_reduced, magnetic_residual, IntegrationConfig
from heismag.symmetry import S, rotation
from heismag.trajectory import frame_velocity

from families import CANONICAL, FAMILIES, PERIODIC, as_array, standard_grid

T = np.linspace(-10.0, 10.0, 401)


def family_ids():
    return [name for name, _, _ in FAMILIES]


@pytest.mark.parametrize("name,ic,case", FAMILIES, ids=family_ids())
def test_x_initial_values(name, ic, case):
    x = solve_x(classify(ic, 1.0))
    v, s = x.both(np.array([0.0]))
    assert abs(v[0]) <= 1e-8
    assert abs(s[0] - ic[0]) <= 1e-8


@pytest.mark.parametrize("label,F,ic", standard_grid(), ids=[g[0] for g in standard_grid()])
def test_trajectory_starts_at_identity(label, F, ic):
    g = solve(F, ic)
    s = g(0.0)
    assert np.max(np.abs(s[:3])) <= 1e-10
    assert np.max(np.abs(frame_velocity(s[None, :])[0] - as_array(ic))) <= 1e-10


def test_trivial_is_one_parameter_subgroup():
    # (y0 + 1)(z0 + rho) = rho with x0 = 0
    ic = (0.0, 1.0, -0.5)
    g = solve_canonical(ic, 1.0)
    assert g.case == "Trivial"
    t = np.linspace(-3, 3, 13)
    assert np.allclose(g.position(t), np.outer(t, ic), atol=1e-14)


def test_constant_solution_at_rest():
    g = solve_canonical((0.0, 0.0, 0.0), 1.0)
    assert np.all(g(np.linspace(0, 5, 11)) == 0.0)


def test_exact_unit_circle():
    g = solve_exact((1.0, 0.0, 0.0), 1.0)
    t = np.linspace(-4, 4, 81)
    expect = np.stack([np.sin(t), 1 - np.cos(t), 0.5 * (t - np.sin(t))], axis=1)
    assert np.max(np.abs(g.position(t) - expect)) <= 1e-14
    assert g.period == pytest.approx(2 * math.pi)


@pytest.mark.parametrize("rho", [1.0, -0.7, 2.5])
def test_exact_straight_line_when_z0_cancels_rho(rho):
    ic = (1.0, 2.0, -rho)
    g = solve_exact(ic, rho)
    t = np.linspace(-3, 3, 7)
    assert np.allclose(g.position(t), np.outer(t, ic), atol=1e-14)


def test_exact_vertical():
    g = solve_exact((0.0, 0.0, 0.8), 1.0)
    t = np.linspace(-3, 3, 7)
    p = g.position(t)
    assert np.all(p[:, :2] == 0.0)
    assert np.allclose(p[:, 2], 0.8 * t, atol=1e-15)


def test_exact_small_rotation_rate_series():
    # c t straddles the series cut-off; compare against the direct formula in extended precision
    import mpmath as mp

    c = 3e-3
    g = solve_exact((0.6, -0.4, c - 1.0), 1.0)
    t = np.linspace(0.1, 8.0, 40)
    got = g.position(t)[:, 2]
    mp.mp.dps = 40
    ref = [float((c - 1.0) * mp.mpf(s) + 0.5 * 0.52 * (c * mp.mpf(s) - mp.sin(c * mp.mpf(s))) / c**2) for s in t]
    assert np.max(np.abs(got - ref)) <= 1e-13


def test_negative_x0_is_reflection():
    g = solve_canonical((-1.0, 0.0, 0.0), 1.0)
    h = act_on_curve(IsometryScaling(S, -1.0), solve_canonical((1.0, 0.0, 0.0), 1.0))
    assert np.max(np.abs(g(T) - h(T))) <= 1e-12


def test_reflected_curve_formula():
    # (S, -1) gamma = (x(-t), -y(-t), -z(-t))
    base = solve_canonical((0.8, 0.3, 0.2), 1.0)
    g = solve_canonical((-0.8, 0.3, 0.2), 1.0)
    p = base.position(-T)
    assert np.max(np.abs(g.position(T) - p * np.array([1, -1, -1]))) <= 1e-12


FROZEN_PERIODS = {
    # K(k) quadrature in 30 digits
    "NegDelta": 4.644881165578883,
    "PosDeltaHigh": 4.470917095050917,
    "PosDeltaLow": 4.498452886588275,
}

FROZEN_IMAGES = {
    "NegDelta": (0.0, 1.3646556076560387),
    "PosDeltaHigh": (0.0, 3.44681182036553),
    "PosDeltaLow": (-1.3722813232690143, 0.0),
    "ZeroDeltaMuPos": (0.0, 3.1748021039363990),
    "ZeroDeltaMuNegRight": (-3.7797631496846195, 0.0),
    "ZeroDeltaMuNegLeft": (0.0, 3.5),
    "ZeroDeltaCubic": (-4.0, 0.0),
}


@pytest.mark.parametrize("name,ic,case", FAMILIES, ids=family_ids())
def test_period_and_image_frozen(name, ic, case):
    a = classify(ic, 1.0)
    period, image = period_and_image(a)
    lo, hi = FROZEN_IMAGES[case]
    assert image.lo == pytest.approx(lo, abs=1e-9)
    assert image.hi == pytest.approx(hi, abs=1e-9)
    if case in FROZEN_PERIODS:
        assert period == pytest.approx(FROZEN_PERIODS[case], rel=1e-12)
    elif case == "ZeroDeltaMuPos":
        assert period == pytest.approx(2 * math.pi / math.sqrt(a.mu), rel=1e-14)
    else:
        assert period is None


def test_neg_delta_period_formula():
    a = classify((0.0, 0.0, -1.0), 1.0)
    period, _ = period_and_image(a)
    assert period == pytest.approx(8 * ellip_K(a.k) / math.sqrt(a.delta1 * a.delta4), rel=1e-14)


def test_half_open_images():
    _, right = period_and_image(classify(FAMILIES[4][1], 1.0))
    _, left = period_and_image(classify(FAMILIES[5][1], 1.0))
    assert not right.lo_closed and right.hi_closed
    assert left.lo_closed and not left.hi_closed


@pytest.mark.parametrize("name,ic,case", FAMILIES, ids=family_ids())
def test_x_stays_in_image_and_repeats(name, ic, case):
    a = classify(ic, 1.0)
    x = solve_x(a)
    period, image = period_and_image(a)
    xs = x(T)
    assert np.all(image.contains(xs, slack=1e-8))
    if case in PERIODIC:
        grid = np.linspace(0, period, 97)
        assert np.max(np.abs(x(grid + period) - x(grid))) <= 1e-6


@pytest.mark.parametrize("name,ic,case", FAMILIES, ids=family_ids())
def test_reduced_ode_residual(name, ic, case):
    a = classify(ic, 1.0)
    x = solve_x(a)
    c = a.shift
    h = 1e-4
    t = np.linspace(-8, 8, 161)
    xv = x(t)
    xpp = (x(t + h) - 2 * xv + x(t - h)) / h**2
    hx = 0.5 * xv**2 + c * xv + ic[1] + 1.0
    assert np.max(np.abs(xpp + (xv + c) * hx - 1.0)) <= 1e-5


@pytest.mark.parametrize("name,ic,case", FAMILIES, ids=family_ids())
def test_first_integral_along_closed_form(name, ic, case):
    a = classify(ic, 1.0)
    x = solve_x(a)
    xv, xp = x.both(np.linspace(-50, 50, 2001))
    c, x0, y0 = a.shift, ic[0], ic[1]
    hx = 0.5 * xv**2 + c * xv + y0 + 1.0
    drift = xp**2 + hx**2 - 2.0 * xv - (x0**2 + (y0 + 1.0) ** 2)
    assert np.max(np.abs(drift)) <= 1e-8


@pytest.mark.parametrize("name,ic,case", FAMILIES[:4], ids=family_ids()[:4])
def test_x_matches_reduced_oracle(name, ic, case):
    x = solve_x(classify(ic, 1.0))
    run = integrate_reduced(ic, 1.0, IntegrationConfig(t_span=(0.0, 10.0)))
    t = np.linspace(0, 10, 201)
    assert np.max(np.abs(x(t) - run(t))) <= 1e-6


def test_cubic_constant():
    a = classify((0.0, 2.0, 2.0), 1.0)
    assert a.case is Case.ZERO_DELTA_CUBIC
    assert a.r == pytest.approx(-1.0, abs=1e-9)
    x = solve_x(a)
    # the approach to the lower end is algebraic, so x is still well inside at t = 50
    assert -4.0 < x(np.array([50.0]))[0] < -3.9


def test_z_is_antiderivative_of_zdot():
    from scipy.integrate import quad

    g = solve_canonical((0.3, 0.2, -0.4), 1.0)
    for t in (1.0, 4.5, -3.0):
        ref, _ = quad(lambda s: g(s)[5], 0.0, t, epsabs=1e-13, limit=200)
        assert g(t)[2] == pytest.approx(ref, abs=1e-9)
        ref_y, _ = quad(lambda s: g(s)[4], 0.0, t, epsabs=1e-13, limit=200)
        assert g(t)[1] == pytest.approx(ref_y, abs=1e-9)


def test_full_residual_neg_delta_unit():
    g = solve_canonical((1.0, 0.0, 0.0), 1.0)
    assert g.case == "NegDelta"
    res = magnetic_residual(g, CANONICAL, np.linspace(-10, 10, 200))
    assert np.max(np.abs(res)) <= 1e-6


@pytest.mark.parametrize("label,F,ic", standard_grid(), ids=[g[0] for g in standard_grid()])
def test_full_residual_and_speed(label, F, ic):
    g = solve(F, ic)
    t = np.linspace(-10, 10, 200)
    assert np.max(np.abs(magnetic_residual(g, F, t))) <= 1e-6
    sp = g.speed(t)
    assert np.max(np.abs(sp - np.linalg.norm(as_array(ic)))) <= 1e-8


def test_large_times():
    g = solve_canonical((0.0, 0.0, -1.0), 1.0)
    t = np.array([1e3, -1e3, 1e4])
    sp = g.speed(t)
    assert np.allclose(sp, 1.0, atol=1e-8)
    assert np.all(np.isfinite(g(t)))


def test_canonical_force_uses_identity_witness():
    ic = (0.4, -0.3, 0.1)
    a, b = solve(CANONICAL, ic), solve_canonical(ic, 1.0)
    assert np.max(np.abs(a(T) - b(T))) <= 1e-15


def test_geodesic_through_solve():
    F0 = LorentzForce(0.0, 0.0, 0.0)
    g = solve(F0, (0.6, 0.8, 0.5))
    assert g.case == "Geodesic"
    assert np.allclose(g.speed(T), math.sqrt(1.25), atol=1e-12)


def test_harmonic_round_trip_velocity():
    F = LorentzForce(0.0, 2.0, 0.0)
    g = solve(F, (0.0, 1.0, 0.0))
    assert np.allclose(frame_velocity(g(0.0)[None, :])[0], [0.0, 1.0, 0.0], atol=1e-12)
    assert g.force == F


@pytest.mark.parametrize("seed", range(6))
def test_equivariance(seed):
    rng = np.random.default_rng(100 + seed)
    rho = rng.uniform(0.2, 2.0)
    ic = tuple(rng.uniform(-1, 1, size=3))
    t_ = IsometryScaling(rotation(rng.uniform(0, 6.28)) @ (S if seed % 2 else np.eye(2)), rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0))
    from heismag import act_on_force

    base = solve_canonical(ic, rho)
    F2 = act_on_force(t_, LorentzForce(1.0, 0.0, rho))
    moved = act_on_curve(t_, base)
    direct = solve(F2, tuple(moved.ic))
    tt = np.linspace(-5, 5, 101)
    assert np.max(np.abs(direct(tt) - moved(tt))) <= 1e-9
