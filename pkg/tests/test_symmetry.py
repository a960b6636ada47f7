import math

import numpy as np
import pytest

from heismag import (
    GroupElement,
    IsometryScaling,
    Isotropy,
    LorentzForce,
    act_on_curve,
    act_on_force,
    canonicalize,
    isotropy_description,
    orbit_equal,
    solve,
    solve_canonical,
)
from heismag.oracle import magnetic_residual
from heismag.symmetry import S, isotropy_elements, rotation

from families import as_array, random_force, random_ic

I2 = np.eye(2)
T = np.linspace(-6.0, 6.0, 121)


def forces_close(F, G, tol=1e-12):
    return np.max(np.abs(as_array(F) - as_array(G))) <= tol


def random_isometry(rng):
    B = rotation(rng.uniform(0, 2 * math.pi))
    if rng.random() < 0.5:
        B = B @ S
    r = rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 3.0)
    return IsometryScaling(B, r)


def test_identity_action():
    F = LorentzForce(0.3, -1.2, 0.7)
    assert forces_close(act_on_force(IsometryScaling.identity(), F), F)


def test_minus_identity_flips_rho():
    F = LorentzForce(0.3, -1.2, 0.7)
    assert forces_close(act_on_force(IsometryScaling(-I2, -1.0), F), LorentzForce(0.3, -1.2, -0.7))


def test_rotation_to_e1():
    # the rotation taking (0, 2) to (2, 0)
    t = IsometryScaling(rotation(-math.pi / 2), 0.5)
    assert forces_close(act_on_force(t, LorentzForce(0.0, 2.0, 0.0)), LorentzForce(1.0, 0.0, 0.0))


def test_rejects_bad_elements():
    with pytest.raises(ValueError):
        IsometryScaling(I2, 0.0)
    with pytest.raises(ValueError):
        IsometryScaling(np.array([[1.0, 0.1], [0.0, 1.0]]), 1.0)


def test_canonicalize_exact_scale():
    o = canonicalize(LorentzForce(0.0, 0.0, 2.0))
    assert o.kind == "exact"
    assert forces_close(o.canonical, LorentzForce(0.0, 0.0, 1.0))
    assert o.witness.r == pytest.approx(0.5)


def test_canonicalize_negative_rho():
    o = canonicalize(LorentzForce(1.0, 0.0, -3.0))
    assert forces_close(o.canonical, LorentzForce(1.0, 0.0, 3.0))
    assert np.allclose(o.witness.B, -I2) and o.witness.r == -1.0


def test_canonicalize_scaled_rho():
    o = canonicalize(LorentzForce(0.0, 2.0, 1.0))
    assert o.rho == pytest.approx(0.5)
    assert forces_close(o.canonical, LorentzForce(1.0, 0.0, 0.5))


def test_canonicalize_zero():
    o = canonicalize(LorentzForce(0.0, 0.0, 0.0))
    assert o.kind == "zero"


@pytest.mark.parametrize("seed", range(20))
def test_witness_reproduces_canonical(seed):
    rng = np.random.default_rng(seed)
    F = random_force(rng)
    o = canonicalize(F)
    assert o.canonical.rho >= 0
    assert forces_close(act_on_force(o.witness, F), o.canonical)


@pytest.mark.parametrize("seed", range(20))
def test_canonical_form_is_orbit_invariant(seed):
    rng = np.random.default_rng(1000 + seed)
    F = random_force(rng)
    G = act_on_force(random_isometry(rng), F)
    assert orbit_equal(F, G)
    assert canonicalize(F).kind == canonicalize(G).kind
    assert canonicalize(F).rho == pytest.approx(canonicalize(G).rho, rel=1e-10)


def test_orbit_equal_examples():
    assert orbit_equal(LorentzForce(1.0, 0.0, 1.0), LorentzForce(0.0, 5.0, 5.0))
    assert not orbit_equal(LorentzForce(1.0, 0.0, 0.0), LorentzForce(1.0, 0.0, 1.0))
    F = LorentzForce(0.2, 0.4, -0.9)
    assert orbit_equal(F, F)
    assert not orbit_equal(LorentzForce(0.0, 0.0, 1.0), LorentzForce(1.0, 0.0, 1.0))
    assert orbit_equal(LorentzForce(0.0, 0.0, 1.0), LorentzForce(0.0, 0.0, -4.0))


def test_isotropy_descriptions():
    assert isotropy_description(LorentzForce(1.0, 0.0, 2.0)) is Isotropy.GENERIC_PAIR
    assert isotropy_description(LorentzForce(1.0, 0.0, 0.0)) is Isotropy.HARMONIC_FOUR
    assert isotropy_description(LorentzForce(0.0, 0.0, 1.0)) is Isotropy.EXACT_CIRCLE
    assert isotropy_description(LorentzForce(0.0, 0.0, 0.0)) is Isotropy.FULL
    assert str(Isotropy.GENERIC_PAIR) == "GenericPair"


@pytest.mark.parametrize(
    "F",
    [LorentzForce(1.0, 0.0, 2.0), LorentzForce(1.0, 0.0, 0.0), LorentzForce(0.0, 0.0, 1.0),
     LorentzForce(0.6, -0.8, 1.5), LorentzForce(0.0, 2.0, 0.0), LorentzForce(0.0, 0.0, -2.0)],
)
def test_isotropy_elements_fix_force_and_curves(F):
    els = isotropy_elements(F, n_circle=4)
    ic = (0.4, -0.3, 0.2)
    g = solve(F, ic)
    for e in els:
        assert forces_close(act_on_force(e, F), F, tol=1e-12)
        moved = act_on_curve(e, g)
        assert np.max(np.abs(magnetic_residual(moved, F, T))) <= 1e-6


def test_compose_and_inverse():
    rng = np.random.default_rng(7)
    for _ in range(10):
        a, b = random_isometry(rng), random_isometry(rng)
        a = IsometryScaling(a.B, a.r, GroupElement(*rng.normal(size=3)))
        pts = rng.normal(size=(5, 3))
        assert np.allclose((a @ b).apply(pts), a.apply(b.apply(pts)), atol=1e-13)
        e = a @ a.inverse()
        assert np.allclose(e.B, I2, atol=1e-14) and e.r == pytest.approx(1.0)
        assert np.allclose(e.apply(pts), pts, atol=1e-13)
        F = random_force(rng)
        assert forces_close(act_on_force(a @ b, F), act_on_force(a, act_on_force(b, F)))


def test_orthogonality_invariant():
    rng = np.random.default_rng(3)
    for _ in range(50):
        t = random_isometry(rng)
        assert np.max(np.abs(t.B.T @ t.B - I2)) <= 1e-14


def test_translation_is_isometry_of_group_law():
    from heismag import group_mul

    p = GroupElement(0.3, -1.1, 0.4)
    t = IsometryScaling(I2, 1.0, p)
    q = np.array([0.7, 0.2, -0.5])
    assert np.allclose(t.apply(q), group_mul(p, GroupElement(*q)).as_array(), atol=1e-15)


def test_act_on_curve_identity_and_scaling():
    g = solve_canonical((0.5, 0.2, -0.1), 1.0)
    same = act_on_curve(IsometryScaling.identity(), g)
    assert np.max(np.abs(same(T) - g(T))) == 0.0
    fast = act_on_curve(IsometryScaling(I2, 2.0), g)
    s = g(2 * T)
    assert np.max(np.abs(fast.position(T) - s[:, :3])) == 0.0
    assert np.max(np.abs(fast.velocity(T) - 2 * s[:, 3:])) <= 1e-15


def test_reflection_reverses_time():
    g = solve_canonical((0.5, 0.2, -0.1), 1.0)
    sigma = act_on_curve(IsometryScaling(S, -1.0), g)
    assert np.max(np.abs(sigma.position(T) - g.position(-T) * np.array([1, -1, -1]))) <= 1e-15


@pytest.mark.parametrize("seed", range(10))
def test_transformed_solution_is_magnetic(seed):
    rng = np.random.default_rng(500 + seed)
    F = random_force(rng)
    g = solve(F, random_ic(rng))
    t = random_isometry(rng)
    moved = act_on_curve(t, g)
    res = magnetic_residual(moved, act_on_force(t, F), np.linspace(-4, 4, 81))
    assert np.max(np.abs(res)) <= 1e-6
