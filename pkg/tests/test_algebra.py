from fractions import Fraction

import numpy as np
import pytest

from heismag.algebra import (
    E1,
    E2,
    E3,
    IDENTITY,
    AlgebraVector,
    GroupElement,
    LorentzForce,
    bracket,
    exterior_derivative,
    force_matrix,
    group_inv,
    group_mul,
    left_frame_velocity,
    two_form_coefficients,
    two_form_eval,
)


def _g(rng):
    return GroupElement(*rng.normal(size=3))


def test_identity_and_known_product():
    g = GroupElement(1.5, -2.0, 0.25)
    assert IDENTITY * g == g and g * IDENTITY == g
    assert group_mul(GroupElement(1, 0, 0), GroupElement(0, 1, 0)) == GroupElement(1, 1, 0.5)


def test_inverse():
    g = GroupElement(0.3, -1.1, 2.0)
    assert g * group_inv(g) == GroupElement(0.0, 0.0, 0.0)
    assert group_inv(g) * g == GroupElement(0.0, 0.0, 0.0)


def test_associativity(rng):
    for _ in range(200):
        a, b, c = _g(rng), _g(rng), _g(rng)
        lhs = ((a * b) * c).as_array()
        rhs = (a * (b * c)).as_array()
        assert np.max(np.abs(lhs - rhs)) <= 1e-12


def test_product_is_not_commutative():
    a, b = GroupElement(1, 0, 0), GroupElement(0, 1, 0)
    assert (a * b).z == 0.5 and (b * a).z == -0.5


def test_bracket():
    assert bracket(E1, E2) == E3
    assert bracket(E2, E1) == -E3
    v = AlgebraVector(0.3, 0.4, -2.0)
    assert bracket(v, v) == AlgebraVector(0.0, 0.0, 0.0)
    assert bracket(E3, E1) == AlgebraVector(0.0, 0.0, 0.0)


def test_bracket_bilinear(rng):
    u, v, w = (AlgebraVector(*rng.normal(size=3)) for _ in range(3))
    s = 1.7
    lhs = bracket(u * s + w, v).as_array()
    rhs = (bracket(u, v) * s + bracket(w, v)).as_array()
    assert np.allclose(lhs, rhs, atol=1e-14)


def test_left_frame_velocity():
    assert left_frame_velocity(IDENTITY, (1.0, 2.0, 3.0)) == AlgebraVector(1.0, 2.0, 3.0)
    assert left_frame_velocity(GroupElement(4, 5, 6), (0, 0, 1)) == AlgebraVector(0, 0, 1)
    u = left_frame_velocity(GroupElement(0, 2, 0), (1, 0, 0))
    assert u == AlgebraVector(1.0, 0.0, 1.0)
    # metric at (0, 2, 0) on (1, 0, 0) is (1 + y^2 / 4) = 2
    assert u.norm() ** 2 == pytest.approx(2.0, abs=1e-15)


def test_two_form_values():
    rho = 2.5
    assert two_form_eval(LorentzForce(0, 0, rho), E1, E2) == rho
    assert two_form_eval(LorentzForce(1, 0, 0), E1, E3) == 1.0


def test_two_form_antisymmetric(rng):
    basis = [E1, E2, E3]
    for _ in range(20):
        F = LorentzForce(*rng.normal(size=3))
        for u in basis:
            assert two_form_eval(F, u, u) == 0.0
            for v in basis:
                assert two_form_eval(F, u, v) == -two_form_eval(F, v, u)


def test_matrix_skew():
    F = LorentzForce(0.3, -0.7, 1.9)
    M = force_matrix(F)
    assert np.array_equal(M, -M.T)


def test_kernel_exact():
    for vals in [(1, 0, 1), (Fraction(3, 7), Fraction(-2, 5), Fraction(11, 3)), (0, 2, 0), (0, 0, 1)]:
        F = LorentzForce(*vals)
        M = force_matrix(F, exact=True)
        k = [Fraction(v) for v in F.kernel()]
        out = [sum(M[i][j] * k[j] for j in range(3)) for i in range(3)]
        assert out == [0, 0, 0]


def test_two_form_closed(rng):
    for _ in range(10):
        F = LorentzForce(*rng.normal(size=3))
        pts = rng.uniform(-3, 3, size=(50, 3))
        d = exterior_derivative(two_form_coefficients(F), pts)
        assert np.max(np.abs(d)) <= 1e-6


def test_exterior_derivative_detects_non_closed():
    def coeffs(x, y, z):
        return x * z, np.zeros_like(x), np.zeros_like(x)

    d = exterior_derivative(coeffs, np.array([[1.0, 2.0, 3.0]]))
    assert d[0] == pytest.approx(1.0, abs=1e-8)
