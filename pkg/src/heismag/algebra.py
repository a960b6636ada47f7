"""Arithmetic on the Heisenberg group H3 and its Lie algebra.

Points are written in exponential coordinates, so ``exp(x e1 + y e2 + z e3)``
is the tuple ``(x, y, z)``.  The product is

    (v1, z1)(v2, z2) = (v1 + v2, z1 + z2 + <J v1, v2> / 2),   J(x, y) = (-y, x),

which gives ``[e1, e2] = e3``.  The metric is the left-invariant one making
``e1, e2, e3`` orthonormal; its left-invariant coframe is

    e^1 = dx,   e^2 = dy,   e^3 = dz + (y dx - x dy) / 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

__all__ = [
    "GroupElement",
    "AlgebraVector",
    "LorentzForce",
    "IDENTITY",
    "E1",
    "E2",
    "E3",
    "group_mul",
    "group_inv",
    "bracket",
    "J",
    "left_frame_velocity",
    "two_form_eval",
    "force_matrix",
    "two_form_coefficients",
    "exterior_derivative",
]


@dataclass(frozen=True)
class GroupElement:
    """A point of H3 in exponential coordinates."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return group_mul(self, other)

    def inverse(self) -> "GroupElement":
        return group_inv(self)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def __iter__(self):
        yield from (self.x, self.y, self.z)


@dataclass(frozen=True)
class AlgebraVector:
    """Coefficients of ``c1 e1 + c2 e2 + c3 e3``."""

    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0

    def __add__(self, other: "AlgebraVector") -> "AlgebraVector":
        return AlgebraVector(self.c1 + other.c1, self.c2 + other.c2, self.c3 + other.c3)

    def __sub__(self, other: "AlgebraVector") -> "AlgebraVector":
        return AlgebraVector(self.c1 - other.c1, self.c2 - other.c2, self.c3 - other.c3)

    def __mul__(self, s: float) -> "AlgebraVector":
        return AlgebraVector(s * self.c1, s * self.c2, s * self.c3)

    __rmul__ = __mul__

    def __neg__(self) -> "AlgebraVector":
        return AlgebraVector(-self.c1, -self.c2, -self.c3)

    def __iter__(self):
        yield from (self.c1, self.c2, self.c3)

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3], dtype=float)

    def norm(self) -> float:
        return float(np.sqrt(self.c1**2 + self.c2**2 + self.c3**2))

    @property
    def horizontal(self) -> tuple[float, float]:
        """Projection onto span{e1, e2}."""
        return (self.c1, self.c2)


IDENTITY = GroupElement(0.0, 0.0, 0.0)
E1 = AlgebraVector(1.0, 0.0, 0.0)
E2 = AlgebraVector(0.0, 1.0, 0.0)
E3 = AlgebraVector(0.0, 0.0, 1.0)


def J(v):
    """Rotation by a quarter turn on the horizontal plane, ``J(x, y) = (-y, x)``."""
    x, y = v
    return (-y, x)


def group_mul(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """Heisenberg product ``g1 * g2``."""
    a, b, c = g1
    x, y, z = g2
    return GroupElement(a + x, b + y, c + z + 0.5 * (a * y - b * x))


def group_inv(g: GroupElement) -> GroupElement:
    return GroupElement(-g.x, -g.y, -g.z)


def bracket(u: AlgebraVector, v: AlgebraVector) -> AlgebraVector:
    """Lie bracket; only ``[e1, e2] = e3`` is non-zero."""
    return AlgebraVector(0.0, 0.0, u.c1 * v.c2 - u.c2 * v.c1)


def left_frame_velocity(g: GroupElement, coord_vel) -> AlgebraVector:
    """Components of a coordinate velocity at ``g`` in the frame e1, e2, e3.

    The Euclidean norm of the result is the Riemannian speed.
    """
    x, y, _ = g
    xp, yp, zp = coord_vel
    return AlgebraVector(xp, yp, zp + 0.5 * (xp * y - x * yp))


@dataclass(frozen=True)
class LorentzForce:
    """Left-invariant Lorentz force ``F_{U, rho}`` with ``U = beta e1 + alpha e2``.

    In the orthonormal frame its matrix is::

        [[0,    -rho, -beta ],
         [rho,   0,   -alpha],
         [beta,  alpha, 0   ]]
    """

    beta: float = 0.0
    alpha: float = 0.0
    rho: float = 0.0

    @property
    def U(self) -> tuple[float, float]:
        return (self.beta, self.alpha)

    def matrix(self) -> np.ndarray:
        return force_matrix(self)

    def apply(self, v: AlgebraVector) -> AlgebraVector:
        return AlgebraVector(*(self.matrix() @ v.as_array()))

    def kernel(self) -> AlgebraVector:
        """Generator ``J U - rho e3`` of the kernel (zero vector for ``F = 0``)."""
        ju = J(self.U)
        return AlgebraVector(ju[0], ju[1], -self.rho)

    def is_zero(self) -> bool:
        return self.beta == 0.0 and self.alpha == 0.0 and self.rho == 0.0

    def __iter__(self):
        yield from (self.beta, self.alpha, self.rho)


def force_matrix(F: LorentzForce, exact: bool = False):
    """Skew-symmetric matrix of ``F``; ``exact=True`` returns Fractions."""
    if exact:
        b, a, r = (Fraction(v) for v in F)
        zero = Fraction(0)
        return [[zero, -r, -b], [r, zero, -a], [b, a, zero]]
    b, a, r = F
    return np.array([[0.0, -r, -b], [r, 0.0, -a], [b, a, 0.0]])


def two_form_eval(F: LorentzForce, u: AlgebraVector, v: AlgebraVector) -> float:
    """The magnetic 2-form ``omega_F(u, v) = <F u, v>``."""
    return float(F.apply(u).as_array() @ v.as_array())


def two_form_coefficients(F: LorentzForce) -> Callable:
    """Coordinate coefficients of ``omega_F``.

    Returns ``f(x, y, z) -> (a, b, c)`` with
    ``omega_F = a dx^dy + b dx^dz + c dy^dz``.
    """
    beta, alpha, rho = F

    def coeffs(x, y, z):
        x, y, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, z)))
        a = rho - 0.5 * beta * x - 0.5 * alpha * y
        return a, np.full_like(x, beta), np.full_like(x, alpha)

    return coeffs


def exterior_derivative(coeffs: Callable, points: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central-difference ``d`` of a coordinate 2-form at ``points`` (shape (N, 3)).

    ``coeffs`` follows the convention of :func:`two_form_coefficients`; the
    result is the single coefficient of ``dx^dy^dz``, shape (N,).
    """
    p = np.atleast_2d(np.asarray(points, dtype=float))
    x, y, z = p.T

    def partial(idx, axis):
        step = np.zeros(3)
        step[axis] = h
        fp = coeffs(x + step[0], y + step[1], z + step[2])[idx]
        fm = coeffs(x - step[0], y - step[1], z - step[2])[idx]
        return (fp - fm) / (2.0 * h)

    # d(a dx^dy + b dx^dz + c dy^dz) = (a_z - b_y + c_x) dx^dy^dz
    return partial(0, 2) - partial(1, 1) + partial(2, 0)
