"""Lagrangian description of magnetic trajectories.

With ``d theta = omega_F`` the Lagrangian

    L(q, v) = |v|^2 / 2 - theta_q(v)
            = (x'^2 + y'^2 + (z' + (x' y - x y') / 2)^2) / 2 - f1 x' - f2 y' - f3 z'

has the magnetic trajectories of ``F`` as its Euler-Lagrange solutions.  In
coordinates ``omega_F = (rho - beta x / 2 - alpha y / 2) dx^dy + beta dx^dz +
alpha dy^dz``, so ``theta = f1 dx + f2 dy + f3 dz`` must satisfy

    d_x f2 - d_y f1 = rho - beta x / 2 - alpha y / 2,
    d_x f3 - d_z f1 = beta,
    d_y f3 - d_z f2 = alpha.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .algebra import LorentzForce
from .trajectory import Trajectory

__all__ = [
    "OneForm",
    "ThetaCheck",
    "LagrangianSpec",
    "default_theta",
    "explicit_theta",
    "exact_form",
    "theta_check",
    "kinetic",
    "lagrangian_eval",
    "lagrangian_partials",
    "el_residual",
]

FD_STEP = 1e-5


def _fd_jacobian(fns, p, h):
    """``J[n, i, j] = d f_i / d q_j`` by central differences."""
    p = np.atleast_2d(p)
    J = np.empty((p.shape[0], 3, 3))
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        qp, qm = p + e, p - e
        for i, f in enumerate(fns):
            J[:, i, j] = (f(*qp.T) - f(*qm.T)) / (2.0 * h)
    return J


def _broadcast(fn):
    def g(x, y, z):
        x, y, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, z)))
        return np.broadcast_to(np.asarray(fn(x, y, z), dtype=float), x.shape)

    return g


@dataclass(frozen=True)
class OneForm:
    """``theta = f1 dx + f2 dy + f3 dz``.

    Each coefficient maps arrays ``(x, y, z)`` to an array.  ``jacobian``,
    when given, maps an ``(N, 3)`` point array to ``(N, 3, 3)`` with entry
    ``[n, i, j] = d f_i / d q_j``; otherwise central differences are used.
    """

    f1: Callable
    f2: Callable
    f3: Callable
    jacobian: Optional[Callable] = field(default=None, repr=False)

    def coefficients(self, points) -> np.ndarray:
        p = np.atleast_2d(np.asarray(points, dtype=float))
        x, y, z = p.T
        return np.stack([_broadcast(f)(x, y, z) for f in (self.f1, self.f2, self.f3)], axis=1)

    def jac(self, points, h: float = FD_STEP) -> np.ndarray:
        p = np.atleast_2d(np.asarray(points, dtype=float))
        if self.jacobian is not None:
            return np.asarray(self.jacobian(p), dtype=float)
        return _fd_jacobian([_broadcast(f) for f in (self.f1, self.f2, self.f3)], p, h)

    def __call__(self, points, vel) -> np.ndarray:
        """``theta_q(v)`` row by row."""
        return np.sum(self.coefficients(points) * np.atleast_2d(vel), axis=1)

    def __add__(self, other: "OneForm") -> "OneForm":
        def add(f, g):
            return lambda x, y, z: _broadcast(f)(x, y, z) + _broadcast(g)(x, y, z)

        jac = None
        if self.jacobian is not None and other.jacobian is not None:
            jac = lambda p: self.jacobian(p) + other.jacobian(p)  # noqa: E731
        return OneForm(add(self.f1, other.f1), add(self.f2, other.f2), add(self.f3, other.f3), jac)


def default_theta(F: LorentzForce) -> OneForm:
    """A primitive of ``omega_F``; left-invariant exactly when ``U = 0``.

    ``theta = (-rho y / 2 + beta x y / 2) dx + (rho x / 2 - alpha x y / 2) dy
    + (rho + beta x + alpha y) dz``.
    """
    beta, alpha, rho = F

    def jac(p):
        x, y, _ = p.T
        J = np.zeros((p.shape[0], 3, 3))
        J[:, 0, 0] = 0.5 * beta * y
        J[:, 0, 1] = -0.5 * rho + 0.5 * beta * x
        J[:, 1, 0] = 0.5 * rho - 0.5 * alpha * y
        J[:, 1, 1] = -0.5 * alpha * x
        J[:, 2, 0] = beta
        J[:, 2, 1] = alpha
        return J

    return OneForm(
        lambda x, y, z: -0.5 * rho * y + 0.5 * beta * x * y,
        lambda x, y, z: 0.5 * rho * x - 0.5 * alpha * x * y,
        lambda x, y, z: rho + beta * x + alpha * y + 0.0 * z,
        jac,
    )


def explicit_theta(F: LorentzForce) -> OneForm:
    """``default_theta`` without the constant ``rho dz`` term.

    The two differ by the exact form ``d(rho z)``, so they give the same
    Euler-Lagrange equations; this one reproduces the explicit Lagrangian in
    which the ``dz`` coefficient is ``beta x + alpha y``.
    """
    base = default_theta(F)
    rho = F.rho
    return OneForm(base.f1, base.f2, lambda x, y, z: base.f3(x, y, z) - rho, base.jacobian)


def exact_form(f: Callable, grad: Optional[Callable] = None, h: float = 1e-3) -> OneForm:
    """``df`` for a smooth scalar ``f(x, y, z)``.

    ``grad(x, y, z)`` may supply the three partials; otherwise a fourth-order
    central stencil with step ``h`` is used, accurate enough to be
    differentiated once more by the checks in this module.
    """
    if grad is not None:
        return OneForm(*(lambda x, y, z, j=j: grad(x, y, z)[j] for j in range(3)))
    g = _broadcast(f)

    def partial(j):
        def d(x, y, z):
            q = [np.asarray(v, dtype=float) for v in (x, y, z)]

            def at(s):
                r = list(q)
                r[j] = q[j] + s * h
                return g(*r)

            return (8.0 * (at(1) - at(-1)) - (at(2) - at(-2))) / (12.0 * h)

        return d

    return OneForm(partial(0), partial(1), partial(2))


@dataclass(frozen=True)
class ThetaCheck:
    ok: bool
    max_error: float
    worst_point: np.ndarray
    errors: np.ndarray = field(repr=False)

    def __bool__(self) -> bool:
        return self.ok


def theta_check(theta: OneForm, F: LorentzForce, points=None, n: int = 200, tol: float = 1e-6,
                h: float = FD_STEP, seed: int = 0, scale: float = 2.0) -> ThetaCheck:
    """Check ``d theta = omega_F`` by central differences at a point cloud.

    Without explicit ``points``, ``n`` points are drawn uniformly from the
    cube ``[-scale, scale]^3``.
    """
    if points is None:
        points = np.random.default_rng(seed).uniform(-scale, scale, size=(n, 3))
    p = np.atleast_2d(np.asarray(points, dtype=float))
    J = _fd_jacobian([_broadcast(f) for f in (theta.f1, theta.f2, theta.f3)], p, h)
    beta, alpha, rho = F
    x, y = p[:, 0], p[:, 1]
    err = np.stack([
        J[:, 1, 0] - J[:, 0, 1] - (rho - 0.5 * beta * x - 0.5 * alpha * y),
        J[:, 2, 0] - J[:, 0, 2] - beta,
        J[:, 2, 1] - J[:, 1, 2] - alpha,
    ], axis=1)
    worst = int(np.argmax(np.max(np.abs(err), axis=1)))
    m = float(np.max(np.abs(err)))
    return ThetaCheck(m <= tol, m, p[worst], err)


@dataclass(frozen=True)
class LagrangianSpec:
    force: LorentzForce
    theta: Optional[OneForm] = None

    def __post_init__(self):
        if self.theta is None:
            object.__setattr__(self, "theta", default_theta(self.force))


def _split(states):
    s = np.atleast_2d(np.asarray(states, dtype=float))
    return s[:, :3], s[:, 3:]


def kinetic(states) -> np.ndarray:
    q, v = _split(states)
    x, y = q[:, 0], q[:, 1]
    xd, yd, zd = v.T
    w = zd + 0.5 * (xd * y - x * yd)
    return 0.5 * (xd * xd + yd * yd + w * w)


def lagrangian_eval(spec: LagrangianSpec, state):
    """``L = T - theta(v)`` for rows ``(x, y, z, x', y', z')``."""
    q, v = _split(state)
    out = kinetic(state) - spec.theta(q, v)
    return float(out[0]) if np.ndim(state) == 1 else out


def lagrangian_partials(spec: LagrangianSpec, states):
    """``(dL/dq, dL/dv)`` row by row, each of shape (N, 3)."""
    q, v = _split(states)
    x, y = q[:, 0], q[:, 1]
    xd, yd, zd = v.T
    w = zd + 0.5 * (xd * y - x * yd)
    f = spec.theta.coefficients(q)
    J = spec.theta.jac(q)
    dT_dv = np.stack([xd + 0.5 * w * y, yd - 0.5 * w * x, w], axis=1)
    dT_dq = np.stack([-0.5 * w * yd, 0.5 * w * xd, np.zeros_like(w)], axis=1)
    # d/dq_j of sum_i f_i(q) v_i
    dtheta_dq = np.einsum("nij,ni->nj", J, v)
    return dT_dq - dtheta_dq, dT_dv - f


def el_residual(spec: LagrangianSpec, traj: Trajectory, t, h: float = FD_STEP):
    """``d/dt (dL/dv) - dL/dq`` along ``traj`` at times ``t``.

    Partials of ``L`` are analytic; the outer time derivative is a central
    difference with step ``h``.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    _, p_plus = lagrangian_partials(spec, traj(t_arr + h))
    _, p_minus = lagrangian_partials(spec, traj(t_arr - h))
    dq, _ = lagrangian_partials(spec, traj(t_arr))
    res = (p_plus - p_minus) / (2.0 * h) - dq
    return res[0] if np.ndim(t) == 0 else res
