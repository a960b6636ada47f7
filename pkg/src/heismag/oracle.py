"""Independent numerical integration of the magnetic equations and invariant monitors.

The state is ``(x, y, z, x', y', w)`` with ``w = z' + (x' y - x y') / 2`` the
central component of the velocity in the left-invariant frame.  For
``F = F_{U, rho}``, ``U = (beta, alpha)``, the magnetic equation reads

    x'' = -(w + rho) y' - beta w
    y'' =  (w + rho) x' - alpha w
    w'  =  beta x' + alpha y'
    z'  =  w - (x' y - x y') / 2

and conserves the speed ``|(x', y', w)|``, ``w - beta x - alpha y`` and

    E = (x' - alpha)^2 + (y' + beta)^2 - 2 rho (beta x + alpha y),

which for ``F_{e1, rho}`` is ``x'^2 + h(x)^2 - 2 rho x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .algebra import LorentzForce
from .errors import DomainError, NumericalError
from .quartic import Case, QuarticAnalysis
from .symmetry import canonicalize
from .trajectory import InitialVelocity, Trajectory, frame_velocity

__all__ = [
    "IntegrationConfig",
    "OracleRun",
    "ReducedRun",
    "InvariantReport",
    "integrate_full",
    "integrate_reduced",
    "first_integral",
    "central_integral",
    "magnetic_residual",
    "geodesic_residual",
    "monitor_invariants",
    "geodesic_magnetic_classifier",
    "separatrix_rate",
    "choose_oracle_method",
]

# DOP853 spends 12 right-hand-side evaluations per accepted step
_EVALS_PER_STEP = 12
ANGLE_TOL = 1e-10
_EDGE_PAD = 1e-6


@dataclass(frozen=True)
class IntegrationConfig:
    """Step control and sampling for the oracle.

    Tolerances default to ``rtol=1e-13``, ``atol=1e-15``; looser values lose
    the ``1e-10`` first-integral budget on ``[0, 50]``.  ``method`` is any
    explicit ``solve_ivp`` method, or ``"taylor"`` for mpmath's
    arbitrary-precision Taylor integrator at ``dps`` digits (for orbits near a
    hyperbolic fixed point, where double-precision errors grow like
    ``exp(lambda t)``).
    """

    t_span: tuple[float, float] = (0.0, 10.0)
    rtol: float = 1e-13
    atol: float = 1e-15
    max_steps: int = 1_000_000
    n_samples: int = 1001
    method: str = "DOP853"
    dps: int = 30

    def __post_init__(self):
        t0, t1 = self.t_span
        if not (math.isfinite(t0) and math.isfinite(t1) and t1 > t0):
            raise ValueError("t_span must satisfy t1 > t0")
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")
        if self.n_samples < 2:
            raise ValueError("need at least two samples")

    def grid(self) -> np.ndarray:
        return np.linspace(self.t_span[0], self.t_span[1], self.n_samples)

    def with_tolerance(self, rtol: float, atol: Optional[float] = None) -> "IntegrationConfig":
        return IntegrationConfig(self.t_span, rtol, rtol * 1e-2 if atol is None else atol,
                                 self.max_steps, self.n_samples, self.method, self.dps)


@dataclass(frozen=True)
class OracleRun:
    t: np.ndarray
    states: np.ndarray  # (N, 6) coordinates and coordinate velocities
    raw: np.ndarray = field(repr=False)  # (N, 6) integrator state (x, y, z, x', y', w)
    nfev: int = 0


@dataclass(frozen=True)
class ReducedRun:
    t: np.ndarray
    x: np.ndarray
    xp: np.ndarray
    dense: object = field(repr=False, default=None)
    nfev: int = 0

    def __call__(self, t):
        return self.dense(np.asarray(t, dtype=float))[0]


class _Counter:
    def __init__(self, f, limit):
        self.f, self.limit, self.n = f, limit, 0

    def __call__(self, t, y):
        self.n += 1
        if self.n > self.limit:
            raise NumericalError("step budget exhausted", {"t": float(t), "evaluations": self.n})
        return self.f(t, y)


def _full_rhs(F: LorentzForce, wrap=np.array):
    beta, alpha, rho = F

    def rhs(t, s):
        x, y, _, xp, yp, w = s
        return wrap([
            xp,
            yp,
            w - (xp * y - x * yp) / 2,
            -(w + rho) * yp - beta * w,
            (w + rho) * xp - alpha * w,
            beta * xp + alpha * yp,
        ])

    return rhs


def _raw_to_coords(raw: np.ndarray) -> np.ndarray:
    x, y, z, xp, yp, w = raw.T
    zp = w - 0.5 * (xp * y - x * yp)
    return np.stack([x, y, z, xp, yp, zp], axis=1)


def _taylor_piece(rhs, y0, end, cfg):
    import mpmath

    ctx = mpmath.mp.clone()
    ctx.dps = cfg.dps
    sign = 1 if end > 0 else -1
    tol = ctx.mpf(10) ** (-(cfg.dps - 5))

    def f(t, s):
        return [sign * v for v in rhs(t, s)]

    sol = ctx.odefun(f, 0, [ctx.mpf(float(v)) for v in y0], tol=tol)

    def evaluate(ts):
        order = np.argsort(np.abs(ts))
        out = np.empty((len(y0), len(ts)))
        for i in order:
            out[:, i] = [float(v) for v in sol(ctx.mpf(float(abs(ts[i]))))]
        return out

    return evaluate


def _two_sided(rhs, y0, cfg: IntegrationConfig, mp_rhs=None):
    """Integrate from 0 towards both ends of ``cfg.t_span`` and merge dense outputs."""
    t0, t1 = cfg.t_span
    budget = cfg.max_steps * _EVALS_PER_STEP
    pieces = []
    nfev = 0
    ends = ([t1] if t1 > 0 else []) + ([t0] if t0 < 0 else [])
    for end in ends:
        if cfg.method == "taylor":
            pieces.append((min(0.0, end), max(0.0, end), _taylor_piece(mp_rhs, y0, end, cfg)))
            continue
        f = _Counter(rhs, budget)
        sol = solve_ivp(f, (0.0, end), y0, method=cfg.method, rtol=cfg.rtol, atol=cfg.atol, dense_output=True)
        nfev += f.n
        if sol.status != 0:
            raise NumericalError("integration failed", {"message": sol.message, "t_end": end})
        pieces.append((min(0.0, end), max(0.0, end), sol.sol))

    def dense(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty((len(y0), t.size))
        done = np.zeros(t.size, dtype=bool)
        for lo, hi, s in pieces:
            # allow finite-difference stencils to poke just past the window
            pad = _EDGE_PAD * (1.0 + hi - lo)
            m = (t >= lo - pad) & (t <= hi + pad) & ~done
            if np.any(m):
                out[:, m] = s(t[m])
                done |= m
        if not np.all(done):
            raise ValueError("time outside the integrated window")
        return out

    return dense, nfev


def integrate_full(F: LorentzForce, ic, cfg: IntegrationConfig = IntegrationConfig()) -> Trajectory:
    """Numerical magnetic trajectory through the identity.

    The returned :class:`Trajectory` evaluates the dense output on
    ``[min(t0, 0), t1]``; uniform samples are in ``traj.analysis``
    (an :class:`OracleRun`).
    """
    ic = InitialVelocity.coerce(ic)
    y0 = np.array([0.0, 0.0, 0.0, ic.x0, ic.y0, ic.z0])
    dense, nfev = _two_sided(_full_rhs(F), y0, cfg, mp_rhs=_full_rhs(F, wrap=list))
    t = cfg.grid()
    raw = dense(t).T
    run = OracleRun(t, _raw_to_coords(raw), raw, nfev)

    def evaluator(ts):
        return _raw_to_coords(dense(ts).T)

    return Trajectory(evaluator, "Numerical", F, ic, None, None, run, source="numerical")


def integrate_reduced(ic, rho: float, cfg: IntegrationConfig = IntegrationConfig()) -> ReducedRun:
    """Solve ``x'' = rho - h'(x) h(x)`` with ``x(0) = 0``, ``x'(0) = x0``."""
    x0, y0, z0 = InitialVelocity.coerce(ic)
    c = z0 + rho

    def rhs(t, s, wrap=np.array):
        x, xp = s
        return wrap([xp, rho - (x + c) * (x * x / 2 + c * x + y0 + 1)])

    dense, nfev = _two_sided(rhs, np.array([0.0, x0]), cfg, mp_rhs=lambda t, s: rhs(t, s, list))
    t = cfg.grid()
    vals = dense(t)
    return ReducedRun(t, vals[0], vals[1], dense, nfev)


def first_integral(states: np.ndarray, F: LorentzForce) -> np.ndarray:
    """``E = (x' - alpha)^2 + (y' + beta)^2 - 2 rho (beta x + alpha y)`` per row."""
    s = np.atleast_2d(states)
    beta, alpha, rho = F
    x, y, xp, yp = s[:, 0], s[:, 1], s[:, 3], s[:, 4]
    return (xp - alpha) ** 2 + (yp + beta) ** 2 - 2.0 * rho * (beta * x + alpha * y)


def central_integral(states: np.ndarray, F: LorentzForce) -> np.ndarray:
    """``w - beta x - alpha y`` per row."""
    s = np.atleast_2d(states)
    beta, alpha, _ = F
    w = frame_velocity(s)[:, 2]
    return w - beta * s[:, 0] - alpha * s[:, 1]


def _accelerations(traj: Trajectory, t: np.ndarray, h: float):
    vp = traj(t + h)[:, 3:]
    vm = traj(t - h)[:, 3:]
    return (vp - vm) / (2.0 * h)


def magnetic_residual(traj: Trajectory, F: LorentzForce, t, h: float = 1e-5) -> np.ndarray:
    """Residuals of the magnetic equation at times ``t``, shape (N, 3).

    Velocities come from the trajectory; accelerations from a central
    difference of the velocities with step ``h``.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = traj(t)
    a = _accelerations(traj, t, h)
    beta, alpha, rho = F
    x, y = s[:, 0], s[:, 1]
    xp, yp = s[:, 3], s[:, 4]
    w = frame_velocity(s)[:, 2]
    xpp, ypp, zpp = a.T
    r1 = xpp + (w + rho) * yp + beta * w
    r2 = ypp - (w + rho) * xp + alpha * w
    r3 = zpp + 0.5 * (xpp * y - x * ypp) - beta * xp - alpha * yp
    return np.stack([r1, r2, r3], axis=1)


def geodesic_residual(traj: Trajectory, t, h: float = 1e-5) -> np.ndarray:
    """Residuals of the geodesic equation (the magnetic one with ``F = 0``)."""
    return magnetic_residual(traj, LorentzForce(0.0, 0.0, 0.0), t, h)


@dataclass(frozen=True)
class InvariantReport:
    speed_drift: float
    first_integral_drift: float
    central_drift: float
    ode_residual_max: float

    def within(self, speed=1e-8, first_integral=1e-8, residual=1e-6) -> bool:
        return (
            self.speed_drift <= speed
            and self.first_integral_drift <= first_integral
            and self.central_drift <= first_integral
            and self.ode_residual_max <= residual
        )


def monitor_invariants(traj, F: LorentzForce, t=None, h: float = 1e-5) -> InvariantReport:
    """Maximum drift of the conserved quantities and of the ODE residual.

    ``traj`` is a :class:`Trajectory` (residuals by central differences of
    the velocity) or a pair ``(t, states)`` of uniform samples (residuals by
    ``numpy.gradient``).  The reference values are taken at the first sample.
    """
    if isinstance(traj, Trajectory):
        if t is None:
            t = np.linspace(0.0, 10.0, 201)
        t = np.asarray(t, dtype=float)
        states = traj(t)
        res = magnetic_residual(traj, F, t, h)
    else:
        t, states = (np.asarray(v, dtype=float) for v in traj)
        res = _sampled_residual(t, states, F)
    speed = np.linalg.norm(frame_velocity(states), axis=1)
    E = first_integral(states, F)
    K = central_integral(states, F)
    return InvariantReport(
        float(np.max(np.abs(speed - speed[0]))),
        float(np.max(np.abs(E - E[0]))),
        float(np.max(np.abs(K - K[0]))),
        float(np.max(np.abs(res))) if res.size else 0.0,
    )


def _sampled_residual(t, states, F):
    acc = np.gradient(states[:, 3:], t, axis=0, edge_order=2)
    beta, alpha, rho = F
    x, y, xp, yp = states[:, 0], states[:, 1], states[:, 3], states[:, 4]
    w = frame_velocity(states)[:, 2]
    xpp, ypp, zpp = acc.T
    r1 = xpp + (w + rho) * yp + beta * w
    r2 = ypp - (w + rho) * xp + alpha * w
    r3 = zpp + 0.5 * (xpp * y - x * ypp) - beta * xp - alpha * yp
    return np.stack([r1, r2, r3], axis=1)


def geodesic_magnetic_classifier(F: LorentzForce, ic, angle_tol: float = ANGLE_TOL) -> bool:
    """Whether the ``F``-magnetic trajectory with ``gamma'(0) = ic`` is a geodesic.

    That happens exactly for one-parameter subgroups ``exp(t X)`` with ``X``
    horizontal or central and ``F X = 0``.
    """
    if F.is_zero():
        raise DomainError("for F = 0 every trajectory is a geodesic")
    v = InitialVelocity.coerce(ic).as_array()
    n = float(np.linalg.norm(v))
    if n == 0.0:
        return True
    M = F.matrix()
    in_kernel = np.linalg.norm(M @ v) <= angle_tol * np.linalg.norm(M, 2) * n
    horizontal = abs(v[2]) <= angle_tol * n
    central = math.hypot(v[0], v[1]) <= angle_tol * n
    return bool(in_kernel and (horizontal or central))


def separatrix_rate(traj: Trajectory, force: LorentzForce) -> float:
    """Growth rate of perturbations near a separatrix-type closed form (0 otherwise)."""
    a = traj.analysis
    if not isinstance(a, QuarticAnalysis):
        return 0.0
    if a.case not in (Case.ZERO_DELTA_MU_NEG_LEFT, Case.ZERO_DELTA_MU_NEG_RIGHT):
        return 0.0
    return math.sqrt(-a.mu) / abs(canonicalize(force).witness.r)


def choose_oracle_method(traj: Trajectory, force: LorentzForce, span, tol: float) -> str:
    """DOP853 unless double-precision error, amplified like ``exp(lambda |t|)``, would exceed ``tol / 100``."""
    lam = separatrix_rate(traj, force)
    horizon = max(abs(span[0]), abs(span[1]))
    if lam * horizon > 0 and 1e-14 * math.exp(min(lam * horizon, 700.0)) > 1e-2 * tol:
        return "taylor"
    return "DOP853"
