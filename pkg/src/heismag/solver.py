"""Closed-form magnetic trajectories through the identity.

For the canonical force ``F_{e1, rho}`` the x coordinate is one of the
elliptic or elementary families selected by :func:`heismag.quartic.classify`;
y follows by one quadrature and z algebraically:

    y(t) = int_0^t (x^2 / 2 + c x + y0) ds,
    z(t) = -x y / 2 - c y - x' + x0,          c = z0 + rho.

``F_{0, rho}`` (and ``F = 0``) have elementary solutions, and any other force
is reduced to one of these by the symmetry action.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad_vec

from .algebra import LorentzForce
from .errors import NumericalError
from .quartic import Case, QuarticAnalysis, classify
from .specfun import ellip_K, jacobi_sncndn
from .symmetry import S, IsometryScaling, act_on_curve, canonicalize
from .trajectory import InitialVelocity, Interval, Trajectory

__all__ = [
    "InitialVelocity",
    "Interval",
    "Trajectory",
    "XCurve",
    "solve_x",
    "reconstruct_yz",
    "period_and_image",
    "solve_canonical",
    "solve_exact",
    "solve",
]

QUAD_EPSABS = 1e-13
PANEL_WIDTH = 0.125
HALF_SPAN = 64.0
_PANELS_PER_PERIOD = 64


@dataclass(frozen=True)
class XCurve:
    """``x(t)`` with its analytic derivative for one solution family."""

    value_and_slope: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]
    period: Optional[float] = None

    def _reduce(self, t):
        t = np.asarray(t, dtype=float)
        if self.period is None:
            return t
        return t - self.period * np.floor(t / self.period)

    def __call__(self, t):
        return self.value_and_slope(self._reduce(t))[0]

    def derivative(self, t):
        return self.value_and_slope(self._reduce(t))[1]

    def both(self, t):
        return self.value_and_slope(self._reduce(t))


def period_and_image(a: QuarticAnalysis) -> tuple[Optional[float], Interval]:
    """Period of x (``None`` if not periodic) and the image of x."""
    c = a.shift
    case = a.case
    if case is Case.TRIVIAL:
        return None, Interval(0.0, 0.0)
    if case is Case.NEG_DELTA:
        T = 8.0 * ellip_K(a.k) / math.sqrt(a.delta1 * a.delta4)
        return float(T), Interval(a.r1 - c, a.r4 - c)
    if case in (Case.POS_DELTA_LOW, Case.POS_DELTA_HIGH):
        T = 8.0 * ellip_K(a.k1) / math.sqrt((a.r4 - a.r2) * (a.r3 - a.r1))
        if case is Case.POS_DELTA_LOW:
            return float(T), Interval(a.r1 - c, a.r2 - c)
        return float(T), Interval(a.r3 - c, a.r4 - c)
    r2, r3 = float(np.real(a.r2)), float(np.real(a.r3))
    if case is Case.ZERO_DELTA_MU_POS:
        return 2.0 * math.pi / math.sqrt(a.mu), Interval(r2 - c, r3 - c)
    if case is Case.ZERO_DELTA_MU_NEG_RIGHT:
        return None, Interval(a.r - c, r3 - c, lo_closed=False)
    if case is Case.ZERO_DELTA_MU_NEG_LEFT:
        return None, Interval(r2 - c, a.r - c, hi_closed=False)
    # cubic: eta runs between the triple root r and the simple root -3r
    if a.params.rho > 0:
        return None, Interval(a.r - c, -3.0 * a.r - c, lo_closed=False)
    return None, Interval(-3.0 * a.r - c, a.r - c, hi_closed=False)


def solve_x(a: QuarticAnalysis) -> XCurve:
    """The closed-form ``x(t)`` for a classified initial condition."""
    c = a.shift
    case = a.case
    period, _ = period_and_image(a) if case is not Case.TRIVIAL else (None, None)

    if case is Case.TRIVIAL:
        return XCurve(lambda t: (np.zeros_like(t), np.zeros_like(t)))

    if case is Case.NEG_DELTA:
        r1, r4, d1, d4, k, C = a.r1, a.r4, a.delta1, a.delta4, a.k, a.C
        lam = 0.5 * math.sqrt(d1 * d4)
        # eta is a weighted mean of r1 and r4; weigh x1 = r1 - c and x4 = r4 - c
        # instead so tiny oscillations keep their relative accuracy
        x1, x4 = r1 - c, r4 - c
        gain = 2.0 * d1 * d4 * (r4 - r1) * lam

        def f(t):
            sn, cn, dn = jacobi_sncndn(lam * t + C, k)
            w1, w4 = d4 * (1.0 + cn), d1 * (1.0 - cn)
            den = w1 + w4
            return (x1 * w1 + x4 * w4) / den, gain * sn * dn / (den * den)

        return XCurve(f, period)

    if case in (Case.POS_DELTA_LOW, Case.POS_DELTA_HIGH):
        r1, r2, r3, r4, k1, C = a.r1, a.r2, a.r3, a.r4, a.k1, a.C
        om = 0.25 * math.sqrt((r4 - r2) * (r3 - r1))
        span = r4 - r1
        if case is Case.POS_DELTA_LOW:
            g = (r2 - r1) / (r4 - r2)

            def f(t):
                sn, cn, dn = jacobi_sncndn(om * t + C, k1)
                q = 1.0 + g * sn * sn
                return r4 - span / q - c, 2.0 * span * g * om * sn * cn * dn / (q * q)

        else:
            g = (r4 - r3) / (r3 - r1)

            def f(t):
                sn, cn, dn = jacobi_sncndn(om * t - C, k1)
                q = 1.0 + g * sn * sn
                return r1 + span / q - c, -2.0 * span * g * om * sn * cn * dn / (q * q)

        return XCurve(f, period)

    r, mu, C = a.r, a.mu, a.C
    if case is Case.ZERO_DELTA_CUBIC:

        def f(t):
            s = t + C
            q = 1.0 + r * r * s * s
            return r - 4.0 * r / q - c, 8.0 * r**3 * s / (q * q)

        return XCurve(f)

    A = math.sqrt(r * r - mu)
    lam = math.sqrt(abs(mu))
    if case is Case.ZERO_DELTA_MU_POS:

        def D(t):
            th = lam * t - C
            return r + A * np.cos(th), -A * lam * np.sin(th)

    elif case is Case.ZERO_DELTA_MU_NEG_RIGHT:

        def D(t):
            th = lam * t - C
            return r + A * np.cosh(th), A * lam * np.sinh(th)

    else:

        def D(t):
            th = lam * t + C
            return r - A * np.cosh(th), -A * lam * np.sinh(th)

    def f(t):
        d, dp = D(t)
        return r - 2.0 * mu / d - c, 2.0 * mu * dp / (d * d)

    return XCurve(f, period)


class _Antiderivative:
    """``Y(t) = int_0^t g(s) ds`` from cached panel integrals plus a local quadrature.

    For periodic ``g`` the cache spans one period and ``Y(t + T) = Y(t) + Y(T)``;
    otherwise it spans ``[-HALF_SPAN, HALF_SPAN]`` and evaluation outside
    integrates from the nearest end.
    """

    def __init__(self, g: Callable[[np.ndarray], np.ndarray], period: Optional[float]):
        self.g = g
        self.period = period
        if period is not None:
            n = max(_PANELS_PER_PERIOD, int(math.ceil(period / PANEL_WIDTH)))
            self.nodes = np.linspace(0.0, period, n + 1)
            self.origin_index = 0
        else:
            n = int(round(2 * HALF_SPAN / PANEL_WIDTH))
            self.nodes = np.linspace(-HALF_SPAN, HALF_SPAN, n + 1)
            self.origin_index = n // 2
        panels = self._integrate(self.nodes[:-1], self.nodes[1:])
        cum = np.concatenate([[0.0], np.cumsum(panels)])
        self.values = cum - cum[self.origin_index]
        self.h = self.nodes[1] - self.nodes[0]

    def _integrate(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.size == 0:
            return np.zeros(0)
        w = b - a

        def integrand(u):
            return w * self.g(a + u * w)

        val, err, info = quad_vec(integrand, 0.0, 1.0, epsabs=QUAD_EPSABS, epsrel=0.0, norm="max",
                                  limit=2000, full_output=True)
        if not info.success:
            raise NumericalError(
                "y quadrature did not converge",
                {"interval_min": float(np.min(a)), "interval_max": float(np.max(b)), "error": float(err)},
            )
        return np.asarray(val, dtype=float)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.nodes[0], self.nodes[-1]
        if self.period is not None:
            n = np.floor(t / self.period)
            tau = t - n * self.period
            i = np.clip(np.floor(tau / self.h).astype(int), 0, len(self.nodes) - 2)
            return n * self.values[-1] + self.values[i] + self._integrate(self.nodes[i], tau)
        i = np.clip(np.floor((t - lo) / self.h).astype(int), 0, len(self.nodes) - 1)
        i = np.where(t > hi, len(self.nodes) - 1, i)
        i = np.where(t < lo, 0, i)
        return self.values[i] + self._integrate(self.nodes[i], t)


def reconstruct_yz(x: XCurve, ic, rho: float):
    """``(y, z)`` callables from ``x``; each returns ``(value, derivative)``."""
    x0, y0, z0 = InitialVelocity.coerce(ic)
    c = z0 + rho

    def ydot(t):
        xv = x(t)
        return 0.5 * xv * xv + c * xv + y0

    Y = _Antiderivative(ydot, x.period)

    def y(t):
        return Y(t), ydot(t)

    def z(t, xv=None, xp=None, yv=None, yp=None):
        if xv is None:
            xv, xp = x.both(t)
            yv, yp = y(t)
        zv = -0.5 * xv * yv - c * yv - xp + x0
        zp = xv + z0 - 0.5 * xp * yv + 0.5 * xv * yp
        return zv, zp

    return y, z


def _canonical_closed_form(ic: InitialVelocity, rho: float, tol: float) -> Trajectory:
    a = classify(ic, rho, tol=tol)
    F = LorentzForce(1.0, 0.0, rho)
    x0, y0, z0 = ic
    if a.case is Case.TRIVIAL:
        v = np.array([0.0, y0, z0])

        def line(ts):
            return np.concatenate([np.outer(ts, v), np.tile(v, (len(ts), 1))], axis=1)

        return Trajectory(line, str(a.case), F, ic, None, Interval(0.0, 0.0), a)

    xc = solve_x(a)
    y, z = reconstruct_yz(xc, ic, rho)
    period, image = period_and_image(a)

    def evaluator(ts):
        xv, xp = xc.both(ts)
        yv, yp = y(ts)
        zv, zp = z(ts, xv, xp, yv, yp)
        return np.stack([xv, yv, zv, xp, yp, zp], axis=1)

    # x has period T but y, z drift, so the curve itself is periodic only up to
    # a left translation; the recorded period is that of x
    return Trajectory(evaluator, str(a.case), F, ic, period, image, a)


def solve_canonical(ic, rho: float, tol: float = 1e-9) -> Trajectory:
    """Magnetic trajectory of ``F_{e1, rho}`` with ``gamma'(0) = ic``.

    Negative ``x0`` is handled by the reflection ``(S, -1)``, which fixes the
    force and maps ``(x0, y0, z0)`` to ``(-x0, y0, z0)``.
    """
    ic = InitialVelocity.coerce(ic)
    rho = float(rho)
    if ic.x0 >= 0:
        return _canonical_closed_form(ic, rho, tol)
    refl = IsometryScaling(S, -1.0)
    base = _canonical_closed_form(InitialVelocity(-ic.x0, ic.y0, ic.z0), rho, tol)
    out = act_on_curve(refl, base)
    return _with(out, ic=ic, force=LorentzForce(1.0, 0.0, rho))


def _with(traj: Trajectory, **kw) -> Trajectory:
    fields = dict(
        evaluator=traj.evaluator, case=traj.case, force=traj.force, ic=traj.ic, period=traj.period,
        x_image=traj.x_image, analysis=traj.analysis, source=traj.source,
    )
    fields.update(kw)
    return Trajectory(**fields)


_SERIES_CUTOFF = 1e-2


def _sinc_terms(c: float, t: np.ndarray):
    """``sin(ct)/c``, ``(1 - cos ct)/c`` and ``(ct - sin ct)/c^2`` with small-``c`` care."""
    th = c * t
    if c == 0.0:
        return t, np.zeros_like(t), np.zeros_like(t)
    s1 = np.sin(th) / c
    s2 = 2.0 * np.sin(0.5 * th) ** 2 / c
    small = np.abs(th) < _SERIES_CUTOFF
    thc = np.where(small, 1.0, th)
    s3 = np.where(
        small,
        c * t**3 / 6.0 * (1.0 - th**2 / 20.0 + th**4 / 840.0 - th**6 / 60480.0),
        (thc - np.sin(thc)) / (c * c),
    )
    return s1, s2, s3


def solve_exact(ic, rho: float) -> Trajectory:
    """Magnetic trajectory of ``F_{0, rho}`` (``rho = 0`` gives Riemannian geodesics).

    With ``c = z0 + rho`` the horizontal velocity rotates at angular speed ``c``:
    ``x' + i y' = (x0 + i y0) e^{i c t}``, and
    ``z = z0 t + |V0|^2 (c t - sin c t) / (2 c^2)``.  For ``c = 0`` the curve is
    the one-parameter subgroup ``exp(t gamma'(0))``.
    """
    ic = InitialVelocity.coerce(ic)
    rho = float(rho)
    x0, y0, z0 = ic
    c = z0 + rho
    v2 = x0 * x0 + y0 * y0

    def evaluator(ts):
        s1, s2, s3 = _sinc_terms(c, ts)
        cs, sn = np.cos(c * ts), np.sin(c * ts)
        x = x0 * s1 - y0 * s2
        y = y0 * s1 + x0 * s2
        xp = x0 * cs - y0 * sn
        yp = y0 * cs + x0 * sn
        z = z0 * ts + 0.5 * v2 * s3
        zp = z0 + 0.5 * v2 * s2
        return np.stack([x, y, z, xp, yp, zp], axis=1)

    tag = "Geodesic" if rho == 0.0 else "Exact"
    period = None if c == 0.0 or v2 == 0.0 else 2.0 * math.pi / abs(c)
    if v2 == 0.0:
        image = Interval(0.0, 0.0)
    elif c == 0.0:
        image = None if x0 != 0.0 else Interval(0.0, 0.0)
    else:
        # x = (x0 sin ct - y0 (1 - cos ct)) / c  =  (R sin(ct + phi) - R sin(phi)) / c
        R = math.sqrt(v2)
        off = -y0 / c
        image = Interval(off - R / abs(c), off + R / abs(c))
    return Trajectory(evaluator, tag, LorentzForce(0.0, 0.0, rho), ic, period, image)


def solve(F: LorentzForce, ic, tol: float = 1e-9) -> Trajectory:
    """Magnetic trajectory of an arbitrary left-invariant force through the identity.

    ``F`` is moved to its orbit representative by a witness ``(psi, r)``; the
    initial velocity becomes ``r psi_*(ic)``; the canonical solution ``sigma``
    is mapped back by the inverse, ``gamma(t) = psi^{-1}(sigma(t / r))``.
    """
    ic = InitialVelocity.coerce(ic)
    orbit = canonicalize(F)
    if orbit.kind == "zero":
        return _with(solve_exact(ic, 0.0), force=F)
    w = orbit.witness
    ic_c = w.act_on_ic(ic)
    if orbit.kind == "exact":
        sigma = solve_exact(ic_c, 1.0)
    else:
        sigma = solve_canonical(ic_c, orbit.rho, tol=tol)
    back = act_on_curve(w.inverse(), sigma)
    return _with(back, force=F, ic=ic)
