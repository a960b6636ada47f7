"""Quartic analysis behind the closed-form magnetic trajectories.

For the canonical force ``F_{e1, rho}`` and initial velocity
``(x0, y0, z0)`` write ``c = z0 + rho``.  Along a trajectory
``x'(t)^2 = P(x(t) + c)`` with

    P(eta) = -(eta^4 + 2 p0 eta^2 - 8 rho eta + q0) / 4,
    p0 = 2 (y0 + 1) - c^2,
    q0 = p0^2 + 8 rho c - 4 (x0^2 + (y0 + 1)^2).

The sign of the discriminant of ``P``, the position of ``c`` among the real
roots and (for a double root ``r``) the sign of ``mu = (p0 + 3 r^2) / 2``
select one of seven solution families.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ClassificationError
from .specfun import inv_cn, inv_sn

__all__ = [
    "Case",
    "ReducedParams",
    "QuarticAnalysis",
    "reduced_params",
    "discriminant",
    "quartic_coefficients",
    "quartic_roots",
    "shifted_coefficients",
    "classify",
    "P",
    "P_prime",
    "mu_alternatives",
]

DEFAULT_TOL = 1e-9
# data this close to the constant solution are treated as constant
NEAR_TRIVIAL = 64.0 * np.finfo(float).eps


class Case(str, enum.Enum):
    TRIVIAL = "Trivial"
    NEG_DELTA = "NegDelta"
    POS_DELTA_LOW = "PosDeltaLow"
    POS_DELTA_HIGH = "PosDeltaHigh"
    ZERO_DELTA_MU_POS = "ZeroDeltaMuPos"
    ZERO_DELTA_MU_NEG_RIGHT = "ZeroDeltaMuNegRight"
    ZERO_DELTA_MU_NEG_LEFT = "ZeroDeltaMuNegLeft"
    ZERO_DELTA_CUBIC = "ZeroDeltaCubic"

    def __str__(self) -> str:
        return self.value

    @property
    def periodic(self) -> bool:
        return self in _PERIODIC


_PERIODIC = {Case.NEG_DELTA, Case.POS_DELTA_LOW, Case.POS_DELTA_HIGH, Case.ZERO_DELTA_MU_POS}


@dataclass(frozen=True)
class ReducedParams:
    x0: float
    y0: float
    z0: float
    rho: float
    p0: float
    q0: float
    trivial: bool

    @property
    def shift(self) -> float:
        """``c = z0 + rho``, the value of ``eta`` at ``t = 0``."""
        return self.z0 + self.rho

    @property
    def energy(self) -> float:
        """``||V0 + e2||^2 = x0^2 + (y0 + 1)^2``."""
        return self.x0**2 + (self.y0 + 1.0) ** 2


@dataclass(frozen=True)
class QuarticAnalysis:
    """Roots, discriminant and integration constants for one initial condition.

    ``roots`` holds the four roots of ``P`` (complex dtype) with the real ones
    ascending.  ``r1, r2, r3, r4`` follow the labelling of the solution
    formulas: for ``Delta < 0``, ``r2`` is the root with positive imaginary
    part; for ``Delta = 0``, ``r`` is the double root and ``r2 <= r3`` are the
    remaining two.  Fields that do not apply to the case are ``nan``.
    """

    params: ReducedParams
    case: Case
    delta: float
    roots: np.ndarray = field(repr=False)
    r1: complex = math.nan
    r2: complex = math.nan
    r3: complex = math.nan
    r4: complex = math.nan
    delta1: float = math.nan
    delta4: float = math.nan
    k: float = math.nan
    k1: float = math.nan
    mu: float = math.nan
    r: float = math.nan
    C: float = math.nan

    @property
    def shift(self) -> float:
        return self.params.shift


def reduced_params(ic, rho: float) -> ReducedParams:
    """``p0``, ``q0`` and the constant-solution test for ``ic = (x0, y0, z0)``."""
    x0, y0, z0 = (float(v) for v in ic)
    rho = float(rho)
    c = z0 + rho
    p0 = 2.0 * (y0 + 1.0) - c * c
    q0 = p0 * p0 + 8.0 * rho * c - 4.0 * (x0 * x0 + (y0 + 1.0) ** 2)
    trivial = x0 == 0.0 and (y0 + 1.0) * c == rho
    return ReducedParams(x0, y0, z0, rho, p0, q0, trivial)


def discriminant(p: ReducedParams) -> float:
    p0, q0, rho = p.p0, p.q0, p.rho
    return (
        q0 * p0**4
        - 8.0 * rho**2 * p0**3
        - 432.0 * rho**4
        + 72.0 * rho**2 * q0 * p0
        - 2.0 * q0**2 * p0**2
        + q0**3
    )


def quartic_coefficients(p: ReducedParams) -> np.ndarray:
    """Monic coefficients (highest first) of ``-4 P``."""
    return np.array([1.0, 0.0, 2.0 * p.p0, -8.0 * p.rho, p.q0])


def P(p: ReducedParams, eta):
    """The quartic ``P(eta)``; broadcasts over numpy arrays."""
    eta = np.asarray(eta)
    return -0.25 * (((eta * eta + 2.0 * p.p0) * eta - 8.0 * p.rho) * eta + p.q0)


def P_prime(p: ReducedParams, eta):
    eta = np.asarray(eta)
    return -(eta**3) - p.p0 * eta + 2.0 * p.rho


def _newton_polish(coeffs, roots, steps=2):
    d = np.polyder(coeffs)
    out = np.array(roots, dtype=complex)
    for _ in range(steps):
        dv = np.polyval(d, out)
        ok = dv != 0
        out[ok] = out[ok] - np.polyval(coeffs, out[ok]) / dv[ok]
    return out


def _sort_roots(roots):
    # eigenvalues of a real matrix that are real come back with zero imaginary part
    real = roots.imag == 0
    r_real = np.sort(roots[real].real).astype(complex)
    r_cplx = roots[~real]
    r_cplx = r_cplx[np.argsort(-r_cplx.imag)]
    return np.concatenate([r_real, r_cplx])


def shifted_coefficients(p: ReducedParams) -> np.ndarray:
    """Monic coefficients of ``-4 P(x + c)`` in ``x = eta - c``.

    Built from the initial data directly, so roots near ``eta = c`` (small
    oscillations) are not lost to cancellation.
    """
    c, y1 = p.shift, p.y0 + 1.0
    return np.array([1.0, 4.0 * c, 4.0 * (c * c + y1), -8.0 * (p.rho - c * y1), -4.0 * p.x0 * p.x0])


def quartic_roots(p: ReducedParams) -> np.ndarray:
    """All four roots of ``P``: companion-matrix eigenvalues plus Newton steps.

    The eigenvalue problem is solved for ``P(x + c)`` and shifted back.  Real
    roots come first, ascending, then the complex ones (positive imaginary
    part first).
    """
    if p.trivial:
        raise ValueError("the constant solution has no quartic analysis")
    coeffs = shifted_coefficients(p)
    xr = _newton_polish(coeffs, np.roots(coeffs))
    return _sort_roots(xr + p.shift)


def mu_alternatives(p: ReducedParams) -> dict[str, float]:
    """Two rational expressions for ``mu`` in terms of ``p0, q0, rho``.

    Only meaningful when the discriminant vanishes and ``p0^2 + 3 q0 != 0``.
    The definition used by the solver is ``(p0 + 3 r^2) / 2``.
    """
    s = p.p0**2 + 3.0 * p.q0
    num = 9.0 * p.rho**2 - p.p0 * p.q0
    return {
        "scaled": 6.0 * num / s + p.p0 / 2.0,
        "unscaled": num / s + p.p0 / 12.0,
    }


def _double_root_formula(p: ReducedParams) -> float:
    s = p.p0**2 + 3.0 * p.q0
    den = p.p0**3 - p.p0 * p.q0 + 36.0 * p.rho**2
    return 2.0 * p.rho * s / den


def _clip_unit(v):
    return float(min(1.0, max(-1.0, v)))


def _near_trivial(p: ReducedParams) -> bool:
    # rounding-level defects, e.g. after mapping a one-parameter subgroup to canonical form
    size = math.sqrt(p.x0**2 + p.y0**2 + p.z0**2)
    y1, c = p.y0 + 1.0, p.shift
    defect = abs(y1 * c - p.rho)
    return abs(p.x0) <= NEAR_TRIVIAL * size and defect <= NEAR_TRIVIAL * (1.0 + abs(y1 * c) + abs(p.rho))


def classify(ic, rho: float, tol: float = DEFAULT_TOL) -> QuarticAnalysis:
    """Select the solution family for ``ic`` under ``F_{e1, rho}``.

    ``ic`` must have ``x0 >= 0``; reflect first otherwise.  ``tol`` is the
    relative threshold for treating the discriminant as zero.
    """
    p = reduced_params(ic, rho)
    if p.x0 < 0:
        raise ValueError("classify expects x0 >= 0; apply the (S, -1) reflection first")
    if not p.trivial and _near_trivial(p):
        p = replace(p, trivial=True)
    delta = discriminant(p)
    empty = np.full(4, np.nan, dtype=complex)
    if p.trivial:
        return QuarticAnalysis(p, Case.TRIVIAL, delta, empty)

    c = p.shift
    rho = p.rho
    roots = quartic_roots(p)
    diag = {"p0": p.p0, "q0": p.q0, "rho": rho, "delta": delta, "c": c, "roots": roots}
    delta_scale = 1.0 + abs(p.p0) ** 6 + abs(p.q0) ** 3 + rho**4
    near_zero = abs(delta) <= tol * delta_scale
    if near_zero:
        out = _classify_degenerate(p, delta, roots, tol, diag)
        if out is not None:
            return out
    # away from Delta = 0 (or at a small oscillation that only looks degenerate)
    # the root configuration decides
    n_real = int(np.sum(roots.imag == 0))
    if n_real == 2 and (near_zero or delta < 0):
        return _neg_delta(p, delta, roots, diag)
    if n_real == 4 and (near_zero or delta > 0):
        return _pos_delta(p, delta, roots, diag)
    raise ClassificationError("discriminant sign and root configuration disagree", {**diag, "n_real": n_real})


def _neg_delta(p, delta, roots, diag):
    c = p.shift
    r1, r4 = roots[0].real, roots[1].real
    s = r1 + r4
    d1 = math.sqrt(max(0.0, 2.0 * p.p0 + 2.0 * r1 * r1 + s * s))
    d4 = math.sqrt(max(0.0, 2.0 * p.p0 + 2.0 * r4 * r4 + s * s))
    if d1 == 0.0 or d4 == 0.0:
        raise ClassificationError("degenerate elliptic constants", {**diag, "delta1": d1, "delta4": d4})
    k2 = ((r4 - r1) ** 2 - (d4 - d1) ** 2) / (4.0 * d1 * d4)
    k = math.sqrt(min(1.0, max(0.0, k2)))
    if k >= 1.0:
        raise ClassificationError("modulus reached 1", {**diag, "k2": k2})
    num = (r4 - c) * d1 - (c - r1) * d4
    den = (r4 - c) * d1 + (c - r1) * d4
    C1 = float(inv_cn(_clip_unit(num / den), k)) if den != 0.0 else 0.0
    return QuarticAnalysis(
        p, Case.NEG_DELTA, delta, roots,
        r1=r1, r2=roots[2], r3=roots[3], r4=r4,
        delta1=d1, delta4=d4, k=k, C=C1,
    )


def _pos_delta(p, delta, roots, diag):
    c = p.shift
    r1, r2, r3, r4 = (float(v.real) for v in roots)
    k1 = math.sqrt(max(0.0, (r4 - r3) * (r2 - r1) / ((r4 - r2) * (r3 - r1))))
    slack = 1e-10 * (1.0 + abs(r4 - r1))
    common = dict(r1=r1, r2=r2, r3=r3, r4=r4, k1=k1)
    d1 = math.sqrt((r2 - r1) * (r3 - r1))
    d4 = math.sqrt((r4 - r3) * (r4 - r2))
    common.update(delta1=d1, delta4=d4)
    if r1 - slack <= c <= r2 + slack:
        cc = min(max(c, r1), r2)
        arg = (r4 - r2) * (cc - r1) / ((r2 - r1) * (r4 - cc)) if r2 > r1 else 0.0
        C21 = float(inv_sn(math.sqrt(_clip_unit(arg)), k1))
        return QuarticAnalysis(p, Case.POS_DELTA_LOW, delta, roots, C=C21, **common)
    if r3 - slack <= c <= r4 + slack:
        cc = min(max(c, r3), r4)
        arg = (r3 - r1) * (r4 - cc) / ((r4 - r3) * (cc - r1)) if r4 > r3 else 0.0
        C31 = float(inv_sn(math.sqrt(_clip_unit(arg)), k1))
        return QuarticAnalysis(p, Case.POS_DELTA_HIGH, delta, roots, C=C31, **common)
    raise ClassificationError("z0 + rho lies outside both positivity intervals", diag)


def _classify_degenerate(p: ReducedParams, delta: float, roots, tol: float, diag: dict):
    """One of the Delta = 0 families, or ``None`` when the data only look degenerate.

    The latter happens for small oscillations about a stable equilibrium,
    where two simple roots straddle ``z0 + rho`` closely.
    """
    c, rho = p.shift, p.rho
    s = p.p0**2 + 3.0 * p.q0
    s_scale = 1.0 + p.p0**2 + abs(p.q0)

    if abs(s) <= tol * s_scale:
        # triple root r = -rho^(1/3), simple root -3 r
        r = -math.copysign(abs(rho) ** (1.0 / 3.0), rho)
        if r == 0.0:
            raise ClassificationError("quadruple root: the solution would be constant", diag)
        ratio = (3.0 * r + c) / (r - c)
        C7 = math.sqrt(max(0.0, ratio)) / r
        return QuarticAnalysis(
            p, Case.ZERO_DELTA_CUBIC, delta, roots,
            r1=r, r2=r, r3=r, r4=-3.0 * r, r=r, mu=0.0, C=C7,
        )

    den = p.p0**3 - p.p0 * p.q0 + 36.0 * rho**2
    if abs(den) > tol * (1.0 + abs(p.p0) ** 3 + abs(p.p0 * p.q0) + rho**2):
        r = _double_root_formula(p)
    else:
        # take the closest pair of real roots
        re = np.sort(roots.real)
        i = int(np.argmin(np.diff(re)))
        r = 0.5 * (re[i] + re[i + 1])
    # Newton on P' sharpens the double root
    for _ in range(3):
        d2 = 3.0 * r * r + p.p0
        if d2 == 0.0:
            break
        r -= (r**3 + p.p0 * r - 2.0 * rho) / d2
    mu = 0.5 * (p.p0 + 3.0 * r * r)
    disc = -2.0 * (p.p0 + r * r)
    diag = {**diag, "r": r, "mu": mu, "p0^2+3q0": s}
    if disc < -tol * s_scale:
        # a double root next to a complex pair is a centre
        return None
    w = math.sqrt(max(0.0, disc))
    r2, r3 = -r - w, -r + w
    slack = 1e-10 * (1.0 + abs(r3 - r2) + abs(r))
    if not (r2 - slack <= c <= r3 + slack) or (mu > 0 and r2 - slack <= r <= r3 + slack and abs(c - r) < slack):
        return None
    A = math.sqrt(max(0.0, r * r - mu))
    if c == r:
        raise ClassificationError("z0 + rho sits on the double root", diag)
    # D(0) = r +/- A (cos|cosh)(theta0) = -2 mu / (c - r); the sign of theta0 is
    # fixed by x'(0) = x0 through xi' = 2 mu D' / D^2
    D0 = -2.0 * mu / (c - r)
    slope = p.x0 * D0 * D0 / (2.0 * mu)
    common = dict(r1=r, r2=r2, r3=r3, r4=r, r=r, mu=mu)
    mu_scale = 1.0 + abs(p.p0) + r * r
    if abs(mu) <= tol * mu_scale:
        raise ClassificationError("mu vanishes but p0^2 + 3 q0 does not", diag)
    if mu > 0:
        lam = math.sqrt(mu)
        # D = r + A cos(lam t - C4), D'(0) = A lam sin(C4)
        C4 = math.atan2(slope / lam, D0 - r) if A > 0 else 0.0
        return QuarticAnalysis(p, Case.ZERO_DELTA_MU_POS, delta, roots, C=C4, **common)
    lam = math.sqrt(-mu)
    if c > r:
        # D = r + A cosh(lam t - C5), D'(0) = -A lam sinh(C5)
        C5 = math.asinh(-slope / (A * lam))
        return QuarticAnalysis(p, Case.ZERO_DELTA_MU_NEG_RIGHT, delta, roots, C=C5, **common)
    # D = r - A cosh(lam t + C6), D'(0) = -A lam sinh(C6)
    C6 = math.asinh(-slope / (A * lam))
    return QuarticAnalysis(p, Case.ZERO_DELTA_MU_NEG_LEFT, delta, roots, C=C6, **common)
