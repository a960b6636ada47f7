"""The action of ``Iso(H3) x R*`` on Lorentz forces and on curves.

An isometry fixing the identity is an automorphism ``(V, Z) -> (B V, det(B) Z)``
with ``B`` in ``O(2)``; a general isometry is such a map followed by a left
translation.  The pair ``(psi, r)`` acts on curves by
``((psi, r) . gamma)(t) = psi(gamma(r t))`` and on left-invariant forces by
``(B, r) . F_{U, rho} = r det(B) F_{B U, rho}``, which maps magnetic
trajectories of ``F`` to magnetic trajectories of the transformed force.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import IDENTITY, GroupElement, LorentzForce, group_mul
from .trajectory import InitialVelocity, Trajectory

__all__ = [
    "IsometryScaling",
    "OrbitResult",
    "Isotropy",
    "S",
    "rotation",
    "act_on_force",
    "act_on_curve",
    "canonicalize",
    "orbit_equal",
    "isotropy_description",
    "isotropy_elements",
]

U_ZERO_TOL = 1e-12
RHO_RTOL = 1e-10
_ORTHO_TOL = 1e-12

S = np.array([[1.0, 0.0], [0.0, -1.0]])


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True, eq=False)
class IsometryScaling:
    """``(psi, r)`` with ``psi = L_p o (B, det B)``."""

    B: np.ndarray
    r: float = 1.0
    p: GroupElement = IDENTITY

    def __post_init__(self):
        B = np.asarray(self.B, dtype=float)
        if B.shape != (2, 2):
            raise ValueError("B must be 2x2")
        if np.max(np.abs(B.T @ B - np.eye(2))) > _ORTHO_TOL:
            raise ValueError("B must be orthogonal")
        if not math.isfinite(self.r) or self.r == 0.0:
            raise ValueError("scale r must be a non-zero real")
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "r", float(self.r))

    @classmethod
    def identity(cls) -> "IsometryScaling":
        return cls(np.eye(2), 1.0)

    @property
    def det(self) -> float:
        return float(round(np.linalg.det(self.B)))

    @property
    def M(self) -> np.ndarray:
        """The automorphism part as a 3x3 matrix on exponential coordinates."""
        m = np.zeros((3, 3))
        m[:2, :2] = self.B
        m[2, 2] = self.det
        return m

    def compose(self, other: "IsometryScaling") -> "IsometryScaling":
        """``self * other``: act by ``other`` first."""
        Bp = GroupElement(*(self.M @ other.p.as_array()))
        return IsometryScaling(self.B @ other.B, self.r * other.r, group_mul(self.p, Bp))

    __matmul__ = compose

    def inverse(self) -> "IsometryScaling":
        Binv = self.B.T
        m = np.zeros((3, 3))
        m[:2, :2] = Binv
        m[2, 2] = self.det
        pinv = GroupElement(*(m @ (-self.p.as_array())))
        return IsometryScaling(Binv, 1.0 / self.r, pinv)

    def apply(self, points: np.ndarray) -> np.ndarray:
        """``psi`` on rows of exponential coordinates."""
        q = np.asarray(points, dtype=float) @ self.M.T
        a, b, c = self.p
        out = q.copy()
        out[..., 0] += a
        out[..., 1] += b
        out[..., 2] += c + 0.5 * (a * q[..., 1] - b * q[..., 0])
        return out

    def push_velocity(self, vel: np.ndarray) -> np.ndarray:
        """Differential of ``psi`` on coordinate velocities (point independent)."""
        q = np.asarray(vel, dtype=float) @ self.M.T
        a, b, _ = self.p
        out = q.copy()
        out[..., 2] += 0.5 * (a * q[..., 1] - b * q[..., 0])
        return out

    def act_on_ic(self, ic) -> InitialVelocity:
        """Left-frame initial velocity of ``(psi, r) . gamma``."""
        v = self.r * (self.M @ InitialVelocity.coerce(ic).as_array())
        return InitialVelocity(*v)

    def __repr__(self) -> str:
        return f"IsometryScaling(B={self.B.tolist()}, r={self.r!r}, p={tuple(self.p)})"


def act_on_force(t: IsometryScaling, F: LorentzForce) -> LorentzForce:
    s = t.r * t.det
    bu = t.B @ np.array(F.U)
    return LorentzForce(s * bu[0], s * bu[1], s * F.rho)


def act_on_curve(t: IsometryScaling, gamma: Trajectory) -> Trajectory:
    """``((psi, r) . gamma)(t) = psi(gamma(r t))`` with velocities pushed forward."""
    r = t.r

    def evaluator(ts):
        s = gamma.evaluator(r * ts)
        out = np.empty_like(s)
        out[:, :3] = t.apply(s[:, :3])
        out[:, 3:] = r * t.push_velocity(s[:, 3:])
        return out

    image = None
    if gamma.x_image is not None and t.B[0, 1] == 0.0 and t.B[1, 0] == 0.0:
        image = gamma.x_image if t.B[0, 0] > 0 else gamma.x_image.negated()
        image = image.shifted(t.p.x)
    return Trajectory(
        evaluator=evaluator,
        case=gamma.case,
        force=act_on_force(t, gamma.force),
        ic=t.act_on_ic(gamma.ic),
        period=None if gamma.period is None else gamma.period / abs(r),
        x_image=image,
        analysis=gamma.analysis,
        source=gamma.source,
    )


@dataclass(frozen=True)
class OrbitResult:
    """``canonical = witness . original``.

    ``kind`` is ``"magnetic"`` for ``F_{e1, rho}``, ``"exact"`` for ``F_{0, 1}``
    and ``"zero"`` for the zero force.
    """

    canonical: LorentzForce
    witness: IsometryScaling = field(repr=False)
    kind: str

    @property
    def rho(self) -> float:
        return self.canonical.rho


def canonicalize(F: LorentzForce) -> OrbitResult:
    beta, alpha, rho = F
    nu = math.hypot(beta, alpha)
    if nu < U_ZERO_TOL:
        if abs(rho) < U_ZERO_TOL:
            return OrbitResult(LorentzForce(0.0, 0.0, 0.0), IsometryScaling.identity(), "zero")
        return OrbitResult(LorentzForce(0.0, 0.0, 1.0), IsometryScaling(np.eye(2), 1.0 / rho), "exact")
    B = np.array([[beta, alpha], [-alpha, beta]]) / nu
    r = 1.0 / nu
    if rho < 0:
        B, r = -B, -r
    w = IsometryScaling(B, r)
    return OrbitResult(LorentzForce(1.0, 0.0, abs(rho) / nu), w, "magnetic")


def orbit_equal(F1: LorentzForce, F2: LorentzForce) -> bool:
    a, b = canonicalize(F1), canonicalize(F2)
    if a.kind != b.kind:
        return False
    if a.kind != "magnetic":
        return True
    scale = max(1.0, abs(a.rho), abs(b.rho))
    return abs(a.rho - b.rho) <= RHO_RTOL * scale


class Isotropy(str, enum.Enum):
    GENERIC_PAIR = "GenericPair"
    HARMONIC_FOUR = "HarmonicFour"
    EXACT_CIRCLE = "ExactCircle"
    FULL = "Full"

    def __str__(self) -> str:
        return self.value


def isotropy_description(F: LorentzForce) -> Isotropy:
    o = canonicalize(F)
    if o.kind == "zero":
        return Isotropy.FULL
    if o.kind == "exact":
        return Isotropy.EXACT_CIRCLE
    return Isotropy.GENERIC_PAIR if o.rho > U_ZERO_TOL else Isotropy.HARMONIC_FOUR


def isotropy_elements(F: LorentzForce, n_circle: int = 8) -> list[IsometryScaling]:
    """Elements of the isotropy subgroup of ``F`` (translations omitted).

    The continuous families are sampled at ``n_circle`` angles.  For a
    non-canonical ``F`` the elements of the canonical isotropy are conjugated
    by the canonicalization witness.
    """
    o = canonicalize(F)
    kind = isotropy_description(F)
    I = np.eye(2)
    if kind is Isotropy.GENERIC_PAIR:
        els = [IsometryScaling(I, 1.0), IsometryScaling(S, -1.0)]
    elif kind is Isotropy.HARMONIC_FOUR:
        els = [IsometryScaling(I, 1.0), IsometryScaling(-S, 1.0), IsometryScaling(-I, -1.0), IsometryScaling(S, -1.0)]
    else:
        angles = 2.0 * np.pi * np.arange(n_circle) / n_circle
        els = [IsometryScaling(rotation(a), 1.0) for a in angles]
        els += [IsometryScaling(rotation(a) @ S, -1.0) for a in angles]
        if kind is Isotropy.FULL:
            els += [IsometryScaling(rotation(a), s) for a in angles[:2] for s in (2.0, -0.5)]
            return els
    w = o.witness
    winv = w.inverse()
    return [winv.compose(e).compose(w) for e in els]
