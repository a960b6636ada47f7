"""Evaluable curves through the identity and their metadata."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from .algebra import LorentzForce

__all__ = ["InitialVelocity", "Interval", "Trajectory", "frame_velocity"]


@dataclass(frozen=True)
class InitialVelocity:
    """``gamma'(0) = x0 e1 + y0 e2 + z0 e3``."""

    x0: float
    y0: float
    z0: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x0, self.y0, self.z0)):
            raise ValueError("initial velocity must be finite")

    @classmethod
    def coerce(cls, v) -> "InitialVelocity":
        if isinstance(v, cls):
            return v
        a, b, c = (float(t) for t in v)
        return cls(a, b, c)

    def __iter__(self):
        yield from (self.x0, self.y0, self.z0)

    def as_array(self) -> np.ndarray:
        return np.array([self.x0, self.y0, self.z0], dtype=float)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def contains(self, v, slack: float = 0.0):
        v = np.asarray(v)
        return (v >= self.lo - slack) & (v <= self.hi + slack)

    def shifted(self, s: float) -> "Interval":
        return Interval(self.lo + s, self.hi + s, self.lo_closed, self.hi_closed)

    def negated(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.hi_closed, self.lo_closed)

    def __str__(self) -> str:
        lb = "[" if self.lo_closed else "("
        rb = "]" if self.hi_closed else ")"
        return f"{lb}{self.lo:.12g}, {self.hi:.12g}{rb}"


def frame_velocity(states: np.ndarray) -> np.ndarray:
    """Left-frame components of the velocity for rows ``(x, y, z, x', y', z')``."""
    s = np.asarray(states, dtype=float)
    x, y, xp, yp, zp = s[..., 0], s[..., 1], s[..., 3], s[..., 4], s[..., 5]
    return np.stack([xp, yp, zp + 0.5 * (xp * y - x * yp)], axis=-1)


@dataclass(frozen=True)
class Trajectory:
    """A curve ``t -> (x, y, z, x', y', z')`` in exponential coordinates.

    ``evaluator`` maps a 1-d array of times to an ``(N, 6)`` array.  ``case``
    names the closed-form family (or ``"Numerical"`` for oracle output).
    ``x_image`` is the range of the x coordinate when it is known.
    """

    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    case: str
    force: LorentzForce
    ic: InitialVelocity
    period: Optional[float] = None
    x_image: Optional[Interval] = None
    analysis: Any = field(default=None, repr=False)
    source: str = "closed-form"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = self.evaluator(np.atleast_1d(t).ravel())
        if t.ndim == 0:
            return out[0]
        return out.reshape(t.shape + (6,))

    def position(self, t):
        return self(t)[..., :3]

    def velocity(self, t):
        return self(t)[..., 3:]

    def frame_velocity(self, t):
        return frame_velocity(self(t))

    def speed(self, t):
        return np.linalg.norm(self.frame_velocity(t), axis=-1)
