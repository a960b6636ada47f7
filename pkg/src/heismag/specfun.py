"""Elliptic integrals of the first kind and Jacobi elliptic functions.

All routines take the *modulus* ``k`` (not the parameter ``m = k**2``) and
broadcast over numpy arrays.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

__all__ = [
    "agm",
    "ellip_K",
    "ellip_F",
    "carlson_rf",
    "jacobi_sncndn",
    "inv_cn",
    "inv_sn",
]

_AGM_RTOL = 1e-15
_MAX_DESCENT = 32


def _as_modulus(k, allow_one: bool):
    k = np.asarray(k, dtype=float)
    if np.any(~np.isfinite(k)) or np.any(k < 0.0):
        raise DomainError("modulus must be finite and non-negative")
    if allow_one:
        if np.any(k > 1.0):
            raise DomainError("modulus must satisfy 0 <= k <= 1")
    elif np.any(k >= 1.0):
        raise DomainError("modulus must satisfy 0 <= k < 1")
    return k


def _complement(k):
    # sqrt(1 - k^2) without cancellation near k = 1
    return np.sqrt((1.0 - k) * (1.0 + k))


def _agm_table(a0, b0):
    """Arithmetic-geometric mean sequences (a_n, c_n), vectorised.

    Stops once ``|a_n - b_n| <= 1e-15 a_n`` everywhere, or after 32 levels.
    """
    a = np.array(a0, dtype=float, copy=True)
    b = np.array(b0, dtype=float, copy=True)
    a_seq, c_seq = [a], [np.zeros_like(a)]
    for _ in range(_MAX_DESCENT):
        if np.all(np.abs(a - b) <= _AGM_RTOL * a):
            break
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    return a_seq, c_seq


def agm(a, b):
    """Arithmetic-geometric mean of non-negative ``a`` and ``b``."""
    a_seq, _ = _agm_table(*np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float)))
    return a_seq[-1][()]


def ellip_K(k):
    """Complete elliptic integral of the first kind, ``K(k) = pi / (2 agm(1, k'))``."""
    k = _as_modulus(k, allow_one=False)
    return (0.5 * np.pi / agm(np.ones_like(k), _complement(k)))[()]


def carlson_rf(x, y, z):
    """Carlson's symmetric integral R_F(x, y, z) by duplication.

    Arguments must be non-negative with at most one zero.
    """
    x, y, z = np.broadcast_arrays(*(np.array(v, dtype=float) for v in (x, y, z)))
    x, y, z = x.copy(), y.copy(), z.copy()
    if np.any((x < 0) | (y < 0) | (z < 0)):
        raise DomainError("carlson_rf needs non-negative arguments")
    a0 = (x + y + z) / 3.0
    # stricter than the usual (3 eps)^(-1/6) bound; the series below is 7th order
    q = (3.0 * np.finfo(float).eps) ** (-1.0 / 8.0) * np.maximum.reduce(
        [np.abs(a0 - x), np.abs(a0 - y), np.abs(a0 - z)]
    )
    a = a0.copy()
    scale = np.ones_like(a)
    for _ in range(64):
        if np.all(q * scale <= np.abs(a)):
            break
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        x, y, z, a = (x + lam) / 4.0, (y + lam) / 4.0, (z + lam) / 4.0, (a + lam) / 4.0
        scale = scale / 4.0
    X = (a - x) / a
    Y = (a - y) / a
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    series = (
        1.0
        - e2 / 10.0
        + e3 / 14.0
        + e2 * e2 / 24.0
        - 3.0 * e2 * e3 / 44.0
        - 5.0 * e2**3 / 208.0
        + 3.0 * e3 * e3 / 104.0
        + e2 * e2 * e3 / 16.0
    )
    return (series / np.sqrt(a))[()]


def ellip_F(phi, k):
    """Incomplete elliptic integral ``F(phi, k) = int_0^phi dtheta / sqrt(1 - k^2 sin^2 theta)``.

    Defined for every real ``phi`` through ``F(phi + n pi) = F(phi) + 2 n K``.
    """
    k = _as_modulus(k, allow_one=False)
    phi = np.asarray(phi, dtype=float)
    phi, k = np.broadcast_arrays(phi, k)
    n = np.round(phi / np.pi)
    red = phi - n * np.pi
    s, c = np.sin(red), np.cos(red)
    val = s * carlson_rf(c * c, 1.0 - (k * s) ** 2, np.ones_like(s))
    out = val + np.where(n != 0, 2.0 * n * ellip_K(k), 0.0)
    return np.asarray(out)[()]


def jacobi_sncndn(u, k):
    """Jacobi elliptic functions ``(sn, cn, dn)`` of argument ``u`` and modulus ``k``.

    Uses the descending Landen (AGM) scheme after reducing ``u`` modulo the
    real period ``4 K(k)``.  ``k = 0`` and ``k = 1`` return the circular and
    hyperbolic limits.
    """
    k = _as_modulus(k, allow_one=True)
    u = np.asarray(u, dtype=float)
    u, k = np.broadcast_arrays(u, k)
    sn = np.empty(u.shape)
    cn = np.empty(u.shape)
    dn = np.empty(u.shape)

    zero = k == 0.0
    one = k == 1.0
    mid = ~(zero | one)

    sn[zero], cn[zero], dn[zero] = np.sin(u[zero]), np.cos(u[zero]), 1.0
    if np.any(one):
        e = np.exp(-np.abs(u[one]))
        sech = 2.0 * e / (1.0 + e * e)
        sn[one], cn[one], dn[one] = np.tanh(u[one]), sech, sech

    if np.any(mid):
        km, um = k[mid], u[mid]
        a_seq, c_seq = _agm_table(np.ones_like(km), _complement(km))
        c_seq[0] = km
        n_lev = len(a_seq) - 1
        quarter = 0.5 * np.pi / a_seq[-1]
        period = 4.0 * quarter
        um = um - period * np.round(um / period)
        phi = (2.0**n_lev) * a_seq[-1] * um
        for n in range(n_lev, 0, -1):
            phi = 0.5 * (phi + np.arcsin(np.clip(c_seq[n] / a_seq[n] * np.sin(phi), -1.0, 1.0)))
        s, c = np.sin(phi), np.cos(phi)
        sn[mid], cn[mid] = s, c
        # dn^2 = k'^2 + k^2 cn^2 has no cancellation, unlike 1 - k^2 sn^2
        kc = _complement(km)
        dn[mid] = np.sqrt(kc * kc + (km * c) ** 2)
    return sn[()], cn[()], dn[()]


def _check_unit(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0) or np.any(~np.isfinite(x)):
        raise DomainError(f"{name} requires |x| <= 1")
    return x


def inv_cn(x, k):
    """Inverse of ``cn(., k)`` on ``[0, 2K]``."""
    x = _check_unit(x, "inv_cn")
    return ellip_F(np.arccos(x), k)


def inv_sn(x, k):
    """Inverse of ``sn(., k)`` on ``[-K, K]``."""
    x = _check_unit(x, "inv_sn")
    return ellip_F(np.arcsin(x), k)
