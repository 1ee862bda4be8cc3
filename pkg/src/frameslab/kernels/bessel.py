"""Bessel J kernels for integer and half-integer order.

Orders are passed as ``twice_nu`` (an int >= -1) so that nu = twice_nu / 2
is exact.  Regimes:

* half-integer orders: J_{1/2}, J_{-1/2} in closed form, upward recurrence
  for z >= nu + 1, ascending series below that;
* integer orders: ascending series for z <= max(8, nu), Hankel expansion for
  z >= 25 + nu**2, Miller backward recurrence in between.

Both the numba loop and the numpy vectorised path implement the same regimes.
"""
from __future__ import annotations

import math

import numpy as np

from .._accel import njit

SERIES_MAX = 8.0
HANKEL_BASE = 25.0
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_RESCALE = 1e250


def hankel_threshold(twice_nu: int) -> float:
    nu = 0.5 * twice_nu
    return HANKEL_BASE + nu * nu


def series_threshold(twice_nu: int) -> float:
    nu = 0.5 * twice_nu
    if twice_nu % 2:
        return nu + 1.0
    return max(SERIES_MAX, nu)


@njit
def _series(twice_nu, z):
    nu = 0.5 * twice_nu
    h = 0.5 * z
    term = h ** nu / math.gamma(nu + 1.0)
    total = term
    h2 = h * h
    k = 0
    while k < 300:
        k += 1
        term = -term * h2 / (k * (k + nu))
        total += term
        if abs(term) <= 1e-18 * abs(total) and k > h:
            break
    return total


@njit
def _hankel(twice_nu, z):
    mu = float(twice_nu * twice_nu)
    p = 1.0
    q = 0.0
    term = 1.0
    prev = 1.0
    k = 0
    while k < 200:
        k += 1
        odd = 2 * k - 1
        term = term * (mu - odd * odd) / (8.0 * k * z)
        mag = abs(term)
        if mag == 0.0:
            break
        if mag > prev:
            break
        r = k % 4
        if r == 1:
            q += term
        elif r == 2:
            p -= term
        elif r == 3:
            q -= term
        else:
            p += term
        if mag < 1e-17:
            break
        prev = mag
    c = 0.25 * math.pi * (twice_nu + 1)
    cz = math.cos(z)
    sz = math.sin(z)
    cc = math.cos(c)
    sc = math.sin(c)
    cos_w = cz * cc + sz * sc
    sin_w = sz * cc - cz * sc
    return math.sqrt(2.0 / (math.pi * z)) * (p * cos_w - q * sin_w)


@njit
def _miller(n, z):
    top = max(float(n), z)
    m = 2 * ((int(top) + 20 + int(math.sqrt(40.0 * top))) // 2)
    jp1 = 0.0
    j = 1e-30
    ans = 0.0
    norm = 0.0
    k = m
    while k > 0:
        jm1 = (2.0 * k / z) * j - jp1
        jp1 = j
        j = jm1
        order = k - 1
        if order == n:
            ans = j
        if order == 0:
            norm += j
        elif order % 2 == 0:
            norm += 2.0 * j
        if abs(j) > _RESCALE:
            j /= _RESCALE
            jp1 /= _RESCALE
            ans /= _RESCALE
            norm /= _RESCALE
        k -= 1
    return ans / norm


@njit
def _half_closed(twice_nu, z):
    # twice_nu odd and z > 0: upward recurrence from the sin/cos forms
    amp = SQRT_2_OVER_PI / math.sqrt(z)
    jm = amp * math.cos(z)
    j = amp * math.sin(z)
    if twice_nu == -1:
        return jm
    tn = 1
    while tn < twice_nu:
        nxt = (tn / z) * j - jm
        jm = j
        j = nxt
        tn += 2
    return j


@njit
def jv_scalar(twice_nu, z):
    if z == 0.0:
        return 1.0 if twice_nu == 0 else 0.0
    if twice_nu % 2 != 0:
        if twice_nu < 0:
            return _half_closed(twice_nu, z)
        if z < 0.5 * twice_nu + 1.0:
            return _series(twice_nu, z)
        return _half_closed(twice_nu, z)
    nu = 0.5 * twice_nu
    if z <= max(SERIES_MAX, nu):
        return _series(twice_nu, z)
    if z >= HANKEL_BASE + nu * nu:
        return _hankel(twice_nu, z)
    return _miller(twice_nu // 2, z)


@njit
def jv_array_loop(twice_nu, z):
    out = np.empty(z.shape[0])
    for i in range(z.shape[0]):
        out[i] = jv_scalar(twice_nu, z[i])
    return out


# --------------------------------------------------------------------------
# numpy fallback


def _series_np(twice_nu, z):
    nu = 0.5 * twice_nu
    h = 0.5 * z
    term = h ** nu / math.gamma(nu + 1.0)
    total = term.copy()
    h2 = h * h
    hmax = float(h.max()) if h.size else 0.0
    for k in range(1, 300):
        term = -term * h2 / (k * (k + nu))
        total += term
        if k > hmax and np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
    return total


def _hankel_np(twice_nu, z):
    mu = float(twice_nu * twice_nu)
    p = np.ones_like(z)
    q = np.zeros_like(z)
    term = np.ones_like(z)
    prev = np.ones_like(z)
    live = np.ones(z.shape, dtype=bool)
    for k in range(1, 200):
        odd = 2 * k - 1
        term = term * (mu - odd * odd) / (8.0 * k * z)
        mag = np.abs(term)
        live &= (mag != 0.0) & (mag <= prev)
        if not live.any():
            break
        t = np.where(live, term, 0.0)
        r = k % 4
        if r == 1:
            q += t
        elif r == 2:
            p -= t
        elif r == 3:
            q -= t
        else:
            p += t
        live &= mag >= 1e-17
        prev = mag
    c = 0.25 * math.pi * (twice_nu + 1)
    cz, sz = np.cos(z), np.sin(z)
    cc, sc = math.cos(c), math.sin(c)
    cos_w = cz * cc + sz * sc
    sin_w = sz * cc - cz * sc
    return np.sqrt(2.0 / (math.pi * z)) * (p * cos_w - q * sin_w)


def _miller_np(n, z):
    top = max(float(n), float(z.max()))
    m = 2 * ((int(top) + 20 + int(math.sqrt(40.0 * top))) // 2)
    jp1 = np.zeros_like(z)
    j = np.full_like(z, 1e-30)
    ans = np.zeros_like(z)
    norm = np.zeros_like(z)
    for k in range(m, 0, -1):
        jp1, j = j, (2.0 * k / z) * j - jp1
        order = k - 1
        if order == n:
            ans = j.copy()
        if order == 0:
            norm += j
        elif order % 2 == 0:
            norm += 2.0 * j
        big = np.abs(j) > _RESCALE
        if big.any():
            s = np.where(big, 1.0 / _RESCALE, 1.0)
            j *= s
            jp1 *= s
            ans *= s
            norm *= s
    return ans / norm


def _half_closed_np(twice_nu, z):
    amp = SQRT_2_OVER_PI / np.sqrt(z)
    jm = amp * np.cos(z)
    j = amp * np.sin(z)
    if twice_nu == -1:
        return jm
    for tn in range(1, twice_nu, 2):
        jm, j = j, (tn / z) * j - jm
    return j


def jv_array_numpy(twice_nu: int, z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    zero = z == 0.0
    out[zero] = 1.0 if twice_nu == 0 else 0.0
    pos = ~zero
    if twice_nu % 2 != 0:
        if twice_nu < 0:
            out[pos] = _half_closed_np(twice_nu, z[pos])
            return out
        low = pos & (z < 0.5 * twice_nu + 1.0)
        high = pos & ~low
        if low.any():
            out[low] = _series_np(twice_nu, z[low])
        if high.any():
            out[high] = _half_closed_np(twice_nu, z[high])
        return out
    nu = 0.5 * twice_nu
    low = pos & (z <= max(SERIES_MAX, nu))
    high = pos & (z >= HANKEL_BASE + nu * nu)
    mid = pos & ~low & ~high
    if low.any():
        out[low] = _series_np(twice_nu, z[low])
    if high.any():
        out[high] = _hankel_np(twice_nu, z[high])
    if mid.any():
        out[mid] = _miller_np(twice_nu // 2, z[mid])
    return out


# Single-regime entry points, used to cross-validate around the switchovers.

def series_only(twice_nu: int, z: float) -> float:
    return float(_series(twice_nu, float(z)))


def hankel_only(twice_nu: int, z: float) -> float:
    return float(_hankel(twice_nu, float(z)))


def miller_only(n: int, z: float) -> float:
    return float(_miller(int(n), float(z)))
