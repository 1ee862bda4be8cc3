"""Cyclic Jacobi eigenvalue sweeps for dense symmetric matrices.

Both kernels rotate until the off-diagonal Frobenius mass drops below
tol**2 and return (eigenvalues, sweeps, off_mass); eigenvalues are then
within sqrt(off_mass) of the diagonal by Weyl's inequality.

The numba kernel uses the classic row-cyclic ordering with one rotation at
a time.  The numpy kernel uses a round-robin ordering in which n/2 disjoint
rotations are applied together, so every step is a handful of vector ops.
"""
from __future__ import annotations

import math

import numpy as np

from .._accel import njit


@njit
def _off_mass(a):
    n = a.shape[0]
    s = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                s += a[i, j] * a[i, j]
    return s


@njit
def jacobi_loop(a, tol2, max_sweeps):
    a = a.copy()
    n = a.shape[0]
    off = _off_mass(a)
    sweeps = 0
    while off > tol2 and sweeps < max_sweeps:
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
        off = _off_mass(a)
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i]
    return w, sweeps, off


def _round_robin(m: int):
    # m even; yields m-1 rounds of m/2 disjoint pairs covering all pairs once
    players = list(range(m))
    for _ in range(m - 1):
        half = m // 2
        top = players[:half]
        bot = players[half:][::-1]
        yield np.array(top), np.array(bot)
        players = [players[0]] + [players[-1]] + players[1:-1]


def jacobi_numpy(a: np.ndarray, tol2: float, max_sweeps: int):
    n = a.shape[0]
    m = n + (n % 2)
    work = np.zeros((m, m))
    work[:n, :n] = a
    # a padded row/column of zeros stays decoupled under the rotations
    schedule = list(_round_robin(m))
    off = _off_mass_np(work)
    sweeps = 0
    while off > tol2 and sweeps < max_sweeps:
        sweeps += 1
        for top, bot in schedule:
            p = np.minimum(top, bot)
            q = np.maximum(top, bot)
            apq = work[p, q]
            live = apq != 0.0
            if not live.any():
                continue
            p, q, apq = p[live], q[live], apq[live]
            app = work[p, p]
            aqq = work[q, q]
            tau = (aqq - app) / (2.0 * apq)
            sign = np.where(tau >= 0.0, 1.0, -1.0)
            with np.errstate(over="ignore"):
                t = sign / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            cp = work[:, p].copy()
            cq = work[:, q]
            work[:, p] = c * cp - s * cq
            work[:, q] = s * cp + c * cq
            rp = work[p, :].copy()
            rq = work[q, :]
            work[p, :] = c[:, None] * rp - s[:, None] * rq
            work[q, :] = s[:, None] * rp + c[:, None] * rq
            work[p, q] = 0.0
            work[q, p] = 0.0
        off = _off_mass_np(work)
    return np.diag(work)[:n].copy(), sweeps, off


def _off_mass_np(a: np.ndarray) -> float:
    b = a.copy()
    np.fill_diagonal(b, 0.0)
    return float(np.sum(b * b))
