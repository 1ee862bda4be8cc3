"""Pairwise support-function distances rho*(a_i - a_j), i < j.

Output is condensed in scipy ``pdist`` order.
"""
from __future__ import annotations

import numpy as np

from .._accel import njit


@njit
def pair_support_loop(points, axes):
    n, d = points.shape
    out = np.empty(n * (n - 1) // 2)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for c in range(d):
                t = (points[i, c] - points[j, c]) * axes[c]
                s += t * t
            out[k] = np.sqrt(s)
            k += 1
    return out


def pair_support_numpy(points: np.ndarray, axes: np.ndarray) -> np.ndarray:
    n, d = points.shape
    out = np.empty(n * (n - 1) // 2)
    k = 0
    for i in range(n - 1):
        diff = (points[i] - points[i + 1:]) * axes
        # accumulate coordinates in the same order as the loop kernel
        s = diff[:, 0] * diff[:, 0]
        for c in range(1, d):
            s += diff[:, c] * diff[:, c]
        out[k:k + s.size] = np.sqrt(s)
        k += s.size
    return out
