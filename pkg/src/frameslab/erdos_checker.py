"""Near-integer distance checks: residuals of rho*-distances against arithmetic
progressions, collinearity, and the d mod 4 classification.

A set whose pairwise rho*-distances sit asymptotically on c1*Z + c2 has to
lie on a line, and is finite unless d = 1 (mod 4).  Finite data cannot
certify a limit, so "asymptotically" is replaced by trend checks over
distance-sorted pairs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .convex_body import ConvexBody
from .errors import DomainError, ResourceError
from .gram_frames import pair_support_distances
from .pointsets import PointSet

__all__ = [
    "MAX_PAIRS",
    "ResidualReport",
    "Classification",
    "residual_one_pair",
    "residual_two_pair",
    "general_residuals",
    "collinearity",
    "classify",
]

MAX_PAIRS = 20_000_000


@dataclass(frozen=True)
class ResidualReport:
    """Per-pair residuals against the grid step * k + offset.

    ``pairs`` is an (m, 2) index array; the remaining arrays are aligned
    with it.
    """

    pairs: np.ndarray
    distance: np.ndarray
    nearest_k: np.ndarray
    residual: np.ndarray
    scaled_residual: np.ndarray
    step: float
    offset: float
    scaling_exponent: float

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residual))) if self.residual.size else 0.0

    def __len__(self) -> int:
        return self.pairs.shape[0]

    def rows(self):
        for (i, j), r, k, e, s in zip(self.pairs.tolist(), self.distance, self.nearest_k,
                                      self.residual, self.scaled_residual):
            yield i, j, float(r), int(k), float(e), float(s)


def _nearest(dist: np.ndarray, c1: float, c2: float):
    # np.rint rounds halves to even, so ties are resolved deterministically
    k = np.rint((dist - c2) / c1)
    return k.astype(np.int64), dist - (c1 * k + c2)


def _all_pairs(A: PointSet, body: ConvexBody):
    n = len(A)
    if n < 2:
        raise DomainError("need at least two points")
    if n * (n - 1) // 2 > MAX_PAIRS:
        raise ResourceError(f"{n} points give more than {MAX_PAIRS} pairs")
    if A.dimension != body.dim:
        raise DomainError("point set and body dimensions differ")
    i, j = np.triu_indices(n, 1)
    return np.stack([i, j], axis=1), pair_support_distances(A, body)


def general_residuals(A: PointSet, body: ConvexBody, c1: float, c2: float,
                      exponent: float = 1.0) -> ResidualReport:
    """Residual of rho*(a - a') against c1 * k + c2 for every pair i < j.

    ``scaled_residual`` is residual * |a - a'|**exponent.
    """
    if not c1 > 0:
        raise DomainError("c1 must be positive")
    pairs, dist = _all_pairs(A, body)
    k, res = _nearest(dist, float(c1), float(c2))
    eucl = np.linalg.norm(A.points[pairs[:, 0]] - A.points[pairs[:, 1]], axis=1)
    return ResidualReport(pairs, dist, k, res, res * eucl ** exponent, float(c1), float(c2), float(exponent))


def residual_one_pair(A: PointSet, body: ConvexBody) -> ResidualReport:
    """Residuals against the zero grid k/2 + (d-1)/8, scaled by |a - a'|."""
    return general_residuals(A, body, 0.5, (body.dim - 1) / 8, 1.0)


def residual_two_pair(A: PointSet, a0: int, a1: int, body: ConvexBody) -> ResidualReport:
    """Residuals of rho*(a0 - a) - rho*(a1 - a) against k/2, scaled by |a - a0|^2.

    Measuring |a| from a0 keeps the report translation invariant.
    ``pairs`` holds (index of a, index of a) so each row names the free point.
    """
    n = len(A)
    if n < 3:
        raise DomainError("need at least three points")
    for idx in (a0, a1):
        if not 0 <= idx < n:
            raise DomainError(f"index {idx} out of range")
    if a0 == a1:
        raise DomainError("a0 and a1 must differ")
    others = np.array([i for i in range(n) if i not in (a0, a1)], dtype=np.int64)
    pts = A.points[others]
    diff = body.support(A.points[a0] - pts) - body.support(A.points[a1] - pts)
    diff = np.atleast_1d(np.asarray(diff, dtype=float))
    k, res = _nearest(diff, 0.5, 0.0)
    rel = pts - A.points[a0]
    scaled = res * np.sum(rel * rel, axis=1)
    return ResidualReport(np.stack([others, others], axis=1), diff, k, res, scaled, 0.5, 0.0, 2.0)


def collinearity(A: PointSet, tol: float = 1e-9):
    """(is_collinear, max_deviation) for the principal line through the centroid."""
    if tol < 0:
        raise DomainError("tol must be nonnegative")
    n = len(A)
    if n == 0:
        raise DomainError("need at least one point")
    if n <= 2:
        return True, 0.0
    X = A.points - A.points.mean(axis=0)
    _, vecs = np.linalg.eigh(X.T @ X)
    u = vecs[:, -1]
    perp = X - np.outer(X @ u, u)
    dev = float(np.max(np.linalg.norm(perp, axis=1)))
    return bool(dev <= tol), dev


@dataclass(frozen=True)
class Classification:
    verdict: str
    d_mod_4: int
    size: int
    collinear: bool
    max_deviation: float
    max_residual: float
    head_max: float
    tail_max: float
    head_scaled_max: float
    tail_scaled_max: float
    residuals_pass: bool
    tension: bool
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "d_mod_4": self.d_mod_4,
            "n": self.size,
            "collinear": self.collinear,
            "max_deviation": self.max_deviation,
            "max_residual": self.max_residual,
            "head_max": self.head_max,
            "tail_max": self.tail_max,
            "head_scaled_max": self.head_scaled_max,
            "tail_scaled_max": self.tail_scaled_max,
            "residuals_pass": self.residuals_pass,
            "tension": self.tension,
            "notes": list(self.notes),
        }


def _thirds(report: ResidualReport):
    order = np.argsort(report.distance, kind="stable")
    res = np.abs(report.residual[order])
    sc = np.abs(report.scaled_residual[order])
    k = max(1, len(order) // 3)
    return float(res[:k].max()), float(res[-k:].max()), float(sc[:k].max()), float(sc[-k:].max())


def classify(A: PointSet, body: ConvexBody, residual_tol: float = 1e-9, line_tol: float = 1e-9,
             size_threshold: int = 3) -> Classification:
    """consistent-line, finiteness-forced or residuals-fail.

    Residuals pass when the largest residual over the farthest third of the
    pairs is below ``residual_tol``, or when it is below the nearest third's
    and the distance-scaled residuals do not grow (the O(1/|a - a'|) law).
    A passing line is consistent when d = 1 (mod 4) or the set is no larger
    than ``size_threshold``; everything else that passes is forced to be
    finite, with ``tension`` raised once the set exceeds the threshold.
    """
    d = body.dim
    n = len(A)
    notes = ["trend checks over finite data are proxies for the asymptotic hypotheses"]
    coll, dev = collinearity(A, line_tol)
    if n < 2:
        verdict = "consistent-line"
        return Classification(verdict, d % 4, n, coll, dev, 0.0, 0.0, 0.0, 0.0, 0.0, True, False, notes)
    rep = residual_one_pair(A, body)
    head, tail, shead, stail = _thirds(rep)
    ok = tail <= residual_tol or (tail < head and stail <= shead)
    if not ok:
        verdict, tension = "residuals-fail", False
    elif coll and (d % 4 == 1 or n <= size_threshold):
        verdict, tension = "consistent-line", False
    else:
        verdict, tension = "finiteness-forced", n > size_threshold
        if not coll:
            notes.append("non-collinear set with passing residuals")
        if d % 4 != 1:
            notes.append(f"d = {d} is not 1 mod 4, so such sets must be finite")
    return Classification(verdict, d % 4, n, coll, dev, rep.max_residual, head, tail, shead, stail,
                          bool(ok), bool(tension), notes)
