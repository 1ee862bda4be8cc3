"""Finite point configurations: generators, I/O, perturbation, density."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError, ParseError, ResourceError
from .special_functions import bessel_j_zeros

__all__ = [
    "MAX_POINTS",
    "PointSet",
    "DensityEstimate",
    "lattice",
    "progression_line_set",
    "bessel_zero_line_set",
    "perturb",
    "density_estimate",
    "load_points",
    "save_points",
]

MAX_POINTS = 10_000_000


@dataclass(frozen=True, eq=False)
class PointSet:
    """An immutable (n, d) array of distinct points."""

    dimension: int
    points: np.ndarray

    def __post_init__(self):
        d = int(self.dimension)
        if d < 2:
            raise DomainError("dimension must be >= 2")
        pts = np.array(self.points, dtype=float)
        if pts.size == 0:
            pts = np.empty((0, d))
        if pts.ndim != 2 or pts.shape[1] != d:
            raise DomainError(f"points must have shape (n, {d})")
        if pts.shape[0] > MAX_POINTS:
            raise ResourceError(f"{pts.shape[0]} points exceeds the cap of {MAX_POINTS}")
        if not np.all(np.isfinite(pts)):
            raise DomainError("points must be finite")
        if pts.shape[0] > 1 and np.unique(pts, axis=0).shape[0] != pts.shape[0]:
            raise DomainError("points must be distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "dimension", d)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    def __getitem__(self, i):
        return self.points[i]

    @cached_property
    def separation(self) -> float:
        """Minimum pairwise Euclidean distance (inf for fewer than 2 points)."""
        if len(self) < 2:
            return math.inf
        dist, _ = cKDTree(self.points).query(self.points, k=2)
        return float(dist[:, 1].min())

    def translate(self, v) -> "PointSet":
        return PointSet(self.dimension, self.points + np.asarray(v, dtype=float))

    def subset(self, idx) -> "PointSet":
        return PointSet(self.dimension, self.points[np.asarray(idx)])

    def equals(self, other: "PointSet") -> bool:
        return self.dimension == other.dimension and np.array_equal(self.points, other.points)


def lattice(d: int, spacing: float, extent: float) -> PointSet:
    """All points of spacing * Z^d inside [-extent, extent]^d."""
    if spacing <= 0:
        raise DomainError("spacing must be positive")
    m = int(math.floor(extent / spacing + 1e-12))
    per_axis = 2 * m + 1
    if per_axis ** d > MAX_POINTS:
        raise ResourceError(f"lattice would hold {per_axis ** d} points (cap {MAX_POINTS})")
    axis = spacing * np.arange(-m, m + 1)
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    return PointSet(d, np.stack([g.ravel() for g in grids], axis=1))


def _unit(d: int, direction) -> np.ndarray:
    if direction is None:
        u = np.zeros(d)
        u[0] = 1.0
        return u
    u = np.asarray(direction, dtype=float)
    if u.shape != (d,):
        raise DomainError(f"direction must have length {d}")
    n = np.linalg.norm(u)
    if n == 0:
        raise DomainError("direction must be nonzero")
    return u if n == 1.0 else u / n


def progression_line_set(d: int, step: float, offset: float, count: int, direction=None) -> PointSet:
    """Points (offset + k step) * direction for k = 0 .. count-1."""
    if count < 1:
        raise DomainError("count must be >= 1")
    u = _unit(d, direction)
    t = offset + step * np.arange(count)
    return PointSet(d, t[:, None] * u)


def bessel_zero_line_set(d: int, count: int) -> PointSet:
    """Points t_k e_1 with t_k = z_k / (2 pi), z_k the zeros of J_{d/2}.

    These are the radii where the Fourier transform of the unit d-ball
    vanishes, so every difference t_k e_1 - 0 is a zero of it.
    """
    if d not in (2, 3, 5):
        raise DomainError("bessel_zero_line_set supports d in {2, 3, 5}")
    if not 1 <= count <= 200:
        raise DomainError("count must be between 1 and 200")
    t = bessel_j_zeros(d / 2, count) / (2 * math.pi)
    pts = np.zeros((count, d))
    pts[:, 0] = t
    return PointSet(d, pts)


def perturb(A: PointSet, magnitude_fn: Callable[[np.ndarray], np.ndarray] | float, seed: int) -> PointSet:
    """Displace each point p by a random vector of norm <= magnitude_fn(|p|).

    ``magnitude_fn`` may be a constant.  Directions are uniform on the sphere
    and radii uniform in the ball; the draw is reproducible from ``seed``.
    """
    n, d = A.points.shape
    norms = np.linalg.norm(A.points, axis=1)
    if callable(magnitude_fn):
        mag = np.asarray(magnitude_fn(norms), dtype=float) * np.ones(n)
    else:
        mag = np.full(n, float(magnitude_fn))
    if np.any(mag < 0) or not np.all(np.isfinite(mag)):
        raise DomainError("perturbation magnitudes must be finite and nonnegative")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    radius = mag * rng.random(n) ** (1.0 / d)
    return PointSet(d, A.points + radius[:, None] * g)


@dataclass(frozen=True)
class DensityEstimate:
    radii: np.ndarray
    counts: np.ndarray
    densities: np.ndarray
    trend: str


def _trend(values: np.ndarray, rel: float = 0.05) -> str:
    k = max(1, len(values) // 3)
    head = float(np.mean(values[:k]))
    tail = float(np.mean(values[-k:]))
    if head == tail == 0:
        return "flat"
    if tail > head * (1 + rel):
        return "increasing"
    if tail < head * (1 - rel):
        return "decreasing"
    return "flat"


def density_estimate(A: PointSet, radii: Sequence[float]) -> DensityEstimate:
    """Counts of A in the closed cubes [-R, R]^d, divided by (2R)^d."""
    r = np.asarray(radii, dtype=float)
    if r.size == 0:
        raise DomainError("need at least one radius")
    if np.any(r <= 0) or np.any(np.diff(r) <= 0):
        raise DomainError("radii must be positive and increasing")
    sup = np.sort(np.max(np.abs(A.points), axis=1)) if len(A) else np.empty(0)
    counts = np.searchsorted(sup, r, side="right")
    dens = counts / (2 * r) ** A.dimension
    return DensityEstimate(r, counts, dens, _trend(dens))


def save_points(A: PointSet, path) -> None:
    lines = [f"dim {A.dimension}"]
    lines += [" ".join(repr(float(c)) for c in p) for p in A.points]
    Path(path).write_text("\n".join(lines) + "\n")


def load_points(path) -> PointSet:
    """Read the ``dim <d>`` + one-point-per-line text format."""
    d = None
    rows = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if d is None:
                parts = line.split()
                if len(parts) != 2 or parts[0] != "dim":
                    raise ParseError(f"line {lineno}: expected 'dim <d>' header", lineno=lineno)
                try:
                    d = int(parts[1])
                except ValueError:
                    raise ParseError(f"line {lineno}: bad dimension {parts[1]!r}", lineno=lineno) from None
                if d < 2:
                    raise ParseError(f"line {lineno}: dimension must be >= 2", lineno=lineno)
                continue
            parts = line.split()
            if len(parts) != d:
                raise ParseError(f"line {lineno}: expected {d} coordinates, got {len(parts)}", lineno=lineno)
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                raise ParseError(f"line {lineno}: non-numeric coordinate", lineno=lineno) from None
    if d is None:
        raise ParseError("missing 'dim <d>' header", lineno=1)
    return PointSet(d, np.array(rows) if rows else np.empty((0, d)))
