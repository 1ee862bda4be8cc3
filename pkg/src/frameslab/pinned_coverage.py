"""Pinned rho*-distance coverage on rasterised sets.

A set E is stored as the occupied cells of a regular grid of side h.  A
radius L counts as covered from a pin when some occupied cell centre x has
|rho*(x - pin) - L| <= h: a raster cannot witness an exact distance, so
every statement here is about shells of thickness 2h.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .convex_body import ConvexBody
from .decay_profile import DEFAULT_DELTA, DEFAULT_J0, DEFAULT_P, good_subset
from .errors import DomainError, ParseError, ResourceError
from .pointsets import PointSet

__all__ = [
    "MAX_CELLS",
    "GridSet",
    "CoverageReport",
    "pinned_distance_coverage",
    "refinement_coverage",
    "refinement_threshold_scan",
    "good_set_coverage_experiment",
    "load_mask",
    "save_mask",
]

MAX_CELLS = 50_000_000


@dataclass(frozen=True, eq=False)
class GridSet:
    """Occupied cells of the grid origin + h * Z^d inside a box of ``shape`` cells.

    Cell c covers origin + h * [c, c + 1); its centre is origin + h * (c + 1/2).
    """

    h: float
    origin: np.ndarray
    shape: tuple
    cells: np.ndarray

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError("resolution h must be positive")
        origin = np.array(self.origin, dtype=float).reshape(-1)
        d = origin.size
        if d not in (2, 3):
            raise DomainError("grid sets live in dimension 2 or 3")
        shape = tuple(int(s) for s in self.shape)
        if len(shape) != d or min(shape) < 1:
            raise DomainError("shape must give a positive cell count per axis")
        if math.prod(shape) > MAX_CELLS:
            raise ResourceError(f"box of {math.prod(shape)} cells exceeds the cap of {MAX_CELLS}")
        cells = np.asarray(self.cells, dtype=np.int64).reshape(-1, d)
        if cells.size and (cells.min() < 0 or np.any(cells.max(axis=0) >= np.array(shape))):
            raise DomainError("occupied cells must lie inside the box")
        cells = np.unique(cells, axis=0)
        cells.setflags(write=False)
        origin.setflags(write=False)
        object.__setattr__(self, "h", float(self.h))
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "cells", cells)

    @property
    def dimension(self) -> int:
        return self.origin.size

    def __len__(self) -> int:
        return self.cells.shape[0]

    @property
    def extent(self):
        """(lower corner, upper corner) of the box."""
        return self.origin.copy(), self.origin + self.h * np.array(self.shape)

    @property
    def density(self) -> float:
        return len(self) / math.prod(self.shape)

    def centers(self) -> np.ndarray:
        return self.origin + self.h * (self.cells + 0.5)

    def contains_point(self, x) -> bool:
        lo, hi = self.extent
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= lo) and np.all(x <= hi))

    def mask(self) -> np.ndarray:
        m = np.zeros(self.shape, dtype=bool)
        if len(self):
            m[tuple(self.cells.T)] = True
        return m

    def with_cells(self, cells) -> "GridSet":
        return GridSet(self.h, self.origin, self.shape, cells)

    # constructors -----------------------------------------------------------

    @classmethod
    def from_mask(cls, mask, h: float, origin) -> "GridSet":
        mask = np.asarray(mask, dtype=bool)
        return cls(h, origin, mask.shape, np.argwhere(mask))

    @classmethod
    def _box(cls, lo, hi, h: float):
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        if lo.shape != hi.shape or np.any(hi <= lo):
            raise DomainError("need lo < hi componentwise")
        shape = tuple(int(round(s)) for s in (hi - lo) / h)
        return lo, shape

    @classmethod
    def from_predicate(cls, predicate, lo, hi, h: float) -> "GridSet":
        """Cells of the box [lo, hi] whose centres satisfy ``predicate``.

        ``predicate`` maps an (m, d) array of centres to m booleans.
        """
        lo, shape = cls._box(lo, hi, h)
        axes = [lo[i] + h * (np.arange(n) + 0.5) for i, n in enumerate(shape)]
        grids = np.meshgrid(*axes, indexing="ij")
        centres = np.stack([g.ravel() for g in grids], axis=1)
        keep = np.asarray(predicate(centres), dtype=bool).reshape(shape)
        return cls(h, lo, shape, np.argwhere(keep))

    @classmethod
    def full(cls, lo, hi, h: float) -> "GridSet":
        lo, shape = cls._box(lo, hi, h)
        return cls.from_mask(np.ones(shape, dtype=bool), h, lo)

    @classmethod
    def empty(cls, lo, hi, h: float) -> "GridSet":
        lo, shape = cls._box(lo, hi, h)
        return cls(h, lo, shape, np.empty((0, lo.size), dtype=np.int64))

    @classmethod
    def checkerboard(cls, lo, hi, h: float, square: float = 1.0) -> "GridSet":
        """Union of the squares [k, k+1) * square with even coordinate sum."""
        def pred(c):
            return np.sum(np.floor(c / square).astype(np.int64), axis=1) % 2 == 0
        return cls.from_predicate(pred, lo, hi, h)

    @classmethod
    def union_of_boxes(cls, boxes, lo, hi, h: float) -> "GridSet":
        """Union of axis-aligned boxes given as (lower, upper) corner pairs."""
        boxes = [(np.asarray(a, dtype=float), np.asarray(b, dtype=float)) for a, b in boxes]

        def pred(c):
            out = np.zeros(c.shape[0], dtype=bool)
            for a, b in boxes:
                out |= np.all((c >= a) & (c < b), axis=1)
            return out
        return cls.from_predicate(pred, lo, hi, h)


@dataclass(frozen=True)
class CoverageReport:
    pin: np.ndarray
    L_values: np.ndarray
    covered: np.ndarray
    witness_count: np.ndarray
    L0_empirical: float | None
    thickness: float
    pin_outside: bool = False
    label: str = "exact"
    notes: list = field(default_factory=list)

    @property
    def all_covered(self) -> bool:
        return bool(np.all(self.covered))

    def uncovered(self) -> np.ndarray:
        return self.L_values[~self.covered]

    def to_dict(self) -> dict:
        return {
            "pin": [float(x) for x in self.pin],
            "L_values": [float(x) for x in self.L_values],
            "covered": [bool(x) for x in self.covered],
            "witness_count": [int(x) for x in self.witness_count],
            "L0_empirical": self.L0_empirical,
            "thickness": self.thickness,
            "pin_outside": self.pin_outside,
            "label": self.label,
            "notes": list(self.notes),
        }


def _check_L(L_values) -> np.ndarray:
    L = np.asarray(L_values, dtype=float).reshape(-1)
    if L.size == 0:
        raise DomainError("need at least one radius")
    if np.any(L <= 0) or np.any(np.diff(L) <= 0):
        raise DomainError("L_values must be positive and increasing")
    return L


def _l0(L: np.ndarray, covered: np.ndarray):
    if not covered[-1]:
        return None
    bad = np.nonzero(~covered)[0]
    return float(L[0] if bad.size == 0 else L[bad[-1] + 1])


def _witnesses(sorted_r: np.ndarray, L: np.ndarray, h: float) -> np.ndarray:
    return (np.searchsorted(sorted_r, L + h, side="right")
            - np.searchsorted(sorted_r, L - h, side="left"))


def _radii(E: GridSet, pin, body: ConvexBody, idx=None) -> np.ndarray:
    c = E.centers() if idx is None else E.origin + E.h * (E.cells[idx] + 0.5)
    if c.shape[0] == 0:
        return np.empty(0)
    return np.sort(np.atleast_1d(body.support(c - pin)))


def _prepare(E: GridSet, pin, body: ConvexBody, L_values):
    if body.dim != E.dimension:
        raise DomainError("grid and body dimensions differ")
    pin = np.asarray(pin, dtype=float).reshape(-1)
    if pin.size != E.dimension:
        raise DomainError(f"pin must have length {E.dimension}")
    return pin, _check_L(L_values)


def pinned_distance_coverage(E: GridSet, pin, body: ConvexBody, L_values) -> CoverageReport:
    """Which L have a cell centre x with |rho*(x - pin) - L| <= h."""
    pin, L = _prepare(E, pin, body, L_values)
    counts = _witnesses(_radii(E, pin, body), L, E.h)
    covered = counts > 0
    outside = not E.contains_point(pin)
    notes = [f"shells of half-width h = {E.h!r} stand in for exact radii"]
    if outside:
        notes.append("pin lies outside the grid box")
    return CoverageReport(pin, L, covered, counts, _l0(L, covered), E.h, outside, "exact", notes)


def refinement_coverage(E: GridSet, pin, body: ConvexBody, r: float, trials: int, seed: int,
                        L_values) -> CoverageReport:
    """Per-L worst case over ``trials`` random refinements keeping ceil(r |E|) cells.

    Refinements are uniform random subsets, not adversarial ones, so the
    result is a sampled worst case.  With r = 1 every trial keeps all cells
    and the outcome equals :func:`pinned_distance_coverage`.
    """
    if not 0 < r <= 1:
        raise DomainError("r must lie in (0, 1]")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    pin, L = _prepare(E, pin, body, L_values)
    m = len(E)
    keep = math.ceil(r * m)
    rng = np.random.default_rng(seed)
    worst = None
    for _ in range(trials):
        if keep == m:
            idx = None
        else:
            idx = np.sort(rng.choice(m, size=keep, replace=False))
        counts = _witnesses(_radii(E, pin, body, idx), L, E.h)
        worst = counts if worst is None else np.minimum(worst, counts)
    covered = worst > 0
    outside = not E.contains_point(pin)
    notes = [f"shells of half-width h = {E.h!r} stand in for exact radii",
             f"worst case over {trials} uniform random refinements at r = {r!r}"]
    if outside:
        notes.append("pin lies outside the grid box")
    return CoverageReport(pin, L, covered, worst, _l0(L, covered), E.h, outside,
                          "sampled worst case", notes)


def refinement_threshold_scan(E: GridSet, pin, body: ConvexBody, r_values, trials: int, seed: int,
                              L_values):
    """Run :func:`refinement_coverage` over ``r_values`` (descending).

    Returns (reports, r_fail) where r_fail is the first r at which some L
    loses coverage, or None.
    """
    reports = []
    r_fail = None
    for r in sorted((float(x) for x in r_values), reverse=True):
        rep = refinement_coverage(E, pin, body, r, trials, seed, L_values)
        reports.append((r, rep))
        if r_fail is None and not rep.all_covered:
            r_fail = r
    return reports, r_fail


def _plane_basis(A: PointSet, pin: np.ndarray):
    """Orthonormal (u1, u2): principal direction of A about the pin, then a
    coordinate direction made orthogonal to it."""
    d = A.dimension
    X = A.points - pin
    if np.any(X):
        _, vecs = np.linalg.eigh(X.T @ X)
        u1 = vecs[:, -1]
        u1 = u1 * (1.0 if u1[np.argmax(np.abs(u1))] > 0 else -1.0)
    else:
        u1 = np.eye(d)[0]
    for e in np.eye(d):
        w = e - (e @ u1) * u1
        n = np.linalg.norm(w)
        if n > 1e-6:
            return u1, w / n
    raise DomainError("could not build a plane")  # pragma: no cover


def good_set_coverage_experiment(A: PointSet, body: ConvexBody, delta: float = DEFAULT_DELTA,
                                 j0: int = DEFAULT_J0, pin_index: int = 0, L_values=None,
                                 p: float = DEFAULT_P) -> CoverageReport:
    """Coverage from a pin of the delta-neighbourhood of its good subset.

    The neighbourhood is rasterised at h = delta / 2.  For d > 3 (and for
    d = 3, to keep grids small) it is sliced by the plane through the pin
    spanned by the principal direction of A and an orthogonal coordinate
    direction; rho* is still measured in the ambient space.
    """
    if not 0 <= pin_index < len(A):
        raise DomainError(f"pin index {pin_index} out of range")
    pin = A.points[pin_index]
    good = good_subset(A, pin, body, p, delta, j0)
    h = delta / 2
    notes = [f"delta-neighbourhood of {len(good)} good points rasterised at h = {h!r}"]
    if A.dimension == 2:
        u1, u2 = np.eye(2)
    else:
        u1, u2 = _plane_basis(A, pin)
        notes.append("neighbourhood sliced by a 2-plane through the pin")
    basis = np.stack([u1, u2])
    if L_values is None:
        L_values = np.arange(1, 2 ** (j0 + 3) + 1, dtype=float)
    L = _check_L(L_values)

    def embed(q):
        return pin + q @ basis

    if len(good) == 0:
        plane = GridSet(h, [-h, -h], (2, 2), np.empty((0, 2), dtype=np.int64))
    else:
        q = (good.points - pin) @ basis.T
        # the slice meets the delta-ball around a point at distance
        # dist_perp from the plane in a disc of radius sqrt(delta^2 - dist_perp^2)
        perp = np.linalg.norm((good.points - pin) - q @ basis, axis=1)
        rad = np.sqrt(np.maximum(delta ** 2 - perp ** 2, 0.0))
        q, rad = q[perp <= delta], rad[perp <= delta]
        lo = np.floor((q.min(axis=0) - delta) / h) * h - h
        hi = np.ceil((q.max(axis=0) + delta) / h) * h + h
        shape = tuple(int(round(s)) for s in (hi - lo) / h)
        reach = int(math.ceil(delta / h)) + 1
        off = np.stack(np.meshgrid(np.arange(-reach, reach + 1), np.arange(-reach, reach + 1),
                                   indexing="ij"), axis=-1).reshape(-1, 2)
        base = np.floor((q - lo) / h).astype(np.int64)
        cand = (base[:, None, :] + off[None, :, :])
        centre = lo + h * (cand + 0.5)
        inside = np.linalg.norm(centre - q[:, None, :], axis=2) <= rad[:, None]
        cells = cand[inside]
        plane = GridSet(h, lo, shape, cells)
    centres = plane.centers()
    r = np.sort(np.atleast_1d(body.support(embed(centres) - pin))) if len(plane) else np.empty(0)
    counts = _witnesses(r, L, h)
    covered = counts > 0
    return CoverageReport(pin.copy(), L, covered, counts, _l0(L, covered), h, False, "exact", notes)


# --------------------------------------------------------------------------
# P1-style mask files


def save_mask(E: GridSet, path) -> None:
    """Write a 2-D grid as ``P1``, ``h <h> origin <x> <y>``, ``<w> <h>``, rows.

    Rows run from the top (largest y) down, as in the PBM format.
    """
    if E.dimension != 2:
        raise DomainError("mask files hold 2-D grids")
    m = E.mask()
    w, ht = m.shape
    lines = ["P1", f"h {E.h!r} origin {float(E.origin[0])!r} {float(E.origin[1])!r}", f"{w} {ht}"]
    for row in range(ht - 1, -1, -1):
        lines.append(" ".join("1" if v else "0" for v in m[:, row]))
    Path(path).write_text("\n".join(lines) + "\n")


def load_mask(path) -> GridSet:
    tokens = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                tokens.append((lineno, line))
    if not tokens or tokens[0][1] != "P1":
        raise ParseError("expected 'P1' magic", lineno=tokens[0][0] if tokens else 1)
    if len(tokens) < 3:
        raise ParseError("truncated header", lineno=tokens[-1][0])
    lineno, hdr = tokens[1]
    parts = hdr.split()
    try:
        if len(parts) != 5 or parts[0] != "h" or parts[2] != "origin":
            raise ValueError
        h, ox, oy = float(parts[1]), float(parts[3]), float(parts[4])
    except ValueError:
        raise ParseError(f"line {lineno}: expected 'h <res> origin <x> <y>'", lineno=lineno) from None
    lineno, dims = tokens[2]
    try:
        w, ht = (int(x) for x in dims.split())
    except ValueError:
        raise ParseError(f"line {lineno}: expected '<width> <height>'", lineno=lineno) from None
    bits = []
    last = lineno
    for lineno, line in tokens[3:]:
        for ch in line.replace(" ", ""):
            if ch not in "01":
                raise ParseError(f"line {lineno}: mask entries must be 0 or 1", lineno=lineno)
            bits.append(ch == "1")
        last = lineno
    if len(bits) != w * ht:
        raise ParseError(f"expected {w * ht} mask entries, found {len(bits)}", lineno=last)
    rows = np.array(bits, dtype=bool).reshape(ht, w)
    mask = rows[::-1].T
    try:
        return GridSet.from_mask(mask, h, [ox, oy])
    except DomainError as exc:
        raise ParseError(str(exc), lineno=2) from None
