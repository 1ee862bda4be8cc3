"""Balls and axis-aligned ellipsoids.

An ellipsoid with semi-axes a_i is K = T B with T = diag(a).  Its support
function is rho*(xi) = |T xi| and its gauge is rho(x) = |T^{-1} x|, so the
dual unit ball {rho* <= 1} is the ellipsoid with semi-axes 1/a_i.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError

__all__ = ["ConvexBody", "SurfaceNodes", "ball", "ellipsoid", "unit_ball_volume"]


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def unit_sphere_area(d: int) -> float:
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


class SurfaceNodes(NamedTuple):
    """Quadrature nodes on the dual unit sphere {rho* = 1}."""

    points: np.ndarray   # (n, d)
    weights: np.ndarray  # (n,)
    normals: np.ndarray  # (n, d), outward unit normals


def _norm(v: np.ndarray) -> np.ndarray:
    # scaled by the max entry to avoid underflow and overflow
    m = np.max(np.abs(v), axis=-1)
    safe = np.where(m > 0, m, 1.0)
    return m * np.sqrt(np.sum((v / safe[..., None]) ** 2, axis=-1))


@dataclass(frozen=True)
class ConvexBody:
    kind: str
    dim: int
    semi_axes: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in ("ball", "ellipsoid"):
            raise DomainError(f"unknown body kind {self.kind!r}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise DomainError("dimension must be an integer >= 2")
        axes = tuple(float(a) for a in self.semi_axes)
        if len(axes) != self.dim:
            raise DomainError(f"need {self.dim} semi-axes, got {len(axes)}")
        if not all(a > 0 and math.isfinite(a) for a in axes):
            raise DomainError("semi-axes must be positive and finite")
        if self.kind == "ball" and len(set(axes)) != 1:
            raise DomainError("a ball has equal semi-axes")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "semi_axes", axes)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_spec(cls, spec: dict) -> "ConvexBody":
        """Build from ``{"kind": ..., "dim": d, "semi_axes": [...]}``.

        ``semi_axes`` may be omitted for a ball (unit radius) or given as a
        single radius.
        """
        kind = spec["kind"]
        d = int(spec["dim"])
        axes = spec.get("semi_axes")
        if axes is None:
            if kind != "ball":
                raise DomainError("ellipsoid needs semi_axes")
            axes = [1.0] * d
        elif kind == "ball" and len(axes) == 1:
            axes = list(axes) * d
        return cls(kind, d, tuple(axes))

    def to_spec(self) -> dict:
        return {"kind": self.kind, "dim": self.dim, "semi_axes": list(self.semi_axes)}

    @property
    def axes(self) -> np.ndarray:
        return np.array(self.semi_axes)

    @property
    def volume(self) -> float:
        return unit_ball_volume(self.dim) * math.prod(self.semi_axes)

    # -- support function and gauge -----------------------------------------

    def _check(self, v):
        arr = np.asarray(v, dtype=float)
        if arr.shape[-1] != self.dim:
            raise DomainError(f"expected vectors of length {self.dim}, got shape {arr.shape}")
        return arr

    def support(self, xi):
        """rho*(xi) = sup_{x in K} x.xi; works on (..., d) arrays."""
        out = _norm(self._check(xi) * self.axes)
        return float(out) if out.ndim == 0 else out

    def support_gradient(self, xi) -> np.ndarray:
        arr = self._check(xi)
        return arr * self.axes ** 2 / _norm(arr * self.axes)[..., None]

    def minkowski(self, x):
        """Gauge inf{t > 0 : x/t in K}."""
        out = _norm(self._check(x) / self.axes)
        return float(out) if out.ndim == 0 else out

    def dual(self) -> "ConvexBody":
        """The body {rho* <= 1}."""
        return ConvexBody(self.kind, self.dim, tuple(1.0 / a for a in self.semi_axes))

    # -- curvature -----------------------------------------------------------

    def boundary_point(self, omega) -> np.ndarray:
        """The point of the boundary of K whose outward unit normal is omega."""
        w = self._unit(omega)
        return w * self.axes ** 2 / np.asarray(self.support(w))[..., None]

    def _unit(self, omega):
        w = self._check(omega)
        norm = np.linalg.norm(w, axis=-1)
        if np.any(norm == 0):
            raise DomainError("normal direction must be nonzero")
        if np.any(np.abs(norm - 1) > 1e-12):
            raise DomainError("normal direction must be a unit vector")
        return w

    def curvature(self, omega):
        """Gaussian curvature of the boundary where the outward normal is omega.

        For an ellipsoid kappa = (prod a)^-2 (sum x_i^2 / a_i^4)^(-(d+1)/2)
        at the boundary point x(omega) = a^2 omega / rho*(omega); since
        sum x_i^2/a_i^4 = 1/rho*(omega)^2 this is rho*(omega)^(d+1) / (prod a)^2.
        """
        w = self._unit(omega)
        rho = self.support(w)
        out = rho ** (self.dim + 1) / math.prod(self.semi_axes) ** 2
        return float(out) if np.ndim(out) == 0 else out

    # -- dual sphere ---------------------------------------------------------

    def dual_volume(self) -> float:
        """Volume of {u : rho*(u) <= 1}."""
        return unit_ball_volume(self.dim) / math.prod(self.semi_axes)

    def surface_quadrature(self, level: int) -> SurfaceNodes:
        """Nodes and weights on {rho* = 1}.

        The dual sphere is D S^{d-1} with D = diag(1/a); a sphere node omega
        maps to u = D omega with area factor |det D| |a * omega|.  In d = 2
        the sphere rule is the 8*level-point trapezoid rule in the angle; in
        d = 3 it is Gauss-Legendre in cos(theta) (4*level nodes) times the
        8*level-point trapezoid rule in phi.
        """
        if int(level) != level or level < 1:
            raise DomainError("level must be a positive integer")
        level = int(level)
        if self.dim == 2:
            n = 8 * level
            t = 2 * math.pi * np.arange(n) / n
            omega = np.stack([np.cos(t), np.sin(t)], axis=1)
            w = np.full(n, 2 * math.pi / n)
        elif self.dim == 3:
            x, wx = np.polynomial.legendre.leggauss(4 * level)
            n_phi = 8 * level
            phi = 2 * math.pi * np.arange(n_phi) / n_phi
            ct = np.repeat(x, n_phi)
            st = np.sqrt(1 - ct ** 2)
            ph = np.tile(phi, x.size)
            omega = np.stack([st * np.cos(ph), st * np.sin(ph), ct], axis=1)
            w = np.repeat(wx, n_phi) * (2 * math.pi / n_phi)
        else:
            raise DomainError("surface quadrature is implemented for d = 2 and d = 3")
        a = self.axes
        points = omega / a
        # rescale so rho*(point) = 1 to the last ulp
        points = points / self.support(points)[:, None]
        stretched = a * omega
        area = np.linalg.norm(stretched, axis=1) / math.prod(self.semi_axes)
        normals = stretched / np.linalg.norm(stretched, axis=1)[:, None]
        return SurfaceNodes(points, w * area, normals)


def ball(dim: int, radius: float = 1.0) -> ConvexBody:
    return ConvexBody("ball", dim, (radius,) * dim)


def ellipsoid(*semi_axes: float) -> ConvexBody:
    if len(semi_axes) == 1 and not np.isscalar(semi_axes[0]):
        semi_axes = tuple(semi_axes[0])
    return ConvexBody("ellipsoid", len(semi_axes), tuple(semi_axes))
