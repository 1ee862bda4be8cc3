"""Normalised Gram matrices of exponential systems and their extreme eigenvalues.

For exponentials e_a(x) = exp(2 pi i x.a) restricted to K,

    <e_a, e_a'>_{L^2(K)} / |K| = chi_K^(a - a') / chi_K^(0),

so the Gram matrix has unit diagonal and its extreme eigenvalues are the
finite-section Riesz bounds of the system.  They bound nothing about the
infinite system and are labelled accordingly in reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _accel
from .convex_body import ConvexBody
from .decay_profile import DEFAULT_DELTA, DEFAULT_P, empirical_profile, profile_summary
from .errors import DomainError, ResourceError
from .fourier_body import ft_radial
from .kernels import jacobi as _jacobi
from .kernels import pairs as _pairs
from .pointsets import PointSet, density_estimate

__all__ = [
    "MAX_GRAM",
    "JACOBI_MAX",
    "GramSpectrum",
    "RieszReport",
    "pair_support_distances",
    "gram_matrix",
    "extreme_eigenvalues",
    "gram_spectrum",
    "Diagnostics",
    "frame_diagnostics",
    "riesz_report",
]

MAX_GRAM = 4000
JACOBI_MAX = 512
LAMBDA_PLAUSIBLE = 0.1


def pair_support_distances(A: PointSet, body: ConvexBody) -> np.ndarray:
    """rho*(a_i - a_j) for i < j, condensed (``pdist`` order)."""
    pts = np.ascontiguousarray(A.points)
    axes = body.axes
    if _accel.backend() == "numba":
        return _pairs.pair_support_loop(pts, axes)
    return _pairs.pair_support_numpy(pts, axes)


def gram_matrix(A: PointSet, body: ConvexBody) -> np.ndarray:
    n = len(A)
    if n < 1:
        raise DomainError("need at least one point")
    if n > MAX_GRAM:
        raise ResourceError(f"{n} points exceeds the dense Gram cap of {MAX_GRAM}")
    if A.dimension != body.dim:
        raise DomainError("point set and body dimensions differ")
    rho = pair_support_distances(A, body)
    vals = ft_radial(body.dim, math.prod(body.semi_axes), rho) / body.volume
    G = np.eye(n)
    iu = np.triu_indices(n, 1)
    G[iu] = vals
    G[(iu[1], iu[0])] = vals
    return G


def extreme_eigenvalues(G, tol: float = 1e-10):
    """(lambda_min, lambda_max) of a symmetric matrix to absolute accuracy tol.

    Dense cyclic Jacobi up to ``JACOBI_MAX`` rows; beyond that, ARPACK
    extremes accepted only when the residual |G v - lambda v| <= tol.
    """
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise DomainError("matrix must be square")
    scale = max(1.0, float(np.max(np.abs(G)))) if G.size else 1.0
    if G.size and np.max(np.abs(G - G.T)) > 1e-12 * scale:
        raise DomainError("matrix is not symmetric")
    n = G.shape[0]
    if n == 0:
        raise DomainError("empty matrix")
    if n == 1:
        return float(G[0, 0]), float(G[0, 0])
    if n <= JACOBI_MAX:
        w, _, off = _jacobi_eigs(G, tol)
        return float(w.min()), float(w.max())
    return _arpack_extremes(G, tol)


def _jacobi_eigs(G, tol, max_sweeps: int = 60):
    a = np.ascontiguousarray(G, dtype=float)
    tol2 = tol * tol
    if _accel.backend() == "numba":
        w, sweeps, off = _jacobi.jacobi_loop(a, tol2, max_sweeps)
    else:
        w, sweeps, off = _jacobi.jacobi_numpy(a, tol2, max_sweeps)
    if off > tol2:
        r = math.sqrt(off)
        raise ResourceError(
            f"Jacobi did not converge in {max_sweeps} sweeps",
            estimate=(float(w.min() - r), float(w.max() + r)),
            error_bound=r,
        )
    return w, sweeps, off


def _arpack_extremes(G, tol):
    from scipy.sparse.linalg import eigsh

    out = []
    for which in ("SA", "LA"):
        vals, vecs = eigsh(G, k=1, which=which, tol=tol * 1e-2, maxiter=20 * G.shape[0])
        lam, v = float(vals[0]), vecs[:, 0]
        resid = float(np.linalg.norm(G @ v - lam * v) / np.linalg.norm(v))
        if resid > tol:
            raise ResourceError(f"{which} eigenvalue residual {resid:.2e} above tol",
                                estimate=(lam - resid, lam + resid), error_bound=resid)
        out.append(lam)
    return out[0], out[1]


@dataclass(frozen=True)
class GramSpectrum:
    size: int
    lambda_min: float
    lambda_max: float
    offdiag_max: float

    def to_dict(self) -> dict:
        return {
            "n": self.size,
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "offdiag_max": self.offdiag_max,
        }


def gram_spectrum(A: PointSet, body: ConvexBody, tol: float = 1e-10, G=None) -> GramSpectrum:
    if G is None:
        G = gram_matrix(A, body)
    n = G.shape[0]
    off = float(np.max(np.abs(G - np.eye(n)))) if n > 1 else 0.0
    lo, hi = extreme_eigenvalues(G, tol)
    return GramSpectrum(n, lo, hi, off)


@dataclass
class RieszReport:
    spectrum: GramSpectrum
    verdict: str
    profile_verdict: str
    density_trend: str
    densities: list
    pins: list
    j_range: tuple
    lambda_min_above_threshold: bool
    notes: list = field(default_factory=list)
    profile: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = self.spectrum.to_dict()
        d.update({
            "verdict": self.verdict,
            "profile_verdict": self.profile_verdict,
            "density_trend": self.density_trend,
            "densities": [float(x) for x in self.densities],
            "pins": list(self.pins),
            "j_range": list(self.j_range),
            "lambda_min_threshold": LAMBDA_PLAUSIBLE,
            "lambda_min_above_threshold": self.lambda_min_above_threshold,
            "profile_summary": self.profile,
            "notes": list(self.notes),
        })
        return d


def _default_j_range(A: PointSet, pin) -> tuple:
    r = np.linalg.norm(A.points - pin, axis=1)
    r = r[r > 0]
    if r.size == 0:
        return (0, 0)
    return (int(np.frexp(r.min())[1] - 1), int(np.frexp(r.max())[1] - 1))


@dataclass
class Diagnostics:
    """Decay profiles per pin, their summary verdict and a density trend."""

    profiles: list
    pins: list
    j_range: tuple
    profile_verdict: str
    summary: dict
    density: object
    notes: list = field(default_factory=list)


def density_radii(A: PointSet) -> np.ndarray:
    extent = float(np.max(np.abs(A.points))) if len(A) else 0.0
    return extent * np.array([0.25, 0.4, 0.55, 0.7, 0.85, 1.0])


def frame_diagnostics(A: PointSet, body: ConvexBody, p: float = DEFAULT_P, pins=(0,), j_range=None,
                      delta: float = DEFAULT_DELTA, shell: str = "euclidean") -> Diagnostics:
    pins = [int(i) for i in pins]
    for i in pins:
        if not 0 <= i < len(A):
            raise DomainError(f"pin index {i} out of range")
    if j_range is None:
        j_range = _default_j_range(A, A.points[pins[0]])
    j_min, j_max = int(j_range[0]), int(j_range[1])
    profiles = [empirical_profile(A, A.points[i], body, p, j_min, j_max, delta, shell) for i in pins]
    notes = []
    if j_max - j_min + 1 >= 3:
        summary = profile_summary(profiles)
        verdict, sdict = summary.verdict, summary.to_dict()
    else:
        verdict, sdict = "undetermined", {"verdict": "undetermined"}
        notes.append("fewer than 3 dyadic scales; decay profile not assessed")
    radii = density_radii(A)
    dens = density_estimate(A, radii) if radii[-1] > 0 else None
    return Diagnostics(profiles, pins, (j_min, j_max), verdict, sdict, dens, notes)


def riesz_report(A: PointSet, body: ConvexBody, p: float = DEFAULT_P, pins=(0,), j_range=None,
                 delta: float = DEFAULT_DELTA, orth_tol: float = 1e-10, tol: float = 1e-10,
                 G=None, diagnostics: Diagnostics | None = None) -> RieszReport:
    """Gram spectrum, decay-profile verdict and density trend in one verdict.

    ``orthogonal-like`` when every off-diagonal entry is below ``orth_tol``;
    otherwise ``frame-obstructed`` when the c_j decay to zero across scales
    and ``frame-plausible`` when they do not.
    """
    spectrum = gram_spectrum(A, body, tol, G=G)
    diag = diagnostics or frame_diagnostics(A, body, p, pins, j_range, delta)
    notes = ["eigenvalues are finite-section bounds, not frame constants of the infinite system",
             f"lambda_min > {LAMBDA_PLAUSIBLE} is an engineering threshold, not a theorem"]
    notes += diag.notes
    if diag.density is not None:
        trend, densities = diag.density.trend, diag.density.densities.tolist()
    else:
        trend, densities = "flat", []
    if spectrum.offdiag_max <= orth_tol:
        verdict = "orthogonal-like"
    elif diag.profile_verdict == "obstruction-indicated":
        verdict = "frame-obstructed"
    else:
        verdict = "frame-plausible"
    return RieszReport(spectrum, verdict, diag.profile_verdict, trend, densities, diag.pins, diag.j_range,
                       bool(spectrum.lambda_min > LAMBDA_PLAUSIBLE), notes, diag.summary)
