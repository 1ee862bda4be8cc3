"""Dyadic decay coefficients c_j, phase clustering and the co-area identity.

For an envelope phi the tightest admissible coefficient is

    c_j = ((1/2^j) int_{2^j}^{2^{j+1}} phi(t)^p dt)^{1/p} * 2^{j(d+1)/2},

and for a point set seen from a pin a' it is

    c_j(a') = ((1/2^{dj}) sum_{a in A_j} |chi_K^(a - a')|^p)^{1/p} * 2^{j(d+1)/2},

where A_j collects the points with 2^j <= |a - a'| < 2^{j+1}.  For p = inf
both become sups (the 2^{dj} averaging is dropped).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .convex_body import ConvexBody
from .errors import DomainError
from .fourier_body import ft_indicator_exact
from .pointsets import PointSet

__all__ = [
    "DEFAULT_DELTA",
    "DEFAULT_J0",
    "DEFAULT_P",
    "Envelope",
    "AnnulusBucket",
    "DecayProfile",
    "ProfileSummary",
    "envelope_cj",
    "annulus_partition",
    "phase_residual",
    "empirical_cj",
    "empirical_profile",
    "sin_cluster_fraction",
    "good_subset",
    "coarea_shell_integral",
    "profile_summary",
    "power_mean",
    "fit_envelope",
    "envelope_domination",
]

DEFAULT_DELTA = 1e-3
DEFAULT_J0 = 4
DEFAULT_P = 2.0


def _check_p(p) -> float:
    p = float(p)
    if not p >= 1:
        raise DomainError("exponent p must lie in [1, inf]")
    return p


@dataclass(frozen=True)
class Envelope:
    """A nonnegative function phi on [0, inf), optionally non-increasing.

    Nonnegativity and (when flagged) monotonicity are spot-checked on a
    geometric grid at construction.
    """

    evaluator: Callable[[float], float]
    monotone: bool = True

    def __post_init__(self):
        grid = np.concatenate([[0.0], np.geomspace(1e-3, 1e5, 400)])
        vals = np.array([float(self.evaluator(t)) for t in grid])
        if np.any(vals < 0) or np.any(np.isnan(vals)):
            raise DomainError("envelope must be nonnegative")
        if self.monotone and np.any(np.diff(vals) > 1e-15 * np.maximum(1.0, np.abs(vals[:-1]))):
            raise DomainError("envelope flagged monotone but increases somewhere")

    def __call__(self, t):
        return self.evaluator(t)


def envelope_cj(phi: Envelope | Callable, p: float, j: int, d: int) -> float:
    """Smallest c_j allowed for phi at dyadic scale j in dimension d."""
    p = _check_p(p)
    f = phi if callable(phi) else phi.evaluator
    lo, hi = 2.0 ** j, 2.0 ** (j + 1)
    scale = 2.0 ** (j * (d + 1) / 2)
    if math.isinf(p):
        grid = np.linspace(lo, hi, 2049)
        return float(max(f(t) for t in grid)) * scale
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(lambda t: f(t) ** p, lo, hi, epsabs=0.0, epsrel=1e-12, limit=400)
        except (integrate.IntegrationWarning, ZeroDivisionError, OverflowError) as exc:
            raise DomainError(f"phi^p is not integrable on [{lo}, {hi}]: {exc}") from None
    if not math.isfinite(val):
        raise DomainError(f"phi^p is not integrable on [{lo}, {hi}]")
    return (val / lo) ** (1.0 / p) * scale


@dataclass(frozen=True)
class AnnulusBucket:
    j: int
    members: np.ndarray  # indices into the point set


def _radii(A: PointSet, pin, body: ConvexBody | None, shell: str) -> np.ndarray:
    diff = A.points - np.asarray(pin, dtype=float)
    if shell == "euclidean":
        return np.sqrt(np.sum(diff * diff, axis=1))
    if shell == "rho":
        if body is None:
            raise DomainError("rho shells need a body")
        return np.asarray(body.support(diff)).reshape(-1)
    raise DomainError(f"unknown shell convention {shell!r}")


def _dyadic_index(r: np.ndarray) -> np.ndarray:
    # floor(log2 r) exactly, via the binary exponent
    _, e = np.frexp(r)
    return e.astype(np.int64) - 1


def annulus_partition(A: PointSet, pin, j_min: int, j_max: int,
                      body: ConvexBody | None = None, shell: str = "euclidean") -> list[AnnulusBucket]:
    """Dyadic shells 2^j <= |a - pin| < 2^{j+1} for j_min <= j <= j_max.

    The pin itself (distance 0) is never bucketed.  ``shell="rho"`` measures
    with rho* instead of the Euclidean norm.
    """
    if j_min > j_max:
        raise DomainError("need j_min <= j_max")
    if len(A) == 0:
        return [AnnulusBucket(j, np.empty(0, dtype=np.int64)) for j in range(j_min, j_max + 1)]
    r = _radii(A, pin, body, shell)
    idx = np.full(r.shape, np.iinfo(np.int64).min)
    pos = r > 0
    idx[pos] = _dyadic_index(r[pos])
    return [AnnulusBucket(j, np.nonzero(idx == j)[0]) for j in range(j_min, j_max + 1)]


def phase_residual(body: ConvexBody, v, p: float) -> np.ndarray:
    """|sin(2 pi (rho*(v) - (d-1)/8))|^p."""
    rho = np.asarray(body.support(v))
    return np.abs(np.sin(2 * math.pi * (rho - (body.dim - 1) / 8))) ** p


def power_mean(values, p: float) -> float:
    """(mean |v|^p)^{1/p}, or max |v| for p = inf; 0 for no values."""
    v = np.abs(np.asarray(values, dtype=float))
    if v.size == 0:
        return 0.0
    top = float(v.max())
    if math.isinf(p) or top == 0.0:
        return top
    # scale first so tiny values do not underflow when raised to p
    return top * float(np.mean((v / top) ** p) ** (1.0 / p))


def _cj_from_values(values: np.ndarray, p: float, j: int, d: int) -> float:
    scale = 2.0 ** (j * (d + 1) / 2)
    if values.size == 0:
        return 0.0
    if math.isinf(p):
        return float(np.max(np.abs(values))) * scale
    v = np.abs(values)
    top = float(v.max())
    if top == 0.0:
        return 0.0
    return top * float(np.sum((v / top) ** p) / 2.0 ** (d * j)) ** (1.0 / p) * scale


def empirical_cj(A: PointSet, pin, body: ConvexBody, p: float, j: int, shell: str = "euclidean") -> float:
    p = _check_p(p)
    bucket = annulus_partition(A, pin, j, j, body, shell)[0]
    vals = ft_indicator_exact(body, A.points[bucket.members] - np.asarray(pin, dtype=float))
    return _cj_from_values(np.atleast_1d(vals), p, j, A.dimension)


def sin_cluster_fraction(A: PointSet, pin, body: ConvexBody, p: float, delta: float, j: int,
                         shell: str = "euclidean") -> float:
    """Fraction of bucket j whose phase residual exceeds delta (0.0 if empty)."""
    p = _check_p(p)
    bucket = annulus_partition(A, pin, j, j, body, shell)[0]
    if bucket.members.size == 0:
        return 0.0
    res = phase_residual(body, A.points[bucket.members] - np.asarray(pin, dtype=float), p)
    return float(np.count_nonzero(res > delta) / bucket.members.size)


def good_subset(A: PointSet, pin, body: ConvexBody, p: float = DEFAULT_P, delta: float = DEFAULT_DELTA,
                j0: int = DEFAULT_J0, shell: str = "euclidean") -> PointSet:
    """Points at distance >= 2^j0 from the pin whose phase residual is <= delta."""
    p = _check_p(p)
    if not 0 < delta <= 1:
        raise DomainError("delta must lie in (0, 1]")
    if len(A) == 0:
        return A
    r = _radii(A, pin, body, shell)
    far = r >= 2.0 ** j0
    res = phase_residual(body, A.points - np.asarray(pin, dtype=float), p)
    keep = far & (res <= delta)
    return A.subset(np.nonzero(keep)[0])


def coarea_shell_integral(body: ConvexBody, F: Callable[[float], float], A: float, B: float) -> float:
    """int_{A <= rho*(u) <= B} F(rho*(u)) du = d |{rho* <= 1}| int_A^B F(t) t^{d-1} dt."""
    if not 0 < A < B:
        raise DomainError("need 0 < A < B")
    d = body.dim
    val, _ = integrate.quad(lambda t: F(t) * t ** (d - 1), A, B, epsabs=0.0, epsrel=1e-13, limit=200)
    return d * body.dual_volume() * val


@dataclass(frozen=True)
class DecayProfile:
    p: float
    j_values: np.ndarray
    c_values: np.ndarray
    kind: str
    pin: np.ndarray | None = None
    counts: np.ndarray | None = None
    sin_fraction: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("envelope", "empirical"):
            raise DomainError("kind is 'envelope' or 'empirical'")
        if len(self.j_values) != len(self.c_values):
            raise DomainError("j_values and c_values differ in length")
        if np.any(np.asarray(self.c_values) < 0):
            raise DomainError("c_j must be nonnegative")
        if self.kind == "empirical" and self.pin is None:
            raise DomainError("empirical profiles record their pin")


def empirical_profile(A: PointSet, pin, body: ConvexBody, p: float, j_min: int, j_max: int,
                      delta: float = DEFAULT_DELTA, shell: str = "euclidean") -> DecayProfile:
    """c_j, bucket counts and sin-cluster fractions for j_min..j_max in one pass."""
    p = _check_p(p)
    pin = np.asarray(pin, dtype=float)
    buckets = annulus_partition(A, pin, j_min, j_max, body, shell)
    cs, counts, fracs = [], [], []
    for b in buckets:
        diff = A.points[b.members] - pin
        vals = np.atleast_1d(ft_indicator_exact(body, diff)) if b.members.size else np.empty(0)
        cs.append(_cj_from_values(vals, p, b.j, A.dimension))
        counts.append(b.members.size)
        if b.members.size:
            fracs.append(np.count_nonzero(phase_residual(body, diff, p) > delta) / b.members.size)
        else:
            fracs.append(0.0)
    return DecayProfile(p, np.arange(j_min, j_max + 1), np.array(cs), "empirical", pin,
                        np.array(counts), np.array(fracs))


@dataclass(frozen=True)
class ProfileSummary:
    head_max: list
    tail_max: list
    max_head: float
    max_tail: float
    verdict: str
    rel_threshold: float = 0.1
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "per_pin_head_max": [float(x) for x in self.head_max],
            "per_pin_tail_max": [float(x) for x in self.tail_max],
            "max_head": float(self.max_head),
            "max_tail": float(self.max_tail),
            "rel_threshold": self.rel_threshold,
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def profile_summary(profiles: Sequence[DecayProfile], rel_threshold: float = 0.1,
                    abs_floor: float = 1e-12) -> ProfileSummary:
    """Tail-max proxy for limsup c_j, per pin and over pins.

    The tail is the last third of the j range and the head the first third.
    Verdict is ``obstruction-indicated`` when the worst tail is at most
    ``rel_threshold`` times the worst head (or below ``abs_floor``), i.e. the
    c_j look like they tend to zero; otherwise ``hypothesis-fails``.
    """
    if not profiles:
        raise DomainError("no profiles given")
    heads, tails = [], []
    for prof in profiles:
        c = np.asarray(prof.c_values, dtype=float)
        if c.size < 3:
            raise DomainError("need at least 3 dyadic scales")
        k = max(1, c.size // 3)
        heads.append(float(c[:k].max()))
        tails.append(float(c[-k:].max()))
    max_head, max_tail = max(heads), max(tails)
    decays = max_tail <= abs_floor or max_tail <= rel_threshold * max_head
    verdict = "obstruction-indicated" if decays else "hypothesis-fails"
    notes = ["tail max over the last third of scales is a finite proxy for limsup c_j"]
    return ProfileSummary(heads, tails, max_head, max_tail, verdict, rel_threshold, notes)


def fit_envelope(A: PointSet, pin, body: ConvexBody) -> Envelope:
    """phi(t) = M (1 + t)^{-(d+1)/2} with M the smallest constant dominating A."""
    diff = A.points - np.asarray(pin, dtype=float)
    rho = np.asarray(body.support(diff)).reshape(-1)
    keep = rho > 0
    expo = (body.dim + 1) / 2
    vals = np.abs(np.atleast_1d(ft_indicator_exact(body, diff[keep])))
    M = float(np.max(vals * (1 + rho[keep]) ** expo)) if vals.size else 0.0
    return Envelope(lambda t, M=M: M * (1.0 + t) ** -expo, monotone=True)


def envelope_domination(A: PointSet, pin, body: ConvexBody, phi, p: float, j_min: int, j_max: int):
    """Check |chi^(a - pin)| <= phi(rho*(a - pin)) and fit C with c_j <= C * envelope c_j.

    Returns ``(pointwise_ok, C, empirical, envelope)`` with per-j arrays.
    """
    diff = A.points - np.asarray(pin, dtype=float)
    rho = np.asarray(body.support(diff)).reshape(-1)
    keep = rho > 0
    vals = np.abs(np.atleast_1d(ft_indicator_exact(body, diff[keep])))
    bound = np.array([phi(t) for t in rho[keep]])
    pointwise_ok = bool(np.all(vals <= bound * (1 + 1e-12)))
    emp = empirical_profile(A, pin, body, p, j_min, j_max).c_values
    env = np.array([envelope_cj(phi, p, j, body.dim) for j in range(j_min, j_max + 1)])
    ratio = np.where(env > 0, emp / np.where(env > 0, env, 1.0), 0.0)
    return pointwise_ok, float(ratio.max()), emp, env
