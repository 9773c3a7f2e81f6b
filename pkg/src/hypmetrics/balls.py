"""Metric-ball boundary tracing and starlikeness / convexity certification.

Traces solve m(center, center + t * dir) = radius along uniformly spaced rays
with a coarse geometric scan followed by bisection, vectorized across all
rays.  Rays along which the metric never reaches the radius before the escape
bound are marked truncated (v-balls in punctured space are unbounded angular
sectors, for instance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, RangeError, UnboundedBall
from .geom import Domain, as_point, contains, dist_to_boundary
from .metrics import MetricKind, eval_many

_COARSE = 64
_BISECT_ITERS = 80

#: Valid open/half-open radius ranges per metric kind.
_RADIUS_MAX = {
    MetricKind.S: 1.0,
    MetricKind.V: math.pi,
    MetricKind.P: 1.0,
    MetricKind.Q: 1.0,
}


@dataclass
class BallTrace:
    """Polyline approximation of a metric-ball boundary.

    ``points`` has one row per ray (truncated rays hold the escape-bound
    point); ``polyline`` drops the truncated rays.
    """
    domain: Domain
    metric: MetricKind
    center: np.ndarray
    radius: float
    rays: int
    points: np.ndarray
    residuals: np.ndarray
    truncated_rays: list

    @property
    def polyline(self) -> np.ndarray:
        if not self.truncated_rays:
            return self.points
        keep = np.ones(len(self.points), dtype=bool)
        keep[self.truncated_rays] = False
        return self.points[keep]

    @property
    def closed(self) -> bool:
        return not self.truncated_rays


def _check_radius(metric: MetricKind, radius: float):
    if radius <= 0.0:
        raise RangeError("radius must be positive")
    rmax = _RADIUS_MAX.get(metric)
    if rmax is not None and radius > rmax:
        raise RangeError(f"radius {radius} exceeds the range of {metric.value}")


def escape_bound(domain: Domain, center: np.ndarray) -> float:
    """Bracketing bound beyond which a ray is declared truncated."""
    return 1e6 * (1.0 + float(np.linalg.norm(center))
                  + dist_to_boundary(domain, center))


def trace_ball(domain: Domain, metric: MetricKind, center, radius: float,
               rays: int = 720, tol: float = 1e-9) -> BallTrace:
    """Trace the boundary of B_m(center, radius) in a planar domain."""
    c = as_point(center)
    if c.size != 2:
        raise DomainError("ball tracing is two-dimensional")
    if not contains(domain, c):
        raise DomainError("center must lie inside the domain")
    _check_radius(metric, radius)
    if rays < 16:
        raise RangeError("rays must be >= 16")

    t_max = escape_bound(domain, c)
    t_min = 1e-12 * (1.0 + float(np.linalg.norm(c)))
    th = 2.0 * math.pi * np.arange(rays) / rays
    dirs = np.column_stack([np.cos(th), np.sin(th)])

    def g(ts: np.ndarray) -> np.ndarray:
        pts = c[None, :] + ts[:, None] * dirs
        return eval_many(domain, metric, c, pts)

    # Coarse geometric scan doubles as the monotonicity pre-scan: the first
    # node at or above the radius brackets the first crossing either way.
    grid = np.geomspace(t_min, t_max, _COARSE)
    vals = np.empty((_COARSE, rays))
    for i, t in enumerate(grid):
        vals[i] = g(np.full(rays, t))
    above = vals >= radius
    first = np.argmax(above, axis=0)
    truncated = ~np.any(above, axis=0)

    lo = np.where(first > 0, grid[np.maximum(first - 1, 0)], 0.0)
    hi = grid[first]
    lo = np.where(truncated, t_max, lo)
    hi = np.where(truncated, t_max, hi)

    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        take_hi = gm >= radius
        hi = np.where(take_hi, mid, hi)
        lo = np.where(take_hi, lo, mid)

    t_sol = np.where(truncated, t_max, 0.5 * (lo + hi))
    points = c[None, :] + t_sol[:, None] * dirs
    residuals = np.abs(g(t_sol) - radius)
    residuals[truncated] = np.nan
    return BallTrace(domain, metric, c, radius, rays, points, residuals,
                     list(np.nonzero(truncated)[0]))


# ---------------------------------------------------------------------------
# Starlikeness
# ---------------------------------------------------------------------------


def segments_stay_inside(membership, center, points, steps: int = 64):
    """Check that each segment [center, p] lies in the set given by ``membership``.

    Returns (ok, witness): the witness is the first interior sample found
    outside.  This is the generic starlikeness certificate; it is also
    usable stand-alone on synthetic polylines.
    """
    c = as_point(center)
    for p in np.atleast_2d(np.asarray(points, dtype=float)):
        for u in (np.arange(1, steps) / steps):
            q = c + u * (p - c)
            if not membership(q):
                return False, (p, q)
    return True, None


def starlike_check(domain: Domain, metric: MetricKind, center, radius: float,
                   rays: int = 360, steps: int = 64, tol: float = 1e-12):
    """Certify starlikeness of B_m(center, radius) with respect to its center.

    For the triangular ratio metric this checks monotonicity of the metric
    along each ray up to the boundary crossing; for other metrics each traced
    boundary point is connected back to the center and membership is sampled
    along the segment.  Returns (ok, witness).
    """
    c = as_point(center)
    trace = trace_ball(domain, metric, c, radius, rays=max(16, rays), tol=tol)
    th = 2.0 * math.pi * np.arange(trace.rays) / trace.rays
    dirs = np.column_stack([np.cos(th), np.sin(th)])
    t_sol = np.linalg.norm(trace.points - c[None, :], axis=1)
    if metric is MetricKind.S:
        frac = np.arange(1, steps + 1) / steps
        for i in range(trace.rays):
            ts = t_sol[i] * frac
            vals = eval_many(domain, metric, c, c[None, :] + ts[:, None] * dirs[i])
            diffs = np.diff(vals)
            bad = np.nonzero(diffs < -tol)[0]
            if bad.size:
                j = int(bad[0])
                return False, (dirs[i], ts[j], ts[j + 1])
        return True, None

    def member(q):
        return float(eval_many(domain, metric, c, q[None, :])[0]) < radius + 1e-9

    keep = np.ones(trace.rays, dtype=bool)
    if trace.truncated_rays:
        keep[trace.truncated_rays] = False
    return segments_stay_inside(member, c, trace.points[keep], steps=steps)


# ---------------------------------------------------------------------------
# Convexity
# ---------------------------------------------------------------------------


def convex_hull(points: np.ndarray) -> np.ndarray:
    """2-d convex hull (monotone chain), CCW, without the repeated endpoint."""
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def hull_deviation(points: np.ndarray):
    """Largest inward distance from any point to the hull boundary.

    Returns (deviation, witness).  Points in convex position give 0 up to
    rounding noise.
    """
    pts = np.asarray(points, dtype=float)
    hull = convex_hull(pts)
    if len(hull) <= 2:
        return 0.0, pts[0]
    a = hull
    b = np.roll(hull, -1, axis=0)
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    # Distance from every point to every hull edge, then min over edges.
    ax = pts[:, None, :] - a[None, :, :]
    t = np.clip(np.einsum("pek,ek->pe", ax, ab) / denom[None, :], 0.0, 1.0)
    proj = a[None, :, :] + t[:, :, None] * ab[None, :, :]
    d = np.linalg.norm(pts[:, None, :] - proj, axis=2)
    dmin = d.min(axis=1)
    i = int(np.argmax(dmin))
    return float(dmin[i]), pts[i]


@dataclass
class ConvexityReport:
    """Convexity (and optionally starlikeness) certificate for a ball trace."""
    convex: bool
    max_deviation: float
    witness: np.ndarray
    tol: float
    starlike: Optional[bool] = None
    starlike_witness: Optional[tuple] = None


def convexity_check(trace: BallTrace, tol: Optional[float] = None) -> ConvexityReport:
    """Certify convexity of a closed ball trace via its convex hull.

    The default tolerance is relative: 1e-6 times the trace diameter.
    """
    if trace.truncated_rays:
        raise UnboundedBall("cannot certify convexity of a truncated trace")
    pts = trace.points
    if tol is None:
        span = np.max(pts, axis=0) - np.min(pts, axis=0)
        tol = 1e-6 * float(np.hypot(span[0], span[1]))
    dev, witness = hull_deviation(pts)
    return ConvexityReport(dev <= tol, dev, witness, tol)


def certify_ball(domain: Domain, metric: MetricKind, center, radius: float,
                 rays: int = 720, tol: Optional[float] = None,
                 steps: int = 64) -> ConvexityReport:
    """Combined convexity + starlikeness certificate for one metric ball."""
    trace = trace_ball(domain, metric, center, radius, rays=rays)
    report = convexity_check(trace, tol=tol)
    ok, witness = starlike_check(domain, metric, center, radius,
                                 rays=min(rays, 360), steps=steps)
    report.starlike = ok
    report.starlike_witness = witness
    return report


@dataclass
class ThresholdScan:
    """Bracket for the convexity threshold radius on a grid."""
    last_convex: Optional[float]
    first_nonconvex: Optional[float]
    verdicts: dict


def convexity_threshold_scan(domain: Domain, metric: MetricKind, center,
                             r_grid, tol: Optional[float] = None,
                             rays: int = 720) -> ThresholdScan:
    """Scan a sorted radius grid and bracket the convexity threshold."""
    grid = [float(r) for r in r_grid]
    if grid != sorted(grid):
        raise RangeError("r_grid must be sorted ascending")
    verdicts = {}
    for r in grid:
        trace = trace_ball(domain, metric, center, r, rays=rays)
        verdicts[r] = convexity_check(trace, tol=tol).convex
    convex_rs = [r for r, ok in verdicts.items() if ok]
    nonconvex_rs = [r for r, ok in verdicts.items() if not ok]
    return ThresholdScan(max(convex_rs) if convex_rs else None,
                         min(nonconvex_rs) if nonconvex_rs else None,
                         verdicts)
