"""Sharp-radius calculator and ball-inclusion verification harness.

The sharp radii t(r) with B_m(x, t) contained in B_v(x, r) on R^n minus the
origin are closed forms per metric kind; ``verify_inclusion`` checks them
numerically by sampling the inner ball boundary and evaluating the visual
angle there.  The half-space suite checks the four Euclidean sandwich balls
of the v-ball around any upper half-space point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import halfspace as hs
from .balls import trace_ball
from .errors import DomainError, RangeError, UnsupportedMetric
from .geom import Domain, PuncturedSpace, as_point, contains
from .metrics import MetricKind, eval_many

#: Relative size of the cap excluded around the puncture when the inner
#: boundary touches it (the visual angle is undefined at the puncture).
EPS_CAP = 1e-6


def best_radius(metric: MetricKind, norm_x: float, r: float) -> float:
    """Sharp inclusion radius t(r): B_m(x, t) inside B_v(x, r) on R^n minus 0.

    ``norm_x`` enters only the Euclidean and chordal formulas.
    """
    if not 0.0 < r <= math.pi:
        raise RangeError(f"r must lie in (0, pi], got {r}")
    if norm_x <= 0.0:
        raise RangeError("norm_x must be positive")
    half = math.sin(0.5 * r)
    if metric is MetricKind.S:
        return half
    if metric is MetricKind.J:
        return math.log1p(2.0 * half)
    if metric is MetricKind.K:
        return r
    if metric is MetricKind.EUCLIDEAN:
        return norm_x * math.sin(r) if r <= 0.5 * math.pi else norm_x
    if metric is MetricKind.Q:
        return min(2.0 * norm_x * half / (1.0 + norm_x * norm_x),
                   norm_x / math.sqrt(1.0 + norm_x * norm_x))
    if metric is MetricKind.P:
        return half / math.sqrt(half * half + 1.0)
    raise UnsupportedMetric(f"no sharp inclusion radius for {metric!r}")


def lemma_r_max(metric: MetricKind, norm_x: float) -> float:
    """Largest r for which the interior-extremum sharpness analysis applies.

    j, k, p extend to pi.  s stops just short of pi (the s-ball becomes
    unbounded at t = 1).  The Euclidean and chordal radius formulas switch to
    their second branch at pi/2; past it the tangency witness degenerates
    onto the puncture (Euclidean) or the puncture/infinity (chordal), where
    the visual angle is undefined, so the interior sharpness analysis covers
    (0, pi/2] only for those two kinds.
    """
    if metric in (MetricKind.J, MetricKind.K, MetricKind.P):
        return math.pi
    if metric is MetricKind.S:
        return math.pi - 0.04
    if metric in (MetricKind.EUCLIDEAN, MetricKind.Q):
        return 0.5 * math.pi
    raise UnsupportedMetric(f"no inclusion range for {metric!r}")


@dataclass
class InclusionReport:
    """Outcome of checking B_inner(x, t) inside B_outer(x, r).

    Sample points are reported in the reduced frame used for the check
    (x on the positive first axis for the punctured-space fast path).
    """
    inner: tuple
    outer: tuple
    holds: bool
    min_margin: float
    worst_point: Optional[np.ndarray]
    sharpness_gap: float
    argmax_point: Optional[np.ndarray]
    truncated: int = 0
    capped: int = 0
    note: str = ""
    extras: dict = field(default_factory=dict)


def verify_inclusion(domain: Domain, inner: tuple, outer: tuple, x,
                     samples: int = 10_000, tol: float = 1e-9,
                     sharp_tol: float = 1e-3) -> InclusionReport:
    """Sample the inner ball boundary and evaluate the outer metric there.

    ``inner`` and ``outer`` are (MetricKind, radius) pairs; the outer metric
    must be the visual angle.  Truncated inner rays are sampled at the escape
    bound; samples inside the epsilon cap around a puncture are skipped.
    """
    in_kind, t = inner
    out_kind, r = outer
    if out_kind is not MetricKind.V:
        raise UnsupportedMetric("only inclusions into visual-angle balls are checked")
    if not 0.0 < r <= math.pi:
        raise RangeError(f"outer radius must lie in (0, pi], got {r}")
    xv = as_point(x)
    if not contains(domain, xv):
        raise DomainError("x must lie inside the domain")
    if t < 0.0:
        raise RangeError("inner radius must be nonnegative")
    if t == 0.0:
        # Degenerate single-point check at x.
        return InclusionReport(inner, outer, True, r, xv, r, xv,
                               note="empty inner boundary; degenerate check at x")

    if isinstance(domain, PuncturedSpace) and len(domain.obstacles) == 1:
        return _verify_punctured(domain, in_kind, t, r, xv, samples, tol, sharp_tol)

    if domain.dim != 2:
        raise DomainError("generic inclusion checks are two-dimensional")
    trace = trace_ball(domain, in_kind, xv, t, rays=max(16, samples))
    pts = trace.points
    v = eval_many(domain, MetricKind.V, xv, pts)
    return _report_from_values(inner, outer, r, pts, v,
                               len(trace.truncated_rays), 0, tol, sharp_tol)


def _polar_metric(kind: MetricKind, c: float):
    """m(x, y) with |x| = c as a function of polar (rho, phi) about the puncture.

    All six supported kinds are nondecreasing in phi for fixed rho, which is
    what makes the angular-extent bisection in ``_phi_extent`` valid.
    """
    def chord(rho, phi):
        return np.sqrt(np.maximum(c * c + rho * rho
                                  - 2.0 * c * rho * np.cos(phi), 0.0))

    if kind is MetricKind.S:
        return lambda rho, phi: chord(rho, phi) / (c + rho)
    if kind is MetricKind.J:
        return lambda rho, phi: np.log1p(chord(rho, phi) / np.minimum(c, rho))
    if kind is MetricKind.K:
        return lambda rho, phi: np.hypot(phi, np.log(c / rho))
    if kind is MetricKind.P:
        return lambda rho, phi: chord(rho, phi) / np.sqrt(
            chord(rho, phi) ** 2 + 4.0 * c * rho)
    if kind is MetricKind.Q:
        return lambda rho, phi: chord(rho, phi) / (
            math.sqrt(1.0 + c * c) * np.sqrt(1.0 + rho * rho))
    if kind is MetricKind.EUCLIDEAN:
        return chord
    raise UnsupportedMetric(f"no polar form for {kind!r}")


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _min_over_rho(f, c: float, phi: float):
    """Minimize rho -> f(rho, phi) over (0, inf); returns (min value, argmin)."""
    rho = c * np.geomspace(1e-8, 1e8, 257)
    vals = f(rho, phi)
    i = int(np.argmin(vals))
    a = math.log(rho[max(0, i - 1)])
    b = math.log(rho[min(len(rho) - 1, i + 1)])
    # Golden-section refinement in log space.
    cc = b - _INV_PHI * (b - a)
    dd = a + _INV_PHI * (b - a)
    fc = float(f(math.exp(cc), phi))
    fd = float(f(math.exp(dd), phi))
    while b - a > 1e-14:
        if fc < fd:
            b, dd, fd = dd, cc, fc
            cc = b - _INV_PHI * (b - a)
            fc = float(f(math.exp(cc), phi))
        else:
            a, cc, fc = cc, dd, fd
            dd = a + _INV_PHI * (b - a)
            fd = float(f(math.exp(dd), phi))
    if fc < fd:
        return fc, math.exp(cc)
    return fd, math.exp(dd)


def _phi_extent(f, c: float, t: float):
    """Largest phi reached by the ball {f <= t}: bisect the monotone margin.

    Returns (phi_max, rho at the touching point).  By monotonicity of f in
    phi, phi -> min over rho of f is nondecreasing, so the extent is the root
    of that margin and equals the supremum of the visual angle over the
    closed ball.
    """
    # Strictly-below threshold: at branch points (e.g. the Euclidean ball
    # through the puncture) rounding makes the tangent value oscillate around
    # t at machine precision, which would otherwise overshoot the extent.
    cut = t * (1.0 - 1e-12)
    mv, rho_star = _min_over_rho(f, c, math.pi)
    if mv <= cut:
        return math.pi, rho_star
    lo, hi = 0.0, math.pi
    rho_lo = c
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        mv, rho_star = _min_over_rho(f, c, mid)
        if mv <= cut:
            lo, rho_lo = mid, rho_star
        else:
            hi = mid
    return lo, rho_lo


def _verify_punctured(domain: PuncturedSpace, in_kind: MetricKind, t: float,
                      r: float, xv: np.ndarray, samples: int, tol: float,
                      sharp_tol: float) -> InclusionReport:
    # Reduce by rotational symmetry about the axis through the puncture and x:
    # every metric here depends only on |x|, |y| and the angle at the puncture.
    # The visual angle of a boundary point is exactly that polar angle, and
    # each metric is monotone in it, so the supremum of v over the inner ball
    # is its angular extent -- computed by bisection rather than boundary
    # sampling, which would miss corner and tangency extrema (resolution far
    # exceeds any sample count, so ``samples`` is not consumed here).
    z0 = domain.obstacles[0]
    c = float(np.linalg.norm(xv - z0))
    f = _polar_metric(in_kind, c)
    phi_max, rho_star = _phi_extent(f, c, t)
    point_flat = np.array([rho_star * math.cos(phi_max),
                           rho_star * math.sin(phi_max)])
    margin = r - phi_max
    capped = rho_star < EPS_CAP * c
    rep = InclusionReport((in_kind, t), (MetricKind.V, r), margin >= -tol,
                          margin, point_flat, margin, point_flat,
                          0, int(capped))
    if capped:
        rep.note = (f"extremal point inside the {EPS_CAP:g}|x| cap around "
                    "the puncture, where v is undefined")
    rep.extras["sharp"] = margin <= sharp_tol
    rep.extras["center_norm"] = c
    return rep


def _report_from_values(inner, outer, r, pts, v, truncated, capped, tol,
                        sharp_tol) -> InclusionReport:
    margins = r - v
    finite = np.isfinite(margins)
    i_min = int(np.argmin(np.where(finite, margins, math.inf)))
    i_max = int(np.argmax(np.where(finite, v, -math.inf)))
    min_margin = float(margins[i_min])
    gap = float(r - v[i_max])
    rep = InclusionReport(inner, outer, min_margin >= -tol, min_margin,
                          pts[i_min], gap, pts[i_max], truncated, capped)
    rep.extras["sharp"] = gap <= sharp_tol
    return rep


# ---------------------------------------------------------------------------
# Punctured-space suite
# ---------------------------------------------------------------------------

SUITE_METRICS = (MetricKind.S, MetricKind.J, MetricKind.K, MetricKind.P,
                 MetricKind.Q, MetricKind.EUCLIDEAN)


def punctured_suite(x_norms=(0.1, 1.0, 10.0), r_count: int = 30,
                    r_grid=None, metrics=SUITE_METRICS, samples: int = 10_000,
                    tol: float = 1e-9, sharp_tol: float = 1e-3):
    """Run the sharp-radius checks for every metric kind / radius / |x|.

    An explicit ``r_grid`` is clipped per metric kind to the range where the
    sharpness analysis applies (see :func:`lemma_r_max`).  Returns a list of
    row dicts ready for CSV/JSON serialization.
    """
    domain = PuncturedSpace([[0.0, 0.0]])
    rows = []
    for kind in metrics:
        for norm_x in x_norms:
            rmax = lemma_r_max(kind, norm_x)
            if r_grid is not None:
                radii = [r for r in r_grid if 0.0 < r <= rmax]
            else:
                radii = np.linspace(0.1, rmax, r_count)
            for r in radii:
                t = best_radius(kind, norm_x, float(r))
                rep = verify_inclusion(domain, (kind, t), (MetricKind.V, float(r)),
                                       [norm_x, 0.0], samples=samples, tol=tol,
                                       sharp_tol=sharp_tol)
                rows.append({
                    "metric": kind.value,
                    "norm_x": float(norm_x),
                    "r": float(r),
                    "t": t,
                    "holds": bool(rep.holds),
                    "min_margin": rep.min_margin,
                    "sharpness_gap": rep.sharpness_gap,
                    "sharp": bool(rep.extras.get("sharp")),
                    "argmax_point": None if rep.argmax_point is None
                    else [float(a) for a in rep.argmax_point],
                })
    return rows


# ---------------------------------------------------------------------------
# Half-space sandwich suite
# ---------------------------------------------------------------------------


def halfspace_inclusion_suite(x, r: float, samples: int = 10_000,
                              tol: float = 1e-9):
    """Check the four Euclidean sandwich balls against the v-ball around x.

    Inner-ball boundaries must stay at visual angle < r; the v-ball boundary
    curve must stay inside both outer balls.  Sharpness gaps are reported for
    inner1 (tangent) and outer1 (smallest containing); the inner2 gap is
    informational only.  Returns a list of four InclusionReports named in
    ``note``.
    """
    xv = as_point(x)
    if xv[-1] <= 0.0:
        raise DomainError("x must lie in the upper half space")
    n = xv.size
    xn = float(xv[-1])
    balls = hs.vball_sandwich(xv, r)
    u = np.zeros(n)
    u[0] = 1.0 if n > 2 or abs(xv[0]) >= 0.0 else 1.0
    en = np.zeros(n)
    en[-1] = 1.0

    theta = 2.0 * math.pi * np.arange(samples) / samples
    reports = []

    def v_on_circle(ball):
        # Vertical-plane cross-section covers the whole sphere by symmetry.
        pts = (ball.center[None, :]
               + ball.radius * (np.cos(theta)[:, None] * u[None, :]
                                + np.sin(theta)[:, None] * en[None, :]))
        h = np.linalg.norm(pts[:, :-1] - xv[None, :-1], axis=1)
        heights = pts[:, -1]
        vals = hs.v_halfplane_many(np.array([0.0, xn]),
                                   np.column_stack([h, heights]))
        return pts, vals

    for name in ("inner1", "inner2"):
        pts, vals = v_on_circle(balls[name])
        rep = _report_from_values((MetricKind.EUCLIDEAN, balls[name].radius),
                                  (MetricKind.V, r), r, pts, vals, 0, 0, tol,
                                  1e-4)
        rep.note = name
        reports.append(rep)

    curve = hs.vball_curve(r, samples=max(8, samples // 2))
    # Scale the normalized curve to center x (v is similarity invariant).
    poly = (xv[None, :] - xn * 0.0 * en[None, :]
            + xn * (curve.polyline[:, 0:1] * u[None, :]
                    + (curve.polyline[:, 1:2] - 1.0) * en[None, :])
            + 0.0)
    poly = xv[None, :] + xn * (curve.polyline[:, 0:1] * u[None, :]) \
        + xn * (curve.polyline[:, 1:2] - 1.0) * en[None, :]
    for name in ("outer1", "outer2"):
        ball = balls[name]
        d = np.linalg.norm(poly - ball.center[None, :], axis=1)
        margins = ball.radius - d
        i_min = int(np.argmin(margins))
        rep = InclusionReport((MetricKind.V, r),
                              ("euclidean-ball", ball.radius),
                              float(margins[i_min]) >= -tol * (1.0 + xn),
                              float(margins[i_min]), poly[i_min],
                              float(np.min(margins)), poly[i_min])
        rep.note = name
        if name == "outer1":
            ends = np.array([
                xv + xn * (curve.b1 - 1.0) * en,
                xv + xn * (curve.b2 - 1.0) * en,
            ])
            res = np.abs(np.linalg.norm(ends - ball.center[None, :], axis=1)
                         - ball.radius)
            rep.extras["endpoint_residuals"] = [float(a) for a in res]
        reports.append(rep)
    return reports


# ---------------------------------------------------------------------------
# Point-pair-function triangle inequality experiment
# ---------------------------------------------------------------------------


def p_triangle_experiment(domain: Domain, trials: int, rng_seed: int = 0,
                          slack: float = 1e-12):
    """Random search for a triangle-inequality violation of the point pair function.

    Samples triples (x, y, z) in the domain, biased toward the boundary where
    violations live, and returns the first triple with
    p(x,z) > p(x,y) + p(y,z) + slack, or None.
    """
    if trials < 1:
        raise RangeError("trials must be >= 1")
    rng = np.random.default_rng(rng_seed)
    batch = min(trials, 65536)
    done = 0
    while done < trials:
        m = min(batch, trials - done)
        X, Y, Z = (_sample_points(domain, rng, m) for _ in range(3))
        pxz = _p_many(domain, X, Z)
        pxy = _p_many(domain, X, Y)
        pyz = _p_many(domain, Y, Z)
        excess = pxz - pxy - pyz
        idx = np.nonzero(excess > slack)[0]
        if idx.size:
            i = int(idx[0])
            return {
                "x": X[i], "y": Y[i], "z": Z[i],
                "p_xz": float(pxz[i]),
                "p_xy_plus_p_yz": float(pxy[i] + pyz[i]),
                "excess": float(excess[i]),
            }
        done += m
    return None


def _sample_points(domain: Domain, rng, m: int) -> np.ndarray:
    from .geom import HalfSpace, UnitBall
    if isinstance(domain, UnitBall):
        # Bias radii toward the boundary, where d(x) is small.
        v = rng.standard_normal((m, domain.dim))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        rho = 1.0 - rng.random(m) ** 3
        return v * rho[:, None]
    if isinstance(domain, PuncturedSpace):
        scale = 1.0 + np.max(np.abs(domain.obstacles))
        pts = rng.standard_normal((m, domain.dim)) * scale
        bad = np.min(np.linalg.norm(pts[:, None, :] - domain.obstacles[None, :, :],
                                    axis=2), axis=1) == 0.0
        pts[bad] += 1e-9
        return pts
    if isinstance(domain, HalfSpace):
        pts = rng.standard_normal((m, domain.dim))
        pts[:, -1] = np.exp(rng.standard_normal(m))
        return pts
    raise DomainError(f"sampling not implemented for {domain!r}")


def _p_many(domain: Domain, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    from .geom import HalfSpace, UnitBall
    d = np.linalg.norm(X - Y, axis=1)
    if isinstance(domain, UnitBall):
        dx = 1.0 - np.linalg.norm(X, axis=1)
        dy = 1.0 - np.linalg.norm(Y, axis=1)
    elif isinstance(domain, PuncturedSpace):
        dx = np.min(np.linalg.norm(X[:, None, :] - domain.obstacles[None, :, :],
                                   axis=2), axis=1)
        dy = np.min(np.linalg.norm(Y[:, None, :] - domain.obstacles[None, :, :],
                                   axis=2), axis=1)
    elif isinstance(domain, HalfSpace):
        dx, dy = X[:, -1], Y[:, -1]
    else:
        raise DomainError(f"sampling not implemented for {domain!r}")
    return d / np.sqrt(d * d + 4.0 * dx * dy)
