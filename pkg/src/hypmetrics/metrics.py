"""Metric and point-pair-function evaluators.

Each evaluator has an analytic fast path where one exists (finite boundary,
mirror reflection, per-edge minimization); ``sup_oracle`` is the shared
adaptive boundary-supremum fallback used as an independent cross-check.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import halfspace as hs
from .errors import (DomainError, DegenerateInput, MissingWindow, RangeError,
                     UnsupportedMetric)
from .geom import (Domain, HalfSpace, Polygon, PuncturedSpace, UnitBall,
                   angle_at, as_point, boundary_pieces, contains,
                   dist_to_boundary)

#: Sentinel for the point at infinity accepted by the chordal metric.
INFINITY = object()


class MetricKind(enum.Enum):
    S = "s"
    J = "j"
    K = "k"
    P = "p"
    Q = "q"
    V = "v"
    EUCLIDEAN = "euclidean"


class AntipodalAngleWarning(UserWarning):
    """Quasihyperbolic closed form evaluated at the antipodal angle pi."""


def _check_pair(domain: Domain, x, y):
    xv, yv = as_point(x), as_point(y)
    if not contains(domain, xv):
        raise DomainError(f"x={xv.tolist()} is not inside the domain")
    if not contains(domain, yv):
        raise DomainError(f"y={yv.tolist()} is not inside the domain")
    return xv, yv


def s_metric(domain: Domain, x, y) -> float:
    """Triangular ratio: sup over boundary z of |x-y| / (|x-z| + |z-y|)."""
    xv, yv = _check_pair(domain, x, y)
    d = float(np.linalg.norm(xv - yv))
    if d == 0.0:
        return 0.0
    if isinstance(domain, PuncturedSpace):
        sums = (np.linalg.norm(domain.obstacles - xv, axis=1)
                + np.linalg.norm(domain.obstacles - yv, axis=1))
        return d / float(np.min(sums))
    if isinstance(domain, HalfSpace):
        mirror = yv.copy()
        mirror[-1] = -mirror[-1]
        return d / float(np.linalg.norm(xv - mirror))
    if isinstance(domain, Polygon):
        best = math.inf
        for a, b in domain.edges():
            best = min(best, _min_path_via_segment(xv, yv, a, b))
        return min(1.0, d / best)
    if isinstance(domain, UnitBall):
        if domain.dim != 2:
            raise DomainError("s on the unit ball is only implemented in dimension 2")
        res = sup_oracle(domain, lambda z: d / (np.linalg.norm(xv - z)
                                                + np.linalg.norm(z - yv)),
                         tol=1e-13)
        return min(1.0, res.value)
    raise DomainError(f"unknown domain {domain!r}")


def _min_path_via_segment(x: np.ndarray, y: np.ndarray, a: np.ndarray,
                          b: np.ndarray) -> float:
    """Exact min over z in [a,b] of |x-z| + |z-y| (Heron reflection)."""
    ab = b - a
    nn = float(np.dot(ab, ab))
    if nn == 0.0:
        return float(np.linalg.norm(x - a) + np.linalg.norm(a - y))
    # Signed offsets of x, y from the edge line.
    n = np.array([-ab[1], ab[0]]) / math.sqrt(nn)
    hx = float(np.dot(x - a, n))
    hy = float(np.dot(y - a, n))
    cands = [a, b]
    if hx * hy > 0.0:
        # Same side: reflect y across the line, intersect [x, y'] with it.
        y_ref = y - 2.0 * hy * n
        dh = hx - float(np.dot(y_ref - a, n))
        if dh != 0.0:
            t = hx / dh
            if 0.0 <= t <= 1.0:
                z = x + t * (y_ref - x)
                u = float(np.dot(z - a, ab)) / nn
                cands.append(a + min(1.0, max(0.0, u)) * ab)
    else:
        # Opposite sides (or on the line): [x,y] meets the line.
        dh = hx - hy
        if dh != 0.0:
            z = x + (hx / dh) * (y - x)
            u = float(np.dot(z - a, ab)) / nn
            cands.append(a + min(1.0, max(0.0, u)) * ab)
        else:
            # Both on the line: closest point to either endpoint.
            u = float(np.dot(x - a, ab)) / nn
            cands.append(a + min(1.0, max(0.0, u)) * ab)
    return min(float(np.linalg.norm(x - z) + np.linalg.norm(z - y)) for z in cands)


def j_metric(domain: Domain, x, y) -> float:
    """Distance ratio: log(1 + |x-y| / min(d(x), d(y)))."""
    xv, yv = _check_pair(domain, x, y)
    d = float(np.linalg.norm(xv - yv))
    if d == 0.0:
        return 0.0
    m = min(dist_to_boundary(domain, xv), dist_to_boundary(domain, yv))
    return math.log1p(d / m)


def k_punctured(x, y) -> float:
    """Quasihyperbolic distance in R^n minus the origin: sqrt(phi^2 + log^2(|x|/|y|)).

    Extended continuously to phi = 0 (radial geodesic).  At phi = pi the
    formula value is returned but flagged with :class:`AntipodalAngleWarning`;
    the closed form is only stated for 0 < phi < pi.
    """
    xv, yv = as_point(x), as_point(y)
    nx, ny = float(np.linalg.norm(xv)), float(np.linalg.norm(yv))
    if nx == 0.0 or ny == 0.0:
        raise DomainError("k is undefined at the origin")
    phi = angle_at(xv, np.zeros_like(xv), yv)
    if phi >= math.pi - 1e-12:
        warnings.warn("antipodal configuration: closed form stated for angle < pi",
                      AntipodalAngleWarning, stacklevel=2)
    return math.hypot(phi, math.log(nx / ny))


def p_function(domain: Domain, x, y) -> float:
    """Point pair function: |x-y| / sqrt(|x-y|^2 + 4 d(x) d(y))."""
    xv, yv = _check_pair(domain, x, y)
    d = float(np.linalg.norm(xv - yv))
    if d == 0.0:
        return 0.0
    dx = dist_to_boundary(domain, xv)
    dy = dist_to_boundary(domain, yv)
    return d / math.sqrt(d * d + 4.0 * dx * dy)


def q_chordal(x, y) -> float:
    """Chordal metric on R^n plus the point at infinity (INFINITY sentinel)."""
    x_inf = x is INFINITY
    y_inf = y is INFINITY
    if x_inf and y_inf:
        return 0.0
    if x_inf or y_inf:
        fin = as_point(y if x_inf else x)
        return 1.0 / math.sqrt(1.0 + float(np.dot(fin, fin)))
    xv, yv = as_point(x), as_point(y)
    d = float(np.linalg.norm(xv - yv))
    return d / (math.sqrt(1.0 + float(np.dot(xv, xv)))
                * math.sqrt(1.0 + float(np.dot(yv, yv))))


def v_metric(domain: Domain, x, y) -> float:
    """Visual angle: sup over boundary z of the angle subtended by x, y at z."""
    xv, yv = _check_pair(domain, x, y)
    if np.array_equal(xv, yv):
        return 0.0
    if isinstance(domain, PuncturedSpace):
        return max(angle_at(xv, z, yv) for z in domain.obstacles)
    if isinstance(domain, HalfSpace):
        return hs.v_halfspace(xv, yv)
    if isinstance(domain, (UnitBall, Polygon)):
        res = visual_angle_oracle(domain, xv, yv)
        return res.value
    raise DomainError(f"unknown domain {domain!r}")


def evaluate(domain: Domain, kind: MetricKind, x, y) -> float:
    """Dispatch a metric evaluation by kind."""
    if kind is MetricKind.S:
        return s_metric(domain, x, y)
    if kind is MetricKind.J:
        return j_metric(domain, x, y)
    if kind is MetricKind.K:
        if not (isinstance(domain, PuncturedSpace) and len(domain.obstacles) == 1):
            raise UnsupportedMetric(
                "the quasihyperbolic closed form needs a single puncture")
        z0 = domain.obstacles[0]
        return k_punctured(as_point(x) - z0, as_point(y) - z0)
    if kind is MetricKind.P:
        return p_function(domain, x, y)
    if kind is MetricKind.Q:
        _check_pair(domain, x, y)
        return q_chordal(x, y)
    if kind is MetricKind.V:
        return v_metric(domain, x, y)
    if kind is MetricKind.EUCLIDEAN:
        xv, yv = _check_pair(domain, x, y)
        return float(np.linalg.norm(xv - yv))
    raise UnsupportedMetric(f"unknown metric kind {kind!r}")


def eval_many(domain: Domain, kind: MetricKind, x, Y: np.ndarray) -> np.ndarray:
    """Vectorized m(x, y_i) over rows of Y; +inf where y_i is outside the domain.

    Fast closed-form paths exist for PuncturedSpace (all kinds) and HalfSpace
    (s, j, v, euclidean); everything else falls back to a scalar loop.
    """
    xv = as_point(x)
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if isinstance(domain, PuncturedSpace):
        return _eval_many_punctured(domain, kind, xv, Y)
    if isinstance(domain, HalfSpace):
        out = _eval_many_halfspace(domain, kind, xv, Y)
        if out is not None:
            return out
    vals = np.empty(len(Y))
    for i, row in enumerate(Y):
        if not contains(domain, row):
            vals[i] = math.inf
        else:
            vals[i] = evaluate(domain, kind, xv, row)
    return vals


def _eval_many_punctured(domain: PuncturedSpace, kind: MetricKind,
                         x: np.ndarray, Y: np.ndarray) -> np.ndarray:
    obs = domain.obstacles
    diff = Y[:, None, :] - obs[None, :, :]
    dist_obs = np.linalg.norm(diff, axis=2)          # (m, k)
    dxy = np.linalg.norm(Y - x[None, :], axis=1)     # (m,)
    on_obstacle = np.min(dist_obs, axis=1) == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind is MetricKind.S:
            dx_obs = np.linalg.norm(obs - x[None, :], axis=1)
            vals = dxy / np.min(dist_obs + dx_obs[None, :], axis=1)
        elif kind is MetricKind.J:
            dx = float(np.min(np.linalg.norm(obs - x[None, :], axis=1)))
            dy = np.min(dist_obs, axis=1)
            vals = np.log1p(dxy / np.minimum(dx, dy))
        elif kind is MetricKind.P:
            dx = float(np.min(np.linalg.norm(obs - x[None, :], axis=1)))
            dy = np.min(dist_obs, axis=1)
            vals = dxy / np.sqrt(dxy * dxy + 4.0 * dx * dy)
            vals = np.where(dy == 0.0, 1.0, vals)
        elif kind is MetricKind.Q:
            vals = dxy / (math.sqrt(1.0 + float(np.dot(x, x)))
                          * np.sqrt(1.0 + np.einsum("ij,ij->i", Y, Y)))
        elif kind is MetricKind.EUCLIDEAN:
            vals = dxy
        elif kind is MetricKind.K:
            if len(obs) != 1:
                raise UnsupportedMetric(
                    "the quasihyperbolic closed form needs a single puncture")
            xr = x - obs[0]
            yr = Y - obs[0][None, :]
            ny = np.linalg.norm(yr, axis=1)
            nx = float(np.linalg.norm(xr))
            cosphi = np.clip((yr @ xr) / (nx * ny), -1.0, 1.0)
            vals = np.sqrt(np.arccos(cosphi) ** 2 + np.log(nx / ny) ** 2)
        elif kind is MetricKind.V:
            u = x[None, None, :] - obs[None, :, :]    # (1, k, n)
            nu = np.linalg.norm(u, axis=2)
            nw = dist_obs
            dots = np.einsum("mkn,mkn->mk", diff, np.broadcast_to(u, diff.shape))
            cosang = np.clip(dots / (nu * nw), -1.0, 1.0)
            vals = np.max(np.arccos(cosang), axis=1)
        else:
            raise UnsupportedMetric(f"unknown metric kind {kind!r}")
    vals = np.where(np.isnan(vals), math.inf, vals)
    if kind not in (MetricKind.EUCLIDEAN, MetricKind.Q, MetricKind.V):
        vals = np.where(on_obstacle, math.inf, vals)
    return vals


def _eval_many_halfspace(domain: HalfSpace, kind: MetricKind,
                         x: np.ndarray, Y: np.ndarray):
    heights = Y[:, -1]
    outside = heights <= 0.0
    dxy = np.linalg.norm(Y - x[None, :], axis=1)
    if kind is MetricKind.S:
        mirror = Y.copy()
        mirror[:, -1] = -mirror[:, -1]
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = dxy / np.linalg.norm(mirror - x[None, :], axis=1)
    elif kind is MetricKind.J:
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.log1p(dxy / np.minimum(x[-1], heights))
    elif kind is MetricKind.P:
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = dxy / np.sqrt(dxy * dxy + 4.0 * x[-1] * heights)
    elif kind is MetricKind.EUCLIDEAN:
        vals = dxy
    elif kind is MetricKind.V:
        h = np.linalg.norm(Y[:, :-1] - x[None, :-1], axis=1)
        safe_h = np.where(outside, 1.0, heights)
        vals = hs.v_halfplane_many(np.array([0.0, x[-1]]),
                                   np.column_stack([h, safe_h]))
    else:
        return None
    vals = np.where(np.isnan(vals), math.inf, vals)
    return np.where(outside, math.inf, vals)


# ---------------------------------------------------------------------------
# Boundary-supremum oracle
# ---------------------------------------------------------------------------

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class SupResult:
    """Outcome of an adaptive boundary supremum search.

    ``value`` is a lower bound on the true supremum; ``residual`` estimates
    the remaining refinement gap.
    """
    value: float
    argpoint: np.ndarray
    refinements: int
    residual: float


def sup_oracle(domain: Domain, objective, tol: float = 1e-9, window=None,
               seeds=()) -> SupResult:
    """Maximize ``objective`` over the domain boundary.

    Coarse sampling of every 1-d boundary piece followed by golden-section
    refinement of each local-maximum bracket, iterated until the inter-iterate
    improvement drops below ``tol``.  ``seeds`` are parameter hints (boundary
    projections of interesting points) around which the coarse grid is
    densified geometrically; without them very narrow peaks far from the grid
    nodes can be missed.
    """
    if tol <= 0.0:
        raise RangeError("tol must be positive")
    if isinstance(domain, PuncturedSpace):
        vals = [float(objective(z)) for z in domain.obstacles]
        i = int(np.argmax(vals))
        return SupResult(vals[i], np.array(domain.obstacles[i]), 0, 0.0)
    pieces = boundary_pieces(domain, window=window)
    best_val = -math.inf
    best_arg = None
    refinements = 0
    residual = 0.0
    for fmap, lo, hi in pieces:
        ts = _coarse_grid(lo, hi, seeds)
        vals = np.array([objective(fmap(t)) for t in ts])
        order = np.argsort(vals)[::-1]
        brackets = []
        for idx in order[:8]:
            a = ts[max(0, idx - 1)]
            b = ts[min(len(ts) - 1, idx + 1)]
            brackets.append((a, b))
        for a, b in brackets:
            t_star, v_star, iters, res = _golden_max(
                lambda t: objective(fmap(t)), a, b, tol)
            refinements += iters
            if v_star > best_val:
                best_val = v_star
                best_arg = fmap(t_star)
                residual = res
    return SupResult(best_val, best_arg, refinements, residual)


def _coarse_grid(lo: float, hi: float, seeds) -> np.ndarray:
    ts = [np.linspace(lo, hi, 257)]
    span = hi - lo
    for s in seeds:
        s = float(s)
        scales = span * np.geomspace(1e-12, 1.0, 48)
        ts.append(np.clip(s + scales, lo, hi))
        ts.append(np.clip(s - scales, lo, hi))
        ts.append(np.array([min(max(s, lo), hi)]))
    return np.unique(np.concatenate(ts))


def _golden_max(f, a: float, b: float, tol: float):
    """Golden-section maximization on [a, b]; returns (t, f(t), iters, residual)."""
    scale = 1.0 + abs(a) + abs(b)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best = max(fc, fd)
    iters = 0
    improvement = math.inf
    quiet = 0
    while iters < 250 and (b - a) > 1e-14 * scale and quiet < 8:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
            newbest = max(best, fc)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
            newbest = max(best, fd)
        improvement = newbest - best
        best = newbest
        quiet = quiet + 1 if improvement < tol else 0
        iters += 1
    t = c if fc > fd else d
    return t, max(fc, fd), iters, max(improvement, 0.0)


def visual_angle_oracle(domain: Domain, x, y, tol: float = 1e-10,
                        window=None) -> SupResult:
    """Brute-force sup of the subtended angle over the boundary.

    Independent verifier for the closed-form v evaluators.  For the half
    plane the window defaults to 20 * (|x| + |y| + 1) around the origin.
    """
    xv, yv = as_point(x), as_point(y)
    if np.array_equal(xv, yv):
        return SupResult(0.0, None, 0, 0.0)

    def objective(z):
        return angle_at(xv, z, yv)

    seeds = ()
    if isinstance(domain, HalfSpace):
        if domain.dim != 2:
            raise DomainError("visual angle oracle supports the half plane only")
        if window is None:
            w = 20.0 * (float(np.linalg.norm(xv)) + float(np.linalg.norm(yv)) + 1.0)
            window = (-w, w)
        seeds = (float(xv[0]), float(yv[0]), 0.5 * float(xv[0] + yv[0]))
    return sup_oracle(domain, objective, tol=tol, window=window, seeds=seeds)


def s_oracle(domain: Domain, x, y, tol: float = 1e-12, window=None) -> SupResult:
    """Brute-force sup of the triangular ratio over the boundary."""
    xv, yv = as_point(x), as_point(y)
    d = float(np.linalg.norm(xv - yv))
    if d == 0.0:
        return SupResult(0.0, None, 0, 0.0)

    def objective(z):
        return d / (float(np.linalg.norm(xv - z)) + float(np.linalg.norm(z - yv)))

    seeds = ()
    if isinstance(domain, HalfSpace):
        if window is None:
            w = 20.0 * (float(np.linalg.norm(xv)) + float(np.linalg.norm(yv)) + 1.0)
            window = (-w, w)
        seeds = (float(xv[0]), float(yv[0]), 0.5 * float(xv[0] + yv[0]))
    return sup_oracle(domain, objective, tol=tol, window=window, seeds=seeds)
