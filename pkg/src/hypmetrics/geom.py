"""Domain representations, boundary access, distances, and angles.

Every domain is an immutable value; all operations here are pure functions,
safe to call concurrently.  Geometry is done in double precision; comparisons
take a caller-supplied tolerance defaulting to ``DEFAULT_TOL``.
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, DegenerateAngle, MissingWindow

DEFAULT_TOL = 1e-9


def as_point(p) -> np.ndarray:
    """Coerce a coordinate sequence to a finite float vector of dimension >= 2."""
    a = np.asarray(p, dtype=float)
    if a.ndim != 1 or a.size < 2:
        raise DomainError(f"point must be a 1-d sequence of length >= 2, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("point has non-finite coordinates")
    return a


class PuncturedSpace:
    """G = R^n minus a nonempty finite set of obstacle points.

    The boundary is the obstacle set itself; the point at infinity is not a
    boundary point (angles subtended there are 0 and never attain a supremum).
    """

    def __init__(self, obstacles: Sequence[Sequence[float]]):
        pts = np.atleast_2d(np.asarray(obstacles, dtype=float))
        if pts.size == 0:
            raise DomainError("PuncturedSpace needs at least one obstacle")
        if pts.shape[1] < 2:
            raise DomainError("obstacles must have dimension >= 2")
        if not np.all(np.isfinite(pts)):
            raise DomainError("obstacle with non-finite coordinates")
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if np.array_equal(pts[i], pts[j]):
                    raise DomainError("obstacles must be pairwise distinct")
        self.obstacles = pts
        self.obstacles.setflags(write=False)
        self.dim = pts.shape[1]

    def __repr__(self):
        return f"PuncturedSpace({self.obstacles.tolist()})"


class HalfSpace:
    """G = {x in R^n : x_n > 0}."""

    def __init__(self, dim: int = 2):
        if dim < 2:
            raise DomainError("HalfSpace dimension must be >= 2")
        self.dim = int(dim)

    def __repr__(self):
        return f"HalfSpace(dim={self.dim})"


class UnitBall:
    """G = {x in R^n : |x| < 1}."""

    def __init__(self, dim: int = 2):
        if dim < 2:
            raise DomainError("UnitBall dimension must be >= 2")
        self.dim = int(dim)

    def __repr__(self):
        return f"UnitBall(dim={self.dim})"


class Polygon:
    """Interior of a simple planar polygon; vertices normalized to CCW order."""

    def __init__(self, vertices: Sequence[Sequence[float]]):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise DomainError("Polygon needs >= 3 two-dimensional vertices")
        if not np.all(np.isfinite(v)):
            raise DomainError("polygon vertex with non-finite coordinates")
        if _signed_area(v) < 0:
            v = v[::-1].copy()
        if not _is_simple(v):
            raise DomainError("polygon must be simple (non-self-intersecting)")
        self.vertices = v
        self.vertices.setflags(write=False)
        self.dim = 2

    def edges(self):
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def __repr__(self):
        return f"Polygon({self.vertices.tolist()})"


Domain = Union[PuncturedSpace, HalfSpace, UnitBall, Polygon]


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _segments_intersect(p1, p2, q1, q2) -> bool:
    # Proper or touching intersection of closed segments.
    def orient(a, b, c):
        d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if d > 0:
            return 1
        if d < 0:
            return -1
        return 0

    def on_seg(a, b, c):
        return (min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
                and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_seg(p1, p2, q1):
        return True
    if o2 == 0 and on_seg(p1, p2, q2):
        return True
    if o3 == 0 and on_seg(q1, q2, p1):
        return True
    if o4 == 0 and on_seg(q1, q2, p2):
        return True
    return False


def _is_simple(v: np.ndarray) -> bool:
    m = len(v)
    for i in range(m):
        a1, a2 = v[i], v[(i + 1) % m]
        for j in range(i + 1, m):
            if j == i or (j + 1) % m == i or (i + 1) % m == j:
                continue
            b1, b2 = v[j], v[(j + 1) % m]
            if _segments_intersect(a1, a2, b1, b2):
                return False
    return True


def _check_dim(domain: Domain, x: np.ndarray):
    if x.size != domain.dim:
        raise DomainError(f"point dimension {x.size} != domain dimension {domain.dim}")


def contains(domain: Domain, p) -> bool:
    """Strict interior membership test."""
    x = as_point(p)
    _check_dim(domain, x)
    if isinstance(domain, PuncturedSpace):
        return bool(np.min(np.linalg.norm(domain.obstacles - x, axis=1)) > 0.0)
    if isinstance(domain, HalfSpace):
        return x[-1] > 0.0
    if isinstance(domain, UnitBall):
        return float(np.linalg.norm(x)) < 1.0
    if isinstance(domain, Polygon):
        return _polygon_contains(domain, x)
    raise DomainError(f"unknown domain {domain!r}")


def _polygon_contains(poly: Polygon, x: np.ndarray) -> bool:
    if _dist_to_edges(poly, x) == 0.0:
        return False
    # Crossing-number test.
    v = poly.vertices
    inside = False
    j = len(v) - 1
    for i in range(len(v)):
        xi, yi = v[i]
        xj, yj = v[j]
        if (yi > x[1]) != (yj > x[1]):
            t = (x[1] - yi) / (yj - yi)
            if x[0] < xi + t * (xj - xi):
                inside = not inside
        j = i
    return inside


def _dist_to_edges(poly: Polygon, x: np.ndarray) -> float:
    v = poly.vertices
    a = v
    b = np.roll(v, -1, axis=0)
    ab = b - a
    ax = x[None, :] - a
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", ax, ab) / denom, 0.0, 1.0)
    proj = a + t[:, None] * ab
    return float(np.min(np.linalg.norm(proj - x[None, :], axis=1)))


def dist_to_boundary(domain: Domain, p) -> float:
    """d(x, boundary G) for a strictly interior point x."""
    x = as_point(p)
    _check_dim(domain, x)
    if not contains(domain, x):
        raise DomainError(f"point {x.tolist()} is not strictly inside {domain!r}")
    if isinstance(domain, PuncturedSpace):
        return float(np.min(np.linalg.norm(domain.obstacles - x, axis=1)))
    if isinstance(domain, HalfSpace):
        return float(x[-1])
    if isinstance(domain, UnitBall):
        return 1.0 - float(np.linalg.norm(x))
    return _dist_to_edges(domain, x)


def angle_at(x, z, y) -> float:
    """Angle at vertex z between segments [z,x] and [z,y], in [0, pi].

    The normalized inner product is clamped to [-1, 1] before inversion, so
    nearly collinear triples never raise.
    """
    xv, zv, yv = as_point(x), as_point(z), as_point(y)
    u = xv - zv
    w = yv - zv
    nu = float(np.linalg.norm(u))
    nw = float(np.linalg.norm(w))
    if nu == 0.0 or nw == 0.0:
        raise DegenerateAngle("angle vertex coincides with an endpoint")
    c = float(np.dot(u, w)) / (nu * nw)
    return math.acos(max(-1.0, min(1.0, c)))


def boundary_sample(domain: Domain, budget: int, window=None) -> np.ndarray:
    """Deterministic boundary sample: >= budget points for continuous boundaries.

    PuncturedSpace returns the obstacle set exactly.  HalfSpace needs a finite
    ``window = (lo, hi)`` and gets a uniform axis grid plus geometric tail
    points outside the window.
    """
    if budget < 2:
        raise DomainError("budget must be >= 2")
    if isinstance(domain, PuncturedSpace):
        return np.array(domain.obstacles)
    if isinstance(domain, UnitBall):
        if domain.dim == 2:
            th = np.linspace(0.0, 2.0 * math.pi, budget, endpoint=False)
            return np.column_stack([np.cos(th), np.sin(th)])
        rng = np.random.default_rng(0)
        v = rng.standard_normal((budget, domain.dim))
        return v / np.linalg.norm(v, axis=1, keepdims=True)
    if isinstance(domain, HalfSpace):
        if window is None:
            raise MissingWindow("HalfSpace boundary sampling needs a finite window")
        lo, hi = float(window[0]), float(window[1])
        if not lo < hi:
            raise DomainError("window must satisfy lo < hi")
        if domain.dim == 2:
            core = np.linspace(lo, hi, budget)
            half = 0.5 * (hi - lo)
            mid = 0.5 * (lo + hi)
            tails = mid + np.concatenate([half * 2.0 ** np.arange(1, 9),
                                          -half * 2.0 ** np.arange(1, 9)])
            xs = np.concatenate([core, tails])
            pts = np.zeros((xs.size, 2))
            pts[:, 0] = xs
            return pts
        rng = np.random.default_rng(0)
        pts = np.zeros((budget, domain.dim))
        pts[:, :-1] = rng.uniform(lo, hi, size=(budget, domain.dim - 1))
        return pts
    if isinstance(domain, Polygon):
        v = domain.vertices
        lengths = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
        total = float(lengths.sum())
        out = [v.copy()]
        for (a, b), ell in zip(domain.edges(), lengths):
            k = max(1, int(math.ceil(budget * ell / total)))
            t = (np.arange(k) + 0.5) / k
            out.append(a[None, :] + t[:, None] * (b - a)[None, :])
        return np.vstack(out)
    raise DomainError(f"unknown domain {domain!r}")


def boundary_pieces(domain: Domain, window=None):
    """1-d parametrizations of the boundary, as (map t->point, lo, hi) triples.

    Used by the supremum oracle.  PuncturedSpace has no continuous pieces and
    is handled by exhaustive enumeration instead.
    """
    if isinstance(domain, UnitBall):
        if domain.dim != 2:
            raise DomainError("boundary_pieces supports UnitBall in dimension 2 only")
        return [(lambda t: np.array([math.cos(t), math.sin(t)]), 0.0, 2.0 * math.pi)]
    if isinstance(domain, HalfSpace):
        if domain.dim != 2:
            raise DomainError("boundary_pieces supports HalfSpace in dimension 2 only")
        if window is None:
            raise MissingWindow("HalfSpace boundary pieces need a finite window")
        lo, hi = float(window[0]), float(window[1])
        return [(lambda t: np.array([t, 0.0]), lo, hi)]
    if isinstance(domain, Polygon):
        pieces = []
        for a, b in domain.edges():
            pieces.append((lambda t, a=a, b=b: a + t * (b - a), 0.0, 1.0))
        return pieces
    raise DomainError(f"no 1-d boundary parametrization for {domain!r}")


def domain_from_json(obj: dict) -> Domain:
    """Build a domain from its JSON description (see the CLI docs)."""
    try:
        kind = obj["type"]
    except (TypeError, KeyError):
        raise DomainError("domain JSON must be an object with a 'type' field")
    if kind == "punctured":
        return PuncturedSpace(obj["points"])
    if kind == "halfspace":
        return HalfSpace(int(obj.get("dim", 2)))
    if kind == "unitball":
        return UnitBall(int(obj.get("dim", 2)))
    if kind == "polygon":
        return Polygon(obj["vertices"])
    raise DomainError(f"unknown domain type {kind!r}")


def domain_to_json(domain: Domain) -> dict:
    if isinstance(domain, PuncturedSpace):
        return {"type": "punctured", "points": domain.obstacles.tolist()}
    if isinstance(domain, HalfSpace):
        return {"type": "halfspace", "dim": domain.dim}
    if isinstance(domain, UnitBall):
        return {"type": "unitball", "dim": domain.dim}
    if isinstance(domain, Polygon):
        return {"type": "polygon", "vertices": domain.vertices.tolist()}
    raise DomainError(f"unknown domain {domain!r}")
