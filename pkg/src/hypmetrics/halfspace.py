"""Closed-form visual-angle machinery for the upper half plane / half space.

Horocycle centers come from the parabola focus-directrix condition
|x - z| = z_2 = |y - z|; the extremal boundary point for the visual angle is
the horizontal projection of a horocycle center.  Instead of tracking the
sign bookkeeping of the branch rule, both candidate projections are evaluated
and the larger subtended angle wins (equivalent and robust).
"""

from __future__ import annotations

import math
from collections import namedtuple
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, DegenerateInput, RangeError
from .geom import angle_at, as_point

#: Relative height difference below which the x2 == y2 midpoint rule is used.
_DEGENERATE_REL = 1e-9

Ball = namedtuple("Ball", ["center", "radius"])


@dataclass
class HorocyclePair:
    """Centers of the two horocycles through x and y tangent to the real axis."""
    z_plus: np.ndarray
    z_minus: np.ndarray
    degenerate: bool


def _check_upper(p: np.ndarray, name: str):
    if p[-1] <= 0.0:
        raise DomainError(f"{name} must have positive height, got {p.tolist()}")


def horocycle_centers(x, y) -> HorocyclePair:
    """Solve |x-z| = z_2 = |y-z| for the two centers z = (z_1, z_2).

    For x_2 != y_2 the two z_1 branches come from the quadratic solution; for
    (nearly) equal heights the exact limit z_1 = (x_1 + y_1) / 2 is used and
    the single center is returned in both slots with ``degenerate=True``.
    """
    xv, yv = as_point(x), as_point(y)
    if xv.size != 2 or yv.size != 2:
        raise DomainError("horocycle centers are a planar construction")
    _check_upper(xv, "x")
    _check_upper(yv, "y")
    if np.array_equal(xv, yv):
        raise DegenerateInput("x and y must be distinct")
    x1, x2 = float(xv[0]), float(xv[1])
    y1, y2 = float(yv[0]), float(yv[1])
    if abs(x2 - y2) < _DEGENERATE_REL * max(x2, y2):
        z1 = 0.5 * (x1 + y1)
        z2 = ((x1 - z1) ** 2 + x2 * x2) / (2.0 * x2)
        z = np.array([z1, z2])
        return HorocyclePair(z, z.copy(), True)
    dxy = math.hypot(x1 - y1, x2 - y2)
    root = math.sqrt(x2 * y2) * dxy
    base = x2 * y1 - x1 * y2
    centers = []
    for sign in (+1.0, -1.0):
        z1 = (base + sign * root) / (x2 - y2)
        z2 = ((x1 - z1) ** 2 + x2 * x2) / (2.0 * x2)
        centers.append(np.array([z1, z2]))
    return HorocyclePair(centers[0], centers[1], False)


def v_halfplane(x, y) -> float:
    """Visual angle metric in the upper half plane, via horocycle centers."""
    xv, yv = as_point(x), as_point(y)
    _check_upper(xv, "x")
    _check_upper(yv, "y")
    if np.array_equal(xv, yv):
        return 0.0
    pair = horocycle_centers(xv, yv)
    cands = [pair.z_plus] if pair.degenerate else [pair.z_plus, pair.z_minus]
    best = 0.0
    for z in cands:
        best = max(best, angle_at(xv, np.array([z[0], 0.0]), yv))
    return best


def v_halfplane_many(x, Y: np.ndarray) -> np.ndarray:
    """Vectorized ``v_halfplane(x, y_i)`` over rows of Y."""
    xv = as_point(x)
    _check_upper(xv, "x")
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if np.any(Y[:, 1] <= 0.0):
        raise DomainError("all points must have positive height")
    x1, x2 = float(xv[0]), float(xv[1])
    y1, y2 = Y[:, 0], Y[:, 1]
    same = np.all(Y == xv[None, :], axis=1)

    deg = np.abs(x2 - y2) < _DEGENERATE_REL * np.maximum(x2, y2)
    dxy = np.hypot(x1 - y1, x2 - y2)
    with np.errstate(divide="ignore", invalid="ignore"):
        root = np.sqrt(x2 * y2) * dxy
        base = x2 * y1 - x1 * y2
        z1_plus = (base + root) / (x2 - y2)
        z1_minus = (base - root) / (x2 - y2)
    z1_mid = 0.5 * (x1 + y1)
    z1_plus = np.where(deg, z1_mid, z1_plus)
    z1_minus = np.where(deg, z1_mid, z1_minus)

    def angles(z1):
        ux, uy = x1 - z1, x2
        wx, wy = y1 - z1, y2
        dot = ux * wx + uy * wy
        nn = np.hypot(ux, uy) * np.hypot(wx, wy)
        return np.arccos(np.clip(dot / nn, -1.0, 1.0))

    out = np.maximum(angles(z1_plus), angles(z1_minus))
    return np.where(same, 0.0, out)


def v_halfspace(x, y) -> float:
    """Visual angle metric in the upper half space, any dimension >= 2.

    Maps (x, y) isometrically to the planar configuration
    ((0, x_n), (h, y_n)) with h the horizontal offset; exact by rotational
    symmetry about the vertical axis through x.
    """
    xv, yv = as_point(x), as_point(y)
    _check_upper(xv, "x")
    _check_upper(yv, "y")
    if np.array_equal(xv, yv):
        return 0.0
    h = float(np.linalg.norm(yv[:-1] - xv[:-1]))
    return v_halfplane(np.array([0.0, xv[-1]]), np.array([h, yv[-1]]))


# ---------------------------------------------------------------------------
# The v-ball boundary curve around i and its Euclidean sandwich
# ---------------------------------------------------------------------------


def _check_r(r: float):
    if not 0.0 < r < math.pi / 2.0:
        raise RangeError(f"radius must lie in (0, pi/2), got {r}")


def curve_heights(r: float) -> tuple[float, float]:
    """Height range [b1, b2] of the v-ball boundary around i."""
    _check_r(r)
    sec2 = 1.0 / math.cos(r) ** 2
    b1 = 2.0 * (1.0 - math.sin(r)) * sec2 - 1.0
    b2 = 2.0 * (1.0 + math.sin(r)) * sec2 - 1.0
    return b1, b2


def branch_left(y2, r: float):
    """Left branch y_1 = f1(y_2) of the boundary of the v-ball around i."""
    return (1.0 / math.tan(r)) * (1.0 + y2 - 2.0 * np.sqrt(y2) / math.cos(r))


def branch_right(y2, r: float):
    """Right branch y_1 = f2(y_2), the mirror image of f1."""
    return -branch_left(y2, r)


@dataclass
class VBallCurve:
    """Sampled boundary of the v-ball of radius r around the normalized center i.

    General centers and scales follow by horizontal translation and dilation,
    under which the visual angle is invariant.
    """
    r: float
    b1: float
    b2: float
    left_branch: Callable = field(repr=False)
    right_branch: Callable = field(repr=False)
    polyline: np.ndarray = field(repr=False)


def vball_curve(r: float, samples: int = 512) -> VBallCurve:
    """Closed polyline for the boundary of the v-ball around i."""
    _check_r(r)
    if samples < 8:
        raise RangeError("samples must be >= 8")
    b1, b2 = curve_heights(r)
    ys = np.linspace(b1, b2, samples)
    right = np.column_stack([branch_right(ys, r), ys])
    left = np.column_stack([branch_left(ys[::-1][1:-1], r), ys[::-1][1:-1]])
    poly = np.vstack([right, left])
    return VBallCurve(r, b1, b2,
                      lambda y2: branch_left(y2, r),
                      lambda y2: branch_right(y2, r),
                      poly)


def vball_sandwich(x, r: float) -> dict[str, Ball]:
    """The four Euclidean balls sandwiching the v-ball B_v(x, r) in H^n.

    inner1 is tangent to the v-ball boundary, outer1 is the smallest
    containing Euclidean ball; inner2/outer2 are the concentric pair.
    """
    xv = as_point(x)
    _check_upper(xv, "x")
    _check_r(r)
    xn = float(xv[-1])
    en = np.zeros_like(xv)
    en[-1] = 1.0
    sec = 1.0 / math.cos(r)
    tan = math.tan(r)
    return {
        "inner1": Ball(xv + (sec * sec - 1.0) * xn * en, tan * xn),
        "inner2": Ball(xv.copy(), xn * math.sin(r)),
        "outer1": Ball(xv + 2.0 * xn * tan * tan * en, 2.0 * xn * tan * sec),
        "outer2": Ball(xv.copy(), 2.0 * xn * (tan * sec + tan * tan)),
    }


@dataclass
class KinkReport:
    """One-sided boundary slopes at the bottom kink and the chord-line slopes."""
    slope_f1_at_b1: float
    slope_f2_at_b1: float
    slope_l1: float
    slope_l2: float


def kink_and_tangents(r: float) -> KinkReport:
    """Closed-form slopes at the non-smooth bottom point of the v-ball boundary.

    The two one-sided slopes differ only by sign, and each chord line of the
    bounding triangle is tangent to the curve: slope_l1 equals the right
    branch's one-sided slope at b1 (and slope_l2 its analog at b2).
    """
    _check_r(r)
    sec = 1.0 / math.cos(r)
    tan = math.tan(r)
    cot = 1.0 / tan
    f2p = cot * (sec / math.sqrt(2.0 * sec * sec - 2.0 * tan * sec - 1.0) - 1.0)
    m1 = tan / (-sec * sec + tan * sec + 1.0)
    m2 = -tan / (sec * sec + tan * sec - 1.0)
    return KinkReport(-f2p, f2p, m1, m2)
