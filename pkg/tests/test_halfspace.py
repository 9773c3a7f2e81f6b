"""Half-plane closed forms: horocycles, Eq. (vH), the v-ball curve and sandwich."""

import math

import numpy as np
import pytest

from hypmetrics.errors import DegenerateInput, DomainError, RangeError
from hypmetrics.geom import HalfSpace
from hypmetrics.halfspace import (branch_left, branch_right, curve_heights,
                                  horocycle_centers, kink_and_tangents,
                                  v_halfplane, v_halfplane_many, v_halfspace,
                                  vball_curve, vball_sandwich)
from hypmetrics.metrics import visual_angle_oracle


class TestHorocycleCenters:
    def test_equal_heights(self):
        pair = horocycle_centers([0, 1], [2, 1])
        assert pair.degenerate
        assert pair.z_plus == pytest.approx([1.0, 1.0])

    def test_vertical_pair(self):
        pair = horocycle_centers([0, 1], [0, 2])
        z1s = sorted([pair.z_plus[0], pair.z_minus[0]])
        assert z1s == pytest.approx([-math.sqrt(2), math.sqrt(2)])

    def test_near_degenerate_guard(self):
        pair = horocycle_centers([0, 1], [0, 1 + 1e-12])
        assert pair.degenerate
        assert np.all(np.isfinite(pair.z_plus))

    def test_invalid_inputs(self):
        with pytest.raises(DomainError):
            horocycle_centers([0, -1], [0, 1])
        with pytest.raises(DegenerateInput):
            horocycle_centers([0, 1], [0, 1])

    def test_focus_directrix_random(self):
        rng = np.random.default_rng(31)
        for _ in range(1000):
            x = np.array([rng.uniform(-10, 10), rng.uniform(1e-2, 1e2)])
            y = np.array([rng.uniform(-10, 10), rng.uniform(1e-2, 1e2)])
            if np.array_equal(x, y):
                continue
            pair = horocycle_centers(x, y)
            for z in (pair.z_plus, pair.z_minus):
                assert z[1] > 0
                scale = abs(z[1])
                assert abs(np.linalg.norm(x - z) - z[1]) < 1e-9 * scale
                assert abs(np.linalg.norm(y - z) - z[1]) < 1e-9 * scale


class TestVHalfplane:
    def test_equal_heights_right_angle(self):
        assert v_halfplane([0, 1], [2, 1]) == pytest.approx(math.pi / 2)

    def test_vertical_pair(self):
        assert v_halfplane([0, 1], [0, 2]) == \
            pytest.approx(math.atan(math.sqrt(2) / 4))

    def test_identity(self):
        assert v_halfplane([5, 3], [5, 3]) == 0.0

    def test_similarity_invariance(self):
        rng = np.random.default_rng(32)
        for _ in range(200):
            x = np.array([rng.uniform(-5, 5), rng.uniform(0.1, 5)])
            y = np.array([rng.uniform(-5, 5), rng.uniform(0.1, 5)])
            lam = rng.uniform(0.1, 10)
            t = rng.uniform(-10, 10)
            shift = np.array([t, 0.0])
            base = v_halfplane(x, y)
            moved = v_halfplane(lam * x + shift, lam * y + shift)
            assert moved == pytest.approx(base, abs=1e-10)

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(33)
        x = np.array([0.3, 1.7])
        Y = np.column_stack([rng.uniform(-4, 4, 64), rng.uniform(0.05, 8, 64)])
        vec = v_halfplane_many(x, Y)
        for row, got in zip(Y, vec):
            assert got == pytest.approx(v_halfplane(x, row), abs=1e-12)

    def test_oracle_equivalence_sample(self):
        rng = np.random.default_rng(34)
        hsd = HalfSpace(2)
        for _ in range(100):
            x = np.array([rng.uniform(-5, 5), 10 ** rng.uniform(-3, 3)])
            y = np.array([rng.uniform(-5, 5), 10 ** rng.uniform(-3, 3)])
            closed = v_halfplane(x, y)
            res = visual_angle_oracle(hsd, x, y, tol=1e-10)
            assert abs(closed - res.value) < 1e-7


class TestVHalfspace:
    def test_3d_equal_heights(self):
        assert v_halfspace([0, 0, 1], [2, 0, 1]) == pytest.approx(math.pi / 2)

    def test_3d_vertical(self):
        assert v_halfspace([1, 1, 1], [1, 1, 2]) == \
            pytest.approx(math.atan(math.sqrt(2) / 4))

    def test_identity(self):
        assert v_halfspace([1, 2, 3], [1, 2, 3]) == 0.0


class TestVBallCurve:
    def test_heights_pi_3(self):
        b1, b2 = curve_heights(math.pi / 3)
        assert b1 == pytest.approx(7 - 4 * math.sqrt(3), abs=1e-12)
        assert b2 == pytest.approx(7 + 4 * math.sqrt(3), abs=1e-12)

    def test_f2_value_pi_4(self):
        val = branch_right(1.0, math.pi / 4)
        assert val == pytest.approx(2 * math.sqrt(2) - 2)
        assert v_halfplane([0, 1], [val, 1.0]) == pytest.approx(math.pi / 4,
                                                               abs=1e-8)

    def test_branches_vanish_at_heights(self):
        for r in (0.3, math.pi / 4, 1.2):
            b1, b2 = curve_heights(r)
            for b in (b1, b2):
                assert branch_left(b, r) == pytest.approx(0.0, abs=1e-9)
                assert branch_right(b, r) == pytest.approx(0.0, abs=1e-9)

    def test_curve_consistency(self):
        for r in (math.pi / 6, math.pi / 4, math.pi / 3):
            curve = vball_curve(r, samples=400)
            v = v_halfplane_many([0.0, 1.0], curve.polyline)
            assert np.abs(v - r).max() < 1e-8

    def test_range_errors(self):
        with pytest.raises(RangeError):
            vball_curve(0.0)
        with pytest.raises(RangeError):
            vball_curve(math.pi / 2)
        with pytest.raises(RangeError):
            vball_curve(0.5, samples=4)

    def test_closed_loop(self):
        curve = vball_curve(0.7, samples=128)
        poly = curve.polyline
        assert len(poly) == 2 * 128 - 2
        assert poly[0, 1] == pytest.approx(curve.b1)


class TestSandwich:
    def test_inner2_radius_pi_6(self):
        balls = vball_sandwich([0, 1], math.pi / 6)
        assert balls["inner2"].radius == pytest.approx(0.5)
        assert balls["inner2"].center == pytest.approx([0, 1])

    def test_outer1_pi_4(self):
        balls = vball_sandwich([0, 1], math.pi / 4)
        assert balls["outer1"].center == pytest.approx([0, 3])
        assert balls["outer1"].radius == pytest.approx(2 * math.sqrt(2))

    def test_inner1_pi_4(self):
        balls = vball_sandwich([0, 1], math.pi / 4)
        assert balls["inner1"].center == pytest.approx([0, 2])
        assert balls["inner1"].radius == pytest.approx(1.0)

    def test_scales_with_height(self):
        a = vball_sandwich([0, 1], 0.6)
        b = vball_sandwich([3, 2], 0.6)
        for name in a:
            assert b[name].radius == pytest.approx(2 * a[name].radius)
            assert b[name].center[-1] == pytest.approx(
                1.0 + 2 * (a[name].center[-1] - 1.0) + 1.0)

    def test_ordering_radii(self):
        balls = vball_sandwich([0, 1], 0.9)
        assert balls["inner2"].radius < balls["inner1"].radius
        assert balls["outer1"].radius < balls["outer2"].radius


class TestKink:
    def test_sign_identity(self):
        for r in np.linspace(0.05, 1.5, 50):
            rep = kink_and_tangents(float(r))
            assert rep.slope_f1_at_b1 == pytest.approx(-rep.slope_f2_at_b1,
                                                       abs=1e-12)

    def test_tangency_identity_m1(self):
        for r in np.linspace(0.05, 1.5, 50):
            rep = kink_and_tangents(float(r))
            assert rep.slope_f2_at_b1 == pytest.approx(rep.slope_l1,
                                                       rel=1e-10, abs=1e-10)

    def test_matches_finite_difference(self):
        for r in (0.3, math.pi / 4, 1.1):
            rep = kink_and_tangents(r)
            b1, _ = curve_heights(r)
            # Central difference a hair inside the kink, where the branch is
            # smooth; the one-sided limit differs from it by O(offset).
            y = b1 + 1e-6
            h = 1e-7
            fd = (branch_right(y + h, r) - branch_right(y - h, r)) / (2 * h)
            assert fd == pytest.approx(rep.slope_f2_at_b1, rel=2e-3)

    def test_diverges_at_pi_2(self):
        # The one-sided slopes blow up as r -> pi/2 (sec r singular), and are
        # finite (-> 1) as r -> 0+.
        assert abs(kink_and_tangents(1.57).slope_f2_at_b1) > 50.0
        assert kink_and_tangents(1e-4).slope_f2_at_b1 == pytest.approx(1.0,
                                                                       abs=1e-3)
