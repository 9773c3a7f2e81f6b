"""Metric evaluators: frozen examples, metric axioms, oracle agreement."""

import math

import numpy as np
import pytest

from hypmetrics.errors import DomainError, UnsupportedMetric
from hypmetrics.geom import HalfSpace, Polygon, PuncturedSpace, UnitBall, contains
from hypmetrics.metrics import (INFINITY, AntipodalAngleWarning, MetricKind,
                                evaluate, eval_many, j_metric, k_punctured,
                                p_function, q_chordal, s_metric, s_oracle,
                                sup_oracle, v_metric, visual_angle_oracle)

PUNCT0 = PuncturedSpace([[0.0, 0.0]])
E1 = [1.0, 0.0]
E2 = [0.0, 1.0]


class TestSMetric:
    def test_through_obstacle(self):
        assert s_metric(PUNCT0, E1, [-1, 0]) == pytest.approx(1.0)

    def test_identity(self):
        assert s_metric(PUNCT0, E1, E1) == 0.0

    def test_right_angle(self):
        # |x-y| / (|x| + |y|) at the single obstacle.
        assert s_metric(PUNCT0, E1, E2) == pytest.approx(math.sqrt(2) / 2)

    def test_halfspace_reflection(self):
        x, y = [0.0, 1.0], [0.0, 2.0]
        assert s_metric(HalfSpace(2), x, y) == pytest.approx(1.0 / 3.0)

    def test_polygon_matches_sampled_sup(self):
        poly = Polygon([[0, 0], [2, 0], [2, 2], [0, 2]])
        x, y = [0.5, 0.5], [1.5, 1.2]
        exact = s_metric(poly, x, y)
        res = s_oracle(poly, x, y)
        assert exact == pytest.approx(res.value, abs=1e-7)

    def test_unitball_oracle_backed(self):
        ball = UnitBall(2)
        x, y = [0.3, 0.0], [-0.2, 0.4]
        val = s_metric(ball, x, y)
        assert 0.0 < val <= 1.0
        assert val == pytest.approx(s_oracle(ball, x, y).value, abs=1e-7)

    def test_outside_raises(self):
        with pytest.raises(DomainError):
            s_metric(PUNCT0, [0, 0], E1)

    def test_monotone_in_obstacles(self):
        rng = np.random.default_rng(11)
        small = PuncturedSpace([[0, 0]])
        big = PuncturedSpace([[0, 0], [2, 0], [0, 2], [-1, -1]])
        for _ in range(50):
            x, y = rng.uniform(0.2, 1.5, 2), rng.uniform(0.2, 1.5, 2)
            if not (contains(big, x) and contains(big, y)):
                continue
            assert s_metric(big, x, y) >= s_metric(small, x, y) - 1e-12

    def test_ball_intersection_identity(self):
        # y is in B_s(x, r) for the obstacle set iff it is for every
        # single-obstacle subdomain.
        rng = np.random.default_rng(12)
        obs = [[0, 0], [2, 0], [0, 2]]
        full = PuncturedSpace(obs)
        singles = [PuncturedSpace([z]) for z in obs]
        for _ in range(200):
            x, y = rng.uniform(-1, 3, 2), rng.uniform(-1, 3, 2)
            if not (contains(full, x) and contains(full, y)):
                continue
            r = rng.uniform(0.05, 1.0)
            lhs = s_metric(full, x, y) < r
            rhs = all(s_metric(d, x, y) < r for d in singles)
            assert lhs == rhs


class TestJMetric:
    def test_identity(self):
        assert j_metric(PUNCT0, E1, E1) == 0.0

    def test_radial(self):
        assert j_metric(PUNCT0, E1, [2, 0]) == pytest.approx(math.log(2))

    def test_halfspace(self):
        assert j_metric(HalfSpace(2), [0, 1], [0, 3]) == pytest.approx(math.log(3))


class TestKPunctured:
    def test_radial_extension(self):
        assert k_punctured(E1, [math.e, 0.0]) == pytest.approx(1.0)

    def test_right_angle(self):
        assert k_punctured(E1, E2) == pytest.approx(math.pi / 2)

    def test_identity(self):
        assert k_punctured(E1, E1) == 0.0

    def test_origin_raises(self):
        with pytest.raises(DomainError):
            k_punctured([0, 0], E1)

    def test_antipodal_warns(self):
        with pytest.warns(AntipodalAngleWarning):
            val = k_punctured(E1, [-1.0, 0.0])
        assert val == pytest.approx(math.pi)

    def test_dispatch_requires_single_puncture(self):
        two = PuncturedSpace([[0, 0], [3, 0]])
        with pytest.raises(UnsupportedMetric):
            evaluate(two, MetricKind.K, E1, E2)

    def test_dispatch_shifts_obstacle(self):
        shifted = PuncturedSpace([[5.0, 5.0]])
        assert evaluate(shifted, MetricKind.K, [6, 5], [5, 6]) == \
            pytest.approx(math.pi / 2)


class TestPFunction:
    def test_identity(self):
        assert p_function(PUNCT0, E1, E1) == 0.0

    def test_antipodal(self):
        assert p_function(PUNCT0, E1, [-1, 0]) == pytest.approx(1 / math.sqrt(2))

    def test_right_angle(self):
        assert p_function(PUNCT0, E1, E2) == pytest.approx(1 / math.sqrt(3))


class TestQChordal:
    def test_origin_to_infinity(self):
        assert q_chordal([0.0, 0.0], INFINITY) == pytest.approx(1.0)

    def test_unit_pair(self):
        assert q_chordal(E1, E2) == pytest.approx(math.sqrt(2) / 2)

    def test_identity_and_infinity(self):
        assert q_chordal(E1, E1) == 0.0
        assert q_chordal(INFINITY, INFINITY) == 0.0

    def test_symmetry_with_infinity(self):
        assert q_chordal(INFINITY, E1) == q_chordal(E1, INFINITY)


class TestVMetric:
    def test_punctured_right_angle(self):
        assert v_metric(PUNCT0, E1, E2) == pytest.approx(math.pi / 2)

    def test_identity(self):
        assert v_metric(PUNCT0, E1, E1) == 0.0

    def test_halfspace_example(self):
        assert v_metric(HalfSpace(2), [0, 1], [2, 1]) == pytest.approx(math.pi / 2)

    def test_unitball_oracle(self):
        val = v_metric(UnitBall(2), [0.5, 0.0], [0.0, 0.5])
        res = visual_angle_oracle(UnitBall(2), [0.5, 0.0], [0.0, 0.5])
        assert val == pytest.approx(res.value, abs=1e-9)
        assert 0.0 < val < math.pi


class TestAxioms:
    DOMAINS = [PUNCT0, PuncturedSpace([[0, 0], [2, 1]]), HalfSpace(2)]
    KINDS = [MetricKind.S, MetricKind.J, MetricKind.P, MetricKind.Q,
             MetricKind.V]

    def _random_point(self, rng, domain):
        while True:
            p = rng.uniform(-3, 3, 2)
            p[1] = abs(p[1]) + 1e-3
            if contains(domain, p):
                return p

    def test_symmetry_and_range(self):
        rng = np.random.default_rng(21)
        for domain in self.DOMAINS:
            for kind in self.KINDS:
                for _ in range(30):
                    x = self._random_point(rng, domain)
                    y = self._random_point(rng, domain)
                    a = evaluate(domain, kind, x, y)
                    b = evaluate(domain, kind, y, x)
                    assert a == pytest.approx(b, abs=1e-9)
                    assert a >= 0.0
                    if kind is MetricKind.S:
                        assert a <= 1.0
                    if kind is MetricKind.P:
                        assert a < 1.0
                    if kind is MetricKind.Q:
                        assert a <= 1.0
                    if kind is MetricKind.V:
                        assert a <= math.pi

    def test_triangle_inequality_metrics(self):
        # s, j, q are metrics on any domain; k on the punctured plane.
        rng = np.random.default_rng(22)
        domain = PUNCT0
        for _ in range(1000):
            x, y, z = (self._random_point(rng, domain) for _ in range(3))
            for kind in (MetricKind.S, MetricKind.J, MetricKind.Q):
                assert evaluate(domain, kind, x, z) <= \
                    evaluate(domain, kind, x, y) \
                    + evaluate(domain, kind, y, z) + 1e-12
            with np.errstate(all="ignore"):
                import warnings
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    assert k_punctured(x, z) <= \
                        k_punctured(x, y) + k_punctured(y, z) + 1e-12


class TestSupOracle:
    def test_constant_objective(self):
        res = sup_oracle(UnitBall(2), lambda z: 1.0)
        assert res.value == pytest.approx(1.0)

    def test_punctured_exhaustive(self):
        d = float(np.linalg.norm(np.array(E1) - np.array(E2)))
        res = sup_oracle(PUNCT0, lambda z: d / (
            float(np.linalg.norm(np.array(E1) - z))
            + float(np.linalg.norm(z - np.array(E2)))))
        assert res.value == pytest.approx(math.sqrt(2) / 2)
        assert np.allclose(res.argpoint, [0, 0])

    def test_halfplane_visual_angle_example(self):
        res = visual_angle_oracle(HalfSpace(2), [0, 1], [0, 2],
                                  window=(-20, 20))
        assert res.value == pytest.approx(math.atan(math.sqrt(2) / 4), abs=1e-9)
        assert abs(abs(res.argpoint[0]) - math.sqrt(2)) < 1e-5

    def test_s_oracle_agreement_random(self):
        rng = np.random.default_rng(23)
        hsd = HalfSpace(2)
        for _ in range(100):
            x = np.array([rng.uniform(-5, 5), rng.uniform(0.01, 10)])
            y = np.array([rng.uniform(-5, 5), rng.uniform(0.01, 10)])
            closed = s_metric(hsd, x, y)
            res = s_oracle(hsd, x, y)
            assert closed == pytest.approx(res.value, abs=1e-7)


class TestEvalMany:
    @pytest.mark.parametrize("domain", [
        PuncturedSpace([[0, 0], [2, 0], [0, 2]]), HalfSpace(2)])
    @pytest.mark.parametrize("kind", list(MetricKind))
    def test_matches_scalar(self, domain, kind):
        if kind is MetricKind.K and (not isinstance(domain, PuncturedSpace)
                                     or len(domain.obstacles) > 1):
            pytest.skip("k needs a single puncture")
        rng = np.random.default_rng(24)
        x = np.array([0.7, 1.1])
        Y = rng.uniform(-2, 3, size=(50, 2))
        vec = eval_many(domain, kind, x, Y)
        for row, got in zip(Y, vec):
            if contains(domain, row):
                assert got == pytest.approx(evaluate(domain, kind, x, row),
                                            abs=1e-12)
            else:
                assert got == math.inf
