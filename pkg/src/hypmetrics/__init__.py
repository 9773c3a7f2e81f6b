"""Hyperbolic-type metrics: evaluators, ball tracing, and verification suites."""

from .balls import (BallTrace, ConvexityReport, ThresholdScan, certify_ball,
                    convex_hull, convexity_check, convexity_threshold_scan,
                    hull_deviation, starlike_check, trace_ball)
from .errors import (DegenerateAngle, DegenerateInput, DomainError,
                     HypmetricsError, MissingWindow, ParseError, RangeError,
                     UnboundedBall, UnsupportedMetric)
from .geom import (HalfSpace, Polygon, PuncturedSpace, UnitBall, angle_at,
                   boundary_sample, contains, dist_to_boundary,
                   domain_from_json, domain_to_json)
from .halfspace import (HorocyclePair, KinkReport, VBallCurve,
                        horocycle_centers, kink_and_tangents, v_halfplane,
                        v_halfspace, vball_curve, vball_sandwich)
from .inclusions import (InclusionReport, best_radius,
                         halfspace_inclusion_suite, p_triangle_experiment,
                         punctured_suite, verify_inclusion)
from .metrics import (INFINITY, AntipodalAngleWarning, MetricKind, SupResult,
                      evaluate, eval_many, j_metric, k_punctured, p_function,
                      q_chordal, s_metric, s_oracle, sup_oracle, v_metric,
                      visual_angle_oracle)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
