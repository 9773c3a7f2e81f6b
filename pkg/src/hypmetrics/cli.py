"""Command-line front end: eval, ball, verify, table, horocycle.

Exit codes: 0 ok, 1 failed claim, 2 domain/range error, 3 parse error.
The default tolerance can be overridden with the HYPMETRICS_TOL environment
variable.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import halfspace as hs
from .balls import certify_ball, convexity_threshold_scan, trace_ball
from .errors import HypmetricsError, ParseError
from .geom import PuncturedSpace, domain_from_json
from .inclusions import (best_radius, halfspace_inclusion_suite,
                         p_triangle_experiment, punctured_suite)
from .metrics import (INFINITY, MetricKind, evaluate, s_oracle, sup_oracle,
                      visual_angle_oracle)
from .render import (rows_csv, to_json, write_json, write_traces_csv,
                     write_traces_svg)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _point(text: str):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise ParseError(f"bad point {text!r}; expected comma-separated reals")
    if len(vals) < 2:
        raise ParseError(f"point {text!r} needs at least 2 coordinates")
    return vals


def _floats(text: str):
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise ParseError(f"bad number list {text!r}")


def _grid(text: str):
    try:
        lo, hi, step = (float(t) for t in text.split(":"))
    except ValueError:
        raise ParseError(f"bad grid {text!r}; expected lo:hi:step")
    if step <= 0.0 or hi < lo:
        raise ParseError(f"bad grid {text!r}")
    return [float(v) for v in np.arange(lo, hi + 0.5 * step, step)]


def _metric(text: str) -> MetricKind:
    try:
        return MetricKind(text)
    except ValueError:
        raise ParseError(f"unknown metric {text!r}; expected one of "
                         + ",".join(k.value for k in MetricKind))


def _load_domain(path: str):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read domain file: {exc}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad domain JSON: {exc}")
    return domain_from_json(obj)


def _default_tol() -> float:
    raw = os.environ.get("HYPMETRICS_TOL")
    if raw is None:
        return 1e-9
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"bad HYPMETRICS_TOL value {raw!r}")


def build_parser() -> _Parser:
    parser = _Parser(prog="hypmetrics",
                     description="Hyperbolic-type metric evaluators, ball "
                                 "tracing, and verification suites.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a metric at a point pair")
    p_eval.add_argument("--metric", required=True)
    p_eval.add_argument("--domain", required=True)
    p_eval.add_argument("--x", required=True)
    p_eval.add_argument("--y", required=True)
    p_eval.add_argument("--oracle", action="store_true",
                        help="also run the boundary supremum oracle (s, v)")

    p_ball = sub.add_parser("ball", help="trace metric balls to SVG/CSV")
    p_ball.add_argument("--metric", required=True)
    p_ball.add_argument("--domain", required=True)
    p_ball.add_argument("--center", required=True)
    p_ball.add_argument("--radius", required=True,
                        help="comma-separated radii; multiple radii overlay")
    p_ball.add_argument("--rays", type=int, default=720)
    p_ball.add_argument("--format", choices=("svg", "csv"), default="svg")
    p_ball.add_argument("--output", required=True)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", required=True,
                          choices=("punctured", "halfspace", "convexity",
                                   "conjecture-p", "p-triangle"))
    p_verify.add_argument("--r-grid", default=None)
    p_verify.add_argument("--x-norms", default="0.1,1,10")
    p_verify.add_argument("--metric", default="s")
    p_verify.add_argument("--radius", default=None)
    p_verify.add_argument("--center", default=None)
    p_verify.add_argument("--domain", default=None)
    p_verify.add_argument("--samples", type=int, default=10_000)
    p_verify.add_argument("--trials", type=int, default=1_000_000)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--output", default=None)
    p_verify.add_argument("--format", choices=("json", "csv"), default="json")

    p_table = sub.add_parser("table", help="emit closed-form value tables")
    p_table.add_argument("--kind", required=True,
                         choices=("radii", "kink", "sandwich"))
    p_table.add_argument("--r-grid", default="0.1:1.5:0.1")
    p_table.add_argument("--x-norms", default="0.1,1,10")
    p_table.add_argument("--output", default=None)

    p_horo = sub.add_parser("horocycle",
                            help="horocycle centers and v for a half-plane pair")
    p_horo.add_argument("--x", required=True)
    p_horo.add_argument("--y", required=True)
    return parser


def _emit(text: str, output):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_eval(args) -> int:
    domain = _load_domain(args.domain)
    kind = _metric(args.metric)
    x, y = _point(args.x), _point(args.y)
    value = evaluate(domain, kind, x, y)
    print(f"{value:.12f}")
    if args.oracle:
        if kind is MetricKind.S:
            res = s_oracle(domain, x, y)
        elif kind is MetricKind.V:
            res = visual_angle_oracle(domain, x, y)
        else:
            raise ParseError(f"--oracle supports s and v, not {kind.value}")
        print(f"oracle {res.value:.12f}")
        print(f"discrepancy {abs(res.value - value):.6e}")
    return 0


def cmd_ball(args) -> int:
    domain = _load_domain(args.domain)
    kind = _metric(args.metric)
    center = _point(args.center)
    tol = _default_tol()
    traces = [trace_ball(domain, kind, center, r, rays=args.rays, tol=tol)
              for r in _floats(args.radius)]
    if args.format == "svg":
        write_traces_svg(traces, domain, args.output)
    else:
        write_traces_csv(traces, args.output)
    return 0


def _verify_punctured(args):
    grid = _grid(args.r_grid) if args.r_grid else None
    rows = punctured_suite(x_norms=_floats(args.x_norms), r_grid=grid,
                           samples=args.samples, tol=_default_tol())
    ok = all(r["holds"] and r["sharp"] for r in rows)
    cols = ("metric", "norm_x", "r", "t", "holds", "min_margin",
            "sharpness_gap", "sharp")
    return ok, rows, cols


def _verify_halfspace(args):
    grid = _grid(args.r_grid) if args.r_grid else \
        list(np.linspace(0.07, 1.5, 20))
    x = _point(args.center) if args.center else [0.0, 1.0]
    rows = []
    ok = True
    for r in grid:
        for rep in halfspace_inclusion_suite(x, float(r),
                                             samples=args.samples,
                                             tol=_default_tol()):
            ok = ok and rep.holds
            rows.append({"r": float(r), "ball": rep.note,
                         "holds": bool(rep.holds),
                         "min_margin": rep.min_margin,
                         "sharpness_gap": rep.sharpness_gap})
    return ok, rows, ("r", "ball", "holds", "min_margin", "sharpness_gap")


def _verify_convexity(args):
    domain = _load_domain(args.domain) if args.domain \
        else PuncturedSpace([[0.0, 0.0]])
    kind = _metric(args.metric)
    center = _point(args.center) if args.center else [1.0, 0.0]
    if not args.radius:
        raise ParseError("--radius is required for the convexity suite")
    rows = []
    ok = True
    for r in _floats(args.radius):
        rep = certify_ball(domain, kind, center, r)
        ok = ok and rep.convex
        rows.append({"r": r, "convex": bool(rep.convex),
                     "max_deviation": rep.max_deviation,
                     "starlike": bool(rep.starlike)})
    return ok, rows, ("r", "convex", "max_deviation", "starlike")


def _verify_conjecture_p(args):
    grid = _grid(args.r_grid) if args.r_grid else _grid("0.35:0.5:0.005")
    center = _point(args.center) if args.center else [1.0, 0.0]
    scan = convexity_threshold_scan(PuncturedSpace([[0.0, 0.0]]), MetricKind.P,
                                    center, grid)
    target = math.sqrt(2.0) - 1.0
    bracket = (scan.last_convex, scan.first_nonconvex)
    contains = (bracket[0] is not None and bracket[1] is not None
                and bracket[0] <= target <= bracket[1])
    rows = [{"last_convex": bracket[0], "first_nonconvex": bracket[1],
             "target": target, "bracket_contains_target": contains}]
    # Non-blocking experiment: reported, never asserted.
    return True, rows, ("last_convex", "first_nonconvex", "target",
                        "bracket_contains_target")


def _verify_p_triangle(args):
    from .geom import UnitBall
    domain = _load_domain(args.domain) if args.domain else UnitBall(2)
    hit = p_triangle_experiment(domain, args.trials, rng_seed=args.seed)
    if hit is None:
        rows = [{"violation_found": False}]
    else:
        rows = [{"violation_found": True,
                 "x": hit["x"], "y": hit["y"], "z": hit["z"],
                 "p_xz": hit["p_xz"],
                 "p_xy_plus_p_yz": hit["p_xy_plus_p_yz"],
                 "excess": hit["excess"]}]
    # Open experiment: the outcome is the report.
    return True, rows, tuple(rows[0].keys())


def cmd_verify(args) -> int:
    runners = {
        "punctured": _verify_punctured,
        "halfspace": _verify_halfspace,
        "convexity": _verify_convexity,
        "conjecture-p": _verify_conjecture_p,
        "p-triangle": _verify_p_triangle,
    }
    ok, rows, cols = runners[args.suite](args)
    if args.format == "csv":
        _emit(rows_csv(rows, cols), args.output)
    else:
        _emit(to_json({"suite": args.suite, "ok": ok, "rows": rows}),
              args.output)
    return 0 if ok else 1


def cmd_table(args) -> int:
    grid = _grid(args.r_grid)
    if args.kind == "radii":
        rows = []
        for r in grid:
            for norm_x in _floats(args.x_norms):
                row = {"r": r, "norm_x": norm_x}
                for kind in (MetricKind.S, MetricKind.J, MetricKind.K,
                             MetricKind.P, MetricKind.Q, MetricKind.EUCLIDEAN):
                    row[kind.value] = best_radius(kind, norm_x, r)
                rows.append(row)
        cols = ("r", "norm_x", "s", "j", "k", "p", "q", "euclidean")
    elif args.kind == "kink":
        rows = []
        for r in grid:
            rep = hs.kink_and_tangents(r)
            rows.append({"r": r, "slope_f1_at_b1": rep.slope_f1_at_b1,
                         "slope_f2_at_b1": rep.slope_f2_at_b1,
                         "slope_l1": rep.slope_l1, "slope_l2": rep.slope_l2})
        cols = ("r", "slope_f1_at_b1", "slope_f2_at_b1", "slope_l1", "slope_l2")
    else:
        rows = []
        for r in grid:
            balls = hs.vball_sandwich([0.0, 1.0], r)
            row = {"r": r}
            for name, ball in balls.items():
                row[f"{name}_center"] = ball.center
                row[f"{name}_radius"] = ball.radius
            rows.append(row)
        cols = ("r", "inner1_center", "inner1_radius", "inner2_center",
                "inner2_radius", "outer1_center", "outer1_radius",
                "outer2_center", "outer2_radius")
    _emit(rows_csv(rows, cols), args.output)
    return 0


def cmd_horocycle(args) -> int:
    x, y = _point(args.x), _point(args.y)
    pair = hs.horocycle_centers(x, y)
    print(f"z_plus {pair.z_plus[0]:.12f} {pair.z_plus[1]:.12f}")
    print(f"z_minus {pair.z_minus[0]:.12f} {pair.z_minus[1]:.12f}")
    print(f"degenerate {str(pair.degenerate).lower()}")
    print(f"v {hs.v_halfplane(x, y):.12f}")
    return 0


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        handler = {
            "eval": cmd_eval,
            "ball": cmd_ball,
            "verify": cmd_verify,
            "table": cmd_table,
            "horocycle": cmd_horocycle,
        }[args.command]
        return handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except HypmetricsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
