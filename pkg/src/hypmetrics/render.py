"""Deterministic SVG and CSV emitters for ball traces and curves.

The SVG writer is intentionally minimal and hand-rolled: fixed-precision
coordinate formatting and a stable element order make repeated runs
byte-identical, which the CLI promises.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .geom import Domain, HalfSpace, Polygon, PuncturedSpace, UnitBall

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v: float) -> str:
    # Fixed precision; normalize the negative-zero spelling.
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _bbox(chunks):
    pts = np.vstack([np.atleast_2d(c) for c in chunks if len(c)])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    pad = 0.05 * float(max(span[0], span[1]))
    return lo - pad, hi + pad


def _path(points: np.ndarray, closed: bool) -> str:
    # The y axis is negated so the upper half plane renders upright.
    parts = [f"M {_fmt(points[0, 0])} {_fmt(-points[0, 1])}"]
    parts += [f"L {_fmt(p[0])} {_fmt(-p[1])}" for p in points[1:]]
    if closed:
        parts.append("Z")
    return " ".join(parts)


def _domain_elements(domain: Domain, lo, hi, size: float):
    els = []
    if isinstance(domain, PuncturedSpace):
        h = 0.02 * size
        for z in domain.obstacles:
            zx, zy = float(z[0]), -float(z[1])
            els.append(f'<path d="M {_fmt(zx - h)} {_fmt(zy)} L {_fmt(zx + h)} '
                       f'{_fmt(zy)} M {_fmt(zx)} {_fmt(zy - h)} L {_fmt(zx)} '
                       f'{_fmt(zy + h)}" stroke="#000000" stroke-width='
                       f'"{_fmt(0.004 * size)}" fill="none"/>')
    elif isinstance(domain, HalfSpace):
        els.append(f'<path d="M {_fmt(lo[0])} 0.000000 L {_fmt(hi[0])} '
                   f'0.000000" stroke="#000000" stroke-width='
                   f'"{_fmt(0.004 * size)}" fill="none"/>')
    elif isinstance(domain, UnitBall):
        els.append(f'<circle cx="0.000000" cy="0.000000" r="1.000000" '
                   f'stroke="#000000" stroke-width="{_fmt(0.004 * size)}" '
                   f'fill="none"/>')
    elif isinstance(domain, Polygon):
        els.append(f'<path d="{_path(domain.vertices, True)}" stroke="#000000" '
                   f'stroke-width="{_fmt(0.004 * size)}" fill="none"/>')
    return els


def traces_svg(traces, domain: Domain = None, width: int = 640) -> str:
    """Render ball traces (and the domain boundary) as an SVG document string."""
    chunks = [t.polyline for t in traces]
    centers = [t.center for t in traces]
    if isinstance(domain, PuncturedSpace):
        chunks.append(domain.obstacles)
    if isinstance(domain, UnitBall):
        chunks.append(np.array([[-1.0, -1.0], [1.0, 1.0]]))
    lo, hi = _bbox(chunks + [np.array(centers)])
    size = float(max(hi[0] - lo[0], hi[1] - lo[1]))
    height = int(round(width * (hi[1] - lo[1]) / (hi[0] - lo[0])))
    vb = f"{_fmt(lo[0])} {_fmt(-hi[1])} {_fmt(hi[0] - lo[0])} {_fmt(hi[1] - lo[1])}"
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="{vb}">',
    ]
    lines += _domain_elements(domain, lo, hi, size)
    for i, t in enumerate(traces):
        color = _PALETTE[i % len(_PALETTE)]
        pts = t.polyline
        if len(pts):
            lines.append(f'<path d="{_path(pts, t.closed)}" stroke="{color}" '
                         f'stroke-width="{_fmt(0.006 * size)}" fill="none"/>')
        c = t.center
        lines.append(f'<circle cx="{_fmt(float(c[0]))}" cy="{_fmt(-float(c[1]))}" '
                     f'r="{_fmt(0.008 * size)}" fill="{color}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_traces_svg(traces, domain: Domain, path: str, width: int = 640):
    with open(path, "w") as fh:
        fh.write(traces_svg(traces, domain, width=width))


def traces_csv(traces) -> str:
    """CSV for ball traces: one (radius, x, y, residual) row per kept point."""
    rows = ["radius,x,y,residual"]
    for t in traces:
        keep = np.ones(len(t.points), dtype=bool)
        if t.truncated_rays:
            keep[t.truncated_rays] = False
        for p, res in zip(t.points[keep], t.residuals[keep]):
            rows.append(f"{t.radius:.12g},{p[0]:.12g},{p[1]:.12g},{res:.6g}")
    return "\n".join(rows) + "\n"


def write_traces_csv(traces, path: str):
    with open(path, "w") as fh:
        fh.write(traces_csv(traces))


def rows_csv(rows, columns) -> str:
    """Generic CSV from a list of dicts with a fixed column order."""
    out = [",".join(columns)]
    for row in rows:
        cells = []
        for col in columns:
            v = row.get(col)
            if isinstance(v, float):
                cells.append(f"{v:.12g}")
            elif isinstance(v, (list, np.ndarray)):
                cells.append(";".join(f"{float(a):.12g}" for a in v))
            else:
                cells.append(str(v))
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


class _NumpyEncoder(json.JSONEncoder):
    def default(self, obj):
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, (np.floating, np.integer)):
            return obj.item()
        if isinstance(obj, (np.bool_,)):
            return bool(obj)
        return super().default(obj)


def to_json(obj) -> str:
    return json.dumps(obj, cls=_NumpyEncoder, indent=2, sort_keys=True) + "\n"


def write_json(obj, path: str):
    with open(path, "w") as fh:
        fh.write(to_json(obj))
