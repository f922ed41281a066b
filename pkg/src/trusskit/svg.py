"""Deterministic SVG rendering of trusses.

Edges are <line> elements (removed ones dashed), vertices are <circle>
elements.  Scalar colorings (sigma, elongation) paint active edges on a
diverging blue-white-red scale symmetric about zero, with a legend strip.
The flex coloring overlays displacement arrows instead.  Output depends
only on the inputs, so identical calls give identical bytes.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .errors import InputError
from .model import Truss

WIDTH = 640.0
MARGIN = 40.0
COLORINGS = ("none", "sigma", "elongation", "flex")

# diverging anchors: dark blue, near-white, dark red
_NEG = (5, 48, 97)
_MID = (247, 247, 247)
_POS = (103, 0, 31)


def _blend(c0, c1, t: float):
    return tuple(round(a + (b - a) * t) for a, b in zip(c0, c1))


def diverging_color(t: float) -> str:
    """t in [-1, 1] -> #rrggbb on the blue-white-red scale."""
    t = max(-1.0, min(1.0, t))
    rgb = _blend(_MID, _POS, t) if t >= 0 else _blend(_MID, _NEG, -t)
    return "#%02x%02x%02x" % rgb


def _f(x: float) -> str:
    return "%.6g" % (x + 0.0)


def render_svg(truss: Truss, coloring: str = "none",
               values: Optional[Sequence] = None) -> str:
    if coloring not in COLORINGS:
        raise InputError(f"unknown coloring {coloring!r}; pick one of {COLORINGS}")
    pts = truss.coords()
    if len(pts) == 0:
        raise InputError("cannot render an empty truss")
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-9))
    scale = (WIDTH - 2 * MARGIN) / span
    height = 2 * MARGIN + (hi[1] - lo[1]) * scale
    legend_h = 46.0 if coloring in ("sigma", "elongation") else 0.0

    def sx(x):
        return MARGIN + (x - lo[0]) * scale

    def sy(y):
        return MARGIN + (hi[1] - y) * scale

    active = [i for i, _ in truss.active_edges()]
    edge_color = {}
    vmax = 0.0
    if coloring in ("sigma", "elongation"):
        if values is None:
            raise InputError(f"coloring {coloring!r} needs per-edge values")
        vals = np.asarray(values, dtype=float).ravel()
        if len(vals) != len(active):
            raise InputError(
                f"coloring vector has {len(vals)} entries for {len(active)} active edges")
        vmax = float(np.max(np.abs(vals))) if len(vals) else 0.0
        denom = vmax if vmax > 0 else 1.0
        for eid, v in zip(active, vals):
            edge_color[eid] = diverging_color(v / denom)
    flex = None
    if coloring == "flex":
        if values is None:
            raise InputError("coloring 'flex' needs a displacement vector")
        flex = np.asarray(values, dtype=float).reshape(-1)
        if len(flex) != 2 * len(pts):
            raise InputError(
                f"flex vector has {len(flex)} entries for {len(pts)} vertices")
        flex = flex.reshape(-1, 2)

    out = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(WIDTH)}" '
        f'height="{_f(height + legend_h)}" '
        f'viewBox="0 0 {_f(WIDTH)} {_f(height + legend_h)}">')
    out.append(f'<rect width="{_f(WIDTH)}" height="{_f(height + legend_h)}" fill="white"/>')

    for i, e in enumerate(truss.edges):
        x1, y1 = sx(pts[e.a][0]), sy(pts[e.a][1])
        x2, y2 = sx(pts[e.b][0]), sy(pts[e.b][1])
        if e.removed:
            style = 'stroke="#aaaaaa" stroke-width="1.5" stroke-dasharray="6 4"'
        else:
            color = edge_color.get(i, "#333333")
            style = f'stroke="{color}" stroke-width="2.5"'
        out.append(
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" {style}/>')

    if flex is not None:
        fmax = float(np.max(np.abs(flex))) if flex.size else 0.0
        arrow = 0.12 * span * scale / fmax if fmax > 0 else 0.0
        for i, (dx, dy) in enumerate(flex):
            if arrow == 0.0 or (dx == 0.0 and dy == 0.0):
                continue
            x1, y1 = sx(pts[i][0]), sy(pts[i][1])
            x2 = x1 + dx * arrow
            y2 = y1 - dy * arrow
            out.append(
                f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                'stroke="#d95f02" stroke-width="2" class="flex"/>')

    for i, p in enumerate(pts):
        out.append(
            f'<circle cx="{_f(sx(p[0]))}" cy="{_f(sy(p[1]))}" r="4" '
            'fill="#1b6ca8" stroke="#0b3954" stroke-width="1"/>')

    if legend_h:
        steps = 12
        bar_w = (WIDTH - 2 * MARGIN) / steps
        y0 = height + 8
        for k in range(steps):
            t = -1.0 + 2.0 * (k + 0.5) / steps
            out.append(
                f'<rect x="{_f(MARGIN + k * bar_w)}" y="{_f(y0)}" '
                f'width="{_f(bar_w + 0.5)}" height="12" '
                f'fill="{diverging_color(t)}"/>')
        for t, anchor, xpos in ((-vmax, "start", MARGIN),
                                (0.0, "middle", WIDTH / 2),
                                (vmax, "end", WIDTH - MARGIN)):
            out.append(
                f'<text x="{_f(xpos)}" y="{_f(y0 + 26)}" font-size="12" '
                f'font-family="monospace" text-anchor="{anchor}">{_f(t)}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
