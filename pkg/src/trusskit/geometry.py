"""Small planar geometry helpers used throughout the package."""

from __future__ import annotations

import math
from typing import NamedTuple


class Point2(NamedTuple):
    x: float
    y: float


def dist(p: Point2, q: Point2) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def angle_at(apex, p, q) -> float:
    """Angle at `apex` between rays apex->p and apex->q, in (0, pi]."""
    ax, ay = p[0] - apex[0], p[1] - apex[1]
    bx, by = q[0] - apex[0], q[1] - apex[1]
    na = math.hypot(ax, ay)
    nb = math.hypot(bx, by)
    if na == 0.0 or nb == 0.0:
        raise ValueError("angle_at: coincident points")
    c = (ax * bx + ay * by) / (na * nb)
    c = max(-1.0, min(1.0, c))
    return math.acos(c)


def point_line_distance(p, a, b) -> float:
    """Distance from p to the infinite line through a and b."""
    ux, uy = b[0] - a[0], b[1] - a[1]
    n = math.hypot(ux, uy)
    if n == 0.0:
        raise ValueError("point_line_distance: degenerate line")
    return abs((p[0] - a[0]) * uy - (p[1] - a[1]) * ux) / n


def cross(o, a, b) -> float:
    """2D cross product (a-o) x (b-o)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def signed_area(poly) -> float:
    s = 0.0
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def segments_cross(a, b, c, d) -> bool:
    """True if open segments ab and cd properly intersect or overlap.

    Shared endpoints do not count; collinear overlap of positive length does.
    """
    d1 = cross(c, d, a)
    d2 = cross(c, d, b)
    d3 = cross(a, b, c)
    d4 = cross(a, b, d)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    # collinear overlap check
    if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
        def on(p, q, r):
            return (
                min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
                and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])
            )
        pts = {tuple(a), tuple(b), tuple(c), tuple(d)}
        if len(pts) <= 2:
            return False
        hits = sum(1 for r in (c, d) if on(a, b, r)) + sum(
            1 for r in (a, b) if on(c, d, r)
        )
        # more contact than a single shared endpoint means overlap
        shared = len({tuple(a), tuple(b)} & {tuple(c), tuple(d)})
        return hits > shared
    return False


def point_in_polygon(p, poly) -> bool:
    """Strict interior test (ray casting); boundary points return False."""
    x, y = p[0], p[1]
    inside = False
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        # on-edge -> not strictly inside
        if cross((x0, y0), (x1, y1), (x, y)) == 0 and (
            min(x0, x1) <= x <= max(x0, x1) and min(y0, y1) <= y <= max(y0, y1)
        ):
            return False
        if (y0 > y) != (y1 > y):
            xi = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            if xi > x:
                inside = not inside
    return inside
