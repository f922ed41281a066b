"""Bigon/Triangle/Prism/Pin composition of rigid trusses.

A BTP tree grows trusses from segments by gluing pieces at coordinate-
coincident points: a bigon joins two pieces at 2 points, a triangle joins
three pieces pairwise at 3 non-collinear points, a prism joins two pieces
through three legs, and a pin merges two coincident vertices of one piece.
Every nondegenerate assembly is infinitesimally rigid, and its
compatibility count follows the tree:

    segment 0, bigon c1+c2+1, triangle c1+c2+c3, prism c1+..+c5, pin c+2.

Gluing points are specified by coordinates and resolved against each
child within PIN_TOL, so two pieces join wherever they carry vertices at
the same position.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InputError
from .geometry import Point2, cross, dist
from .model import Edge, Truss

PIN_TOL = 1e-9


def _pt(p) -> Point2:
    x, y = p
    return Point2(float(x), float(y))


# ----------------------------------------------------------------------
# node variants

@dataclass(frozen=True)
class Segment:
    p: Point2
    q: Point2

    def __post_init__(self):
        object.__setattr__(self, "p", _pt(self.p))
        object.__setattr__(self, "q", _pt(self.q))
        if dist(self.p, self.q) <= PIN_TOL:
            raise InputError("segment endpoints coincide")


@dataclass(frozen=True)
class Bigon:
    first: "BtpNode"
    second: "BtpNode"
    pins: tuple       # two junction points, each present in both children

    def __post_init__(self):
        pins = tuple(_pt(p) for p in self.pins)
        if len(pins) != 2:
            raise InputError("bigon needs exactly 2 pin points")
        if dist(pins[0], pins[1]) <= PIN_TOL:
            raise InputError("bigon pin points coincide; the pair must be distinct")
        object.__setattr__(self, "pins", pins)


@dataclass(frozen=True)
class Triangle:
    first: "BtpNode"
    second: "BtpNode"
    third: "BtpNode"
    pins: tuple       # junctions: first-second, second-third, third-first

    def __post_init__(self):
        pins = tuple(_pt(p) for p in self.pins)
        if len(pins) != 3:
            raise InputError("triangle needs exactly 3 pin points")
        a, b, c = pins
        scale = max(dist(a, b), dist(b, c), dist(c, a), 1e-300)
        if abs(cross(a, b, c)) <= 1e-9 * scale * scale:
            raise InputError("triangle anchor points are collinear")
        object.__setattr__(self, "pins", pins)


@dataclass(frozen=True)
class Prism:
    first: "BtpNode"
    second: "BtpNode"
    legs: tuple       # three nodes
    pins: tuple       # ((z1,z4), (z2,z5), (z3,z6)): leg i runs z_i -> z_{i+3}

    def __post_init__(self):
        if len(self.legs) != 3:
            raise InputError("prism needs exactly 3 legs")
        pins = tuple((_pt(a), _pt(b)) for a, b in self.pins)
        if len(pins) != 3:
            raise InputError("prism needs 3 leg anchor pairs (6 junctions)")
        object.__setattr__(self, "legs", tuple(self.legs))
        object.__setattr__(self, "pins", pins)

    def leg_anchors(self) -> "PrismLegs":
        (z1, z4), (z2, z5), (z3, z6) = self.pins
        return PrismLegs((z1, z2, z3, z4, z5, z6))


@dataclass(frozen=True)
class Pin:
    child: "BtpNode"
    at: Point2        # two vertices of the child sit here; they merge

    def __post_init__(self):
        object.__setattr__(self, "at", _pt(self.at))


BtpNode = Union[Segment, Bigon, Triangle, Prism, Pin]


# ----------------------------------------------------------------------
# prism nondegeneracy

@dataclass(frozen=True)
class PrismLegs:
    z: tuple   # six anchor points; legs z1-z4, z2-z5, z3-z6

    def __post_init__(self):
        z = tuple(_pt(p) for p in self.z)
        if len(z) != 6:
            raise InputError("prism legs need exactly 6 anchor points")
        object.__setattr__(self, "z", z)


def prism_determinant(legs: PrismLegs) -> float:
    """Nondegeneracy certificate for three prism legs.

    Row i is (x_i - x_{i+3}, y_i - y_{i+3}, x_i y_{i+3} - x_{i+3} y_i): leg
    direction plus moment.  Zero exactly when the legs are parallel or
    their lines concur, the two ways a prism picks up a shear or rotation.
    """
    z = legs.z
    rows = []
    for i in range(3):
        a, b = z[i], z[i + 3]
        rows.append((a.x - b.x, a.y - b.y, a.x * b.y - b.x * a.y))
    (a1, b1, c1), (a2, b2, c2), (a3, b3, c3) = rows
    return (a1 * (b2 * c3 - b3 * c2)
            - b1 * (a2 * c3 - a3 * c2)
            + c1 * (a2 * b3 - a3 * b2))


# ----------------------------------------------------------------------
# assembly

@dataclass(frozen=True)
class Assembly:
    truss: Truss
    predicted_c: int
    degenerate: bool          # some prism had a zero determinant
    prism_dets: tuple


def predicted_compat(node: BtpNode) -> int:
    if isinstance(node, Segment):
        return 0
    if isinstance(node, Bigon):
        return predicted_compat(node.first) + predicted_compat(node.second) + 1
    if isinstance(node, Triangle):
        return sum(predicted_compat(x) for x in (node.first, node.second, node.third))
    if isinstance(node, Prism):
        return sum(predicted_compat(x)
                   for x in (node.first, node.second) + node.legs)
    if isinstance(node, Pin):
        return predicted_compat(node.child) + 2
    raise InputError(f"unknown BTP node {node!r}")


def vertices_at(coords: Sequence[Point2], p: Point2, tol: float = PIN_TOL):
    return [i for i, q in enumerate(coords) if dist(p, q) <= tol]


class _Parts:
    """Mutable coordinate/edge lists plus union-find over vertex slots."""

    def __init__(self):
        self.coords: list = []
        self.edges: list = []
        self.parent: list = []

    def add(self, coords, edges):
        base = len(self.coords)
        self.coords.extend(coords)
        self.parent.extend(range(base, base + len(coords)))
        self.edges.extend((a + base, b + base) for a, b in edges)
        return base

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            if rj < ri:
                ri, rj = rj, ri
            self.parent[rj] = ri

    def compact(self):
        roots = sorted({self.find(i) for i in range(len(self.coords))})
        remap = {r: k for k, r in enumerate(roots)}
        coords = [self.coords[r] for r in roots]
        edges = [(remap[self.find(a)], remap[self.find(b)]) for a, b in self.edges]
        return coords, edges


def _one_at(coords, p, what):
    hits = vertices_at(coords, p)
    if not hits:
        raise InputError(f"{what}: no vertex at ({p.x:.12g}, {p.y:.12g}); "
                         "pinned points must coincide within 1e-9")
    if len(hits) > 1:
        raise InputError(f"{what}: several vertices at ({p.x:.12g}, {p.y:.12g}); "
                         "pin is ambiguous")
    return hits[0]


def _build(node: BtpNode, dets: list):
    """Returns (coords, edges) with edges as index pairs."""
    if isinstance(node, Segment):
        return [node.p, node.q], [(0, 1)]

    if isinstance(node, (Bigon, Triangle)):
        children = ((node.first, node.second) if isinstance(node, Bigon)
                    else (node.first, node.second, node.third))
        built = [_build(ch, dets) for ch in children]
        parts = _Parts()
        bases = [parts.add(c, e) for c, e in built]
        if isinstance(node, Bigon):
            joins = [(0, 1, p) for p in node.pins]
        else:
            joins = [(0, 1, node.pins[0]), (1, 2, node.pins[1]), (2, 0, node.pins[2])]
        for i, j, p in joins:
            vi = _one_at(built[i][0], p, f"pin between pieces {i} and {j}")
            vj = _one_at(built[j][0], p, f"pin between pieces {i} and {j}")
            parts.union(bases[i] + vi, bases[j] + vj)
        return parts.compact()

    if isinstance(node, Prism):
        det = prism_determinant(node.leg_anchors())
        dets.append(det)
        scale = max(max(abs(p.x), abs(p.y)) for pair in node.pins for p in pair)
        if abs(det) <= 1e-9 * max(scale, 1.0) ** 4:
            warnings.warn("prism legs are degenerate (parallel or concurrent); "
                          "the assembly will carry a flex", UserWarning)
        built_ends = [_build(node.first, dets), _build(node.second, dets)]
        built_legs = [_build(leg, dets) for leg in node.legs]
        parts = _Parts()
        end_bases = [parts.add(c, e) for c, e in built_ends]
        leg_bases = [parts.add(c, e) for c, e in built_legs]
        for i, (za, zb) in enumerate(node.pins):
            va = _one_at(built_ends[0][0], za, f"leg {i} base pin")
            vl = _one_at(built_legs[i][0], za, f"leg {i} base pin")
            parts.union(end_bases[0] + va, leg_bases[i] + vl)
            vb = _one_at(built_ends[1][0], zb, f"leg {i} top pin")
            vm = _one_at(built_legs[i][0], zb, f"leg {i} top pin")
            parts.union(end_bases[1] + vb, leg_bases[i] + vm)
        return parts.compact()

    if isinstance(node, Pin):
        coords, edges = _build(node.child, dets)
        hits = vertices_at(coords, node.at)
        if len(hits) != 2:
            raise InputError(
                f"pin needs exactly 2 coincident vertices at "
                f"({node.at.x:.12g}, {node.at.y:.12g}), found {len(hits)}")
        parts = _Parts()
        parts.add(coords, edges)
        parts.union(hits[0], hits[1])
        return parts.compact()

    raise InputError(f"unknown BTP node {node!r}")


def assemble(node: BtpNode) -> Assembly:
    """Evaluate a BTP tree into a truss.

    Doubled links (from bigons of segments and the like) are kept; a
    degenerate prism is reported with a warning and the degenerate flag so
    the flex can still be inspected.
    """
    dets: list = []
    coords, edges = _build(node, dets)
    truss = Truss(
        vertices=tuple(coords),
        edges=tuple(Edge(a, b) for a, b in edges),
        allow_multi=True,
        allow_coincident=True,
    )
    scale = max(max(abs(p.x), abs(p.y)) for p in coords)
    degenerate = any(abs(d) <= 1e-9 * max(scale, 1.0) ** 4 for d in dets)
    return Assembly(truss=truss, predicted_c=predicted_compat(node),
                    degenerate=degenerate, prism_dets=tuple(dets))


# ----------------------------------------------------------------------
# JSON form (nested objects mirroring the node variants)

def node_to_json(node: BtpNode) -> dict:
    if isinstance(node, Segment):
        return {"variant": "segment", "p": [node.p.x, node.p.y],
                "q": [node.q.x, node.q.y]}
    if isinstance(node, Bigon):
        return {"variant": "bigon",
                "first": node_to_json(node.first),
                "second": node_to_json(node.second),
                "pins": [[p.x, p.y] for p in node.pins]}
    if isinstance(node, Triangle):
        return {"variant": "triangle",
                "first": node_to_json(node.first),
                "second": node_to_json(node.second),
                "third": node_to_json(node.third),
                "pins": [[p.x, p.y] for p in node.pins]}
    if isinstance(node, Prism):
        return {"variant": "prism",
                "first": node_to_json(node.first),
                "second": node_to_json(node.second),
                "legs": [node_to_json(l) for l in node.legs],
                "pins": [[[a.x, a.y], [b.x, b.y]] for a, b in node.pins]}
    if isinstance(node, Pin):
        return {"variant": "pin", "child": node_to_json(node.child),
                "at": [node.at.x, node.at.y]}
    raise InputError(f"unknown BTP node {node!r}")


def node_from_json(obj) -> BtpNode:
    if not isinstance(obj, dict) or "variant" not in obj:
        raise InputError("BTP node must be an object with a 'variant' field")
    try:
        variant = obj["variant"]
        if variant == "segment":
            return Segment(obj["p"], obj["q"])
        if variant == "bigon":
            return Bigon(node_from_json(obj["first"]),
                         node_from_json(obj["second"]), tuple(obj["pins"]))
        if variant == "triangle":
            return Triangle(node_from_json(obj["first"]),
                            node_from_json(obj["second"]),
                            node_from_json(obj["third"]), tuple(obj["pins"]))
        if variant == "prism":
            return Prism(node_from_json(obj["first"]),
                         node_from_json(obj["second"]),
                         tuple(node_from_json(l) for l in obj["legs"]),
                         tuple((a, b) for a, b in obj["pins"]))
        if variant == "pin":
            return Pin(node_from_json(obj["child"]), obj["at"])
    except (KeyError, TypeError, ValueError) as ex:
        raise InputError(f"malformed BTP node: {ex}") from ex
    raise InputError(f"unknown BTP variant {obj['variant']!r}")
