"""Wagon-wheel compatibility conditions and their sums over regions.

Around an interior vertex V0 with neighbor ring V1..Vd (counterclockwise),
any elongation-rate field L induced by a velocity field satisfies one
linear condition supported on the wheel:

    0 = sum_i L(rim_i) / h_i
      - sum_i [ cos(beta_i)/h_i + cos(gamma_i)/h_{i-1} ] L(spoke_i)

where beta_i is the angle of triangle (V0, Vi, Vi+1) at Vi, gamma_i the
angle of triangle (V0, Vi-1, Vi) at Vi, and h_i = |V0 Vi| sin(beta_i) is
the distance from V0 to the rim line through Vi, Vi+1.

Rows are stored as coefficients on L (elongation rates).  The matching
functional on lambda = length * rate divides each coefficient by the bar
length.

Summing the wheel rows of a region of interior vertices produces a
functional supported only on the double layer near the region boundary;
each surviving edge's coefficient has a closed form determined by which
of the edge's four surrounding vertices (two endpoints, two opposite
apexes) belong to the region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Optional

import numpy as np

from .errors import InfeasibleError, InputError
from .geometry import angle_at, point_line_distance
from .model import Star, Truss, star_of, topology_report
from .rigidity import DEFAULT_TOL, analyze, assemble_rigidity

SQRT3 = math.sqrt(3.0)

#: per-edge weights of the region sum on a unit triangular lattice, in units
#: of 2/sqrt(3), keyed by the combinatorial class of the edge
TRIANGULAR_TABLE = {
    "boundary": 1.0,
    "isthmus": 2.0,
    "unique-incoming": -1.0,
    "extreme-incoming": 0.0,
    "middle-incoming": 1.0,
    "spine": -2.0,
    "parallel": -1.0,
    "zero": 0.0,
}


@dataclass(frozen=True)
class WagonWheelRow:
    center: int
    coeffs: dict          # edge id -> coefficient on L

    def dense(self, edge_order) -> np.ndarray:
        row = np.zeros(len(edge_order))
        pos = {e: i for i, e in enumerate(edge_order)}
        for e, cval in self.coeffs.items():
            row[pos[e]] = cval
        return row

    def dense_lambda(self, truss: Truss, edge_order) -> np.ndarray:
        """Same functional expressed on lambda = length * rate."""
        row = self.dense(edge_order)
        lengths = np.array([truss.measured_length(e) for e in edge_order])
        return row / lengths

    def apply(self, rates: Dict[int, float]) -> float:
        return sum(c * rates[e] for e, c in self.coeffs.items())


def wagon_row(truss: Truss, v: int, tol: float = DEFAULT_TOL) -> WagonWheelRow:
    star = star_of(truss, v)
    pts = truss.vertices
    d = len(star.ring)
    ell = [math.dist(pts[v], pts[w]) for w in star.ring]
    beta = []
    gamma = []
    h = []
    for i, w in enumerate(star.ring):
        nxt = star.ring[(i + 1) % d]
        prv = star.ring[(i - 1) % d]
        alpha_i = angle_at(pts[v], pts[w], pts[nxt])
        if math.sin(alpha_i) <= tol:
            raise InfeasibleError(
                f"collapsed sector at vertex {v} between neighbors {w} and {nxt}")
        b = angle_at(pts[w], pts[v], pts[nxt])
        g = angle_at(pts[w], pts[v], pts[prv])
        beta.append(b)
        gamma.append(g)
        h.append(ell[i] * math.sin(b))
    # support distances are consistent across the two triangles of a sector
    for i in range(d):
        alt = ell[(i + 1) % d] * math.sin(gamma[(i + 1) % d])
        if abs(alt - h[i]) > 1e-8 * max(h[i], alt):
            raise InfeasibleError(
                f"inconsistent sector geometry around vertex {v} (support distance)")

    coeffs: dict = {}
    for i in range(d):
        coeffs[star.rim_edges[i]] = coeffs.get(star.rim_edges[i], 0.0) + 1.0 / h[i]
        radial_c = -(math.cos(beta[i]) / h[i] + math.cos(gamma[i]) / h[i - 1])
        coeffs[star.radial_edges[i]] = coeffs.get(star.radial_edges[i], 0.0) + radial_c
    return WagonWheelRow(center=v, coeffs=coeffs)


@dataclass(frozen=True)
class WagonBasisReport:
    rows: tuple                # WagonWheelRow per interior vertex
    matrix: np.ndarray         # rows on lambda, aligned with edge_order
    edge_order: tuple
    rank: int
    c: int
    spans_compatibility: bool  # rank == c


def wagon_basis_check(truss: Truss, tol: float = DEFAULT_TOL) -> WagonBasisReport:
    """Do the interior wheel rows span all compatibility conditions?

    The wheel rows always lie inside the left null space of the geometry
    matrix, so spanning is equivalent to their rank reaching c.
    """
    topo = topology_report(truss)
    rep = analyze(truss, tol=tol)
    rows = tuple(wagon_row(truss, v, tol=tol) for v in topo.interior_vertices)
    if rows:
        W = np.vstack([r.dense_lambda(truss, rep.edge_order) for r in rows])
        s = np.linalg.svd(W, compute_uv=False)
        rank = int(np.sum(s > tol * s[0] * max(W.shape))) if s.size else 0
    else:
        W = np.zeros((0, rep.e))
        rank = 0
    return WagonBasisReport(
        rows=rows,
        matrix=W,
        edge_order=rep.edge_order,
        rank=rank,
        c=rep.c,
        spans_compatibility=(rank == rep.c),
    )


# ----------------------------------------------------------------------
# region sums

@dataclass(frozen=True)
class CurveSumFunctional:
    region: tuple
    sigma: dict          # edge id -> summed coefficient on L
    classes: dict        # edge id -> combinatorial class
    closed_form: dict    # edge id -> coefficient predicted by the closed form

    def apply(self, rates: Dict[int, float]) -> float:
        return sum(c * rates[e] for e, c in self.sigma.items())

    def dense(self, edge_order) -> np.ndarray:
        row = np.zeros(len(edge_order))
        pos = {e: i for i, e in enumerate(edge_order)}
        for e, cval in self.sigma.items():
            if abs(cval) > 0.0:
                row[pos[e]] = cval
        return row


def curve_sum(truss: Truss, region: Iterable[int], tol: float = DEFAULT_TOL) -> CurveSumFunctional:
    """Sum of the wheel rows over a region of interior vertices.

    Alongside the literal sum, every edge meeting the region's closed
    stars is classified by which of its four surrounding vertices lie in
    the region, and the classified closed-form coefficient is evaluated
    independently; the two agree for valid triangulations.
    """
    region = tuple(dict.fromkeys(region))
    topo = topology_report(truss)
    interior = set(topo.interior_vertices)
    for v in region:
        if v not in interior:
            raise InputError(f"region vertex {v} is not an interior vertex")
    rset = set(region)

    sigma: dict = {}
    support: set = set()
    for v in region:
        row = wagon_row(truss, v, tol=tol)
        for e, cval in row.coeffs.items():
            sigma[e] = sigma.get(e, 0.0) + cval
            support.add(e)

    pts = truss.vertices
    faceset = truss.alive_faces
    edge_opposites: dict = {}
    pair_to_id = {}
    for i, e in truss.active_edges():
        pair_to_id[e.pair()] = i
        edge_opposites[i] = []
    for f in faceset:
        i, j, k = f
        for (a, b), w in (((i, j), k), ((j, k), i), ((i, k), j)):
            eid = pair_to_id.get(frozenset((a, b)))
            if eid is not None:
                edge_opposites[eid].append(w)

    classes: dict = {}
    closed: dict = {}
    for eid in support:
        e = truss.edges[eid]
        p0, p1 = e.a, e.b
        opps = edge_opposites[eid]
        ends_in = [w for w in (p0, p1) if w in rset]
        opps_in = [w for w in opps if w in rset]
        cls, value = _closed_form(pts, (p0, p1), opps, ends_in, opps_in)
        classes[eid] = cls
        closed[eid] = value

    return CurveSumFunctional(region=region, sigma=sigma, classes=classes, closed_form=closed)


def _closed_form(pts, ends, opps, ends_in, opps_in):
    p0, p1 = ends
    ne, no = len(ends_in), len(opps_in)
    if ne == 0 and no == 0:
        return "zero", 0.0
    if ne == 2 and no == 2:
        return "zero", 0.0
    if ne == 0 and no == 1:
        w = opps_in[0]
        return "boundary", 1.0 / point_line_distance(pts[w], pts[p0], pts[p1])
    if ne == 0 and no == 2:
        val = sum(1.0 / point_line_distance(pts[w], pts[p0], pts[p1]) for w in opps_in)
        return "isthmus", val
    if ne == 2 and no == 0:
        val = -sum(1.0 / point_line_distance(pts[w], pts[p0], pts[p1]) for w in opps)
        return "spine", val
    if ne == 2 and no == 1:
        out = [w for w in opps if w not in opps_in]
        return "parallel", -1.0 / point_line_distance(pts[out[0]], pts[p0], pts[p1])
    # exactly one endpoint inside from here on
    cin = ends_in[0]
    tout = p1 if cin == p0 else p0
    if no == 0:
        # radial edge of a single wheel: coefficient straight from the wheel
        val = -sum(
            math.cos(angle_at(pts[tout], pts[cin], pts[w]))
            / point_line_distance(pts[cin], pts[tout], pts[w])
            for w in opps)
        return "unique-incoming", val
    if no == 1 and len(opps) == 2:
        win = opps_in[0]
        wout = [w for w in opps if w != win][0]
        val = (
            math.cos(angle_at(pts[cin], pts[win], pts[tout]))
            / point_line_distance(pts[tout], pts[cin], pts[win])
            - math.cos(angle_at(pts[tout], pts[cin], pts[wout]))
            / point_line_distance(pts[cin], pts[tout], pts[wout]))
        return "extreme-incoming", val
    if no == 2:
        val = sum(
            math.cos(angle_at(pts[cin], pts[w], pts[tout]))
            / point_line_distance(pts[tout], pts[cin], pts[w])
            for w in opps_in)
        return "middle-incoming", val
    # one endpoint in, one opposite in, but the edge has a single face:
    # cannot occur for interior wheel centers
    raise InfeasibleError(f"unclassifiable edge ({p0},{p1}) in region sum")


@dataclass(frozen=True)
class WitnessReport:
    value: float
    verdict: str           # "incompatible" or "inconclusive"
    functional: CurveSumFunctional


def curve_sum_witness(truss: Truss, region: Iterable[int], rates: Dict[int, float],
                       tol: float = DEFAULT_TOL) -> WitnessReport:
    """Single-number obstruction test for prescribed elongation rates.

    Applies the region-sum functional to the rates; a nonzero value proves
    no velocity field can realize them.  Intended for the textbook setup
    of zero boundary rates and positive rates on the double layer, but the
    verdict is valid for any rate data.
    """
    fun = curve_sum(truss, region, tol=tol)
    missing = [e for e in fun.sigma if e not in rates and abs(fun.sigma[e]) > tol]
    if missing:
        raise InputError(f"rates missing for edges {sorted(missing)[:8]}")
    value = fun.apply({e: rates.get(e, 0.0) for e in fun.sigma})
    scale = max(1.0, max((abs(v) for v in fun.sigma.values()), default=1.0)
                * max((abs(v) for v in rates.values()), default=1.0))
    verdict = "incompatible" if abs(value) > tol * scale else "inconclusive"
    return WitnessReport(value=value, verdict=verdict, functional=fun)
