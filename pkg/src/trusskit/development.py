"""Length-prescribed (nonlinear) problems: curvature, development, 3-stars.

Combinatorics plus bar lengths determine intrinsic geometry: each triangle's
angles come from the cosine law, and an interior vertex carries a curvature
atom

    K(V) = 2*pi - sum of incident triangle angles,

positive where angle is missing (a cone that cannot flatten).  A disk
triangulation with strict triangle inequalities and all atoms zero embeds
isometrically in the plane, uniquely up to rigid motion and reflection; the
embedding is built triangle by triangle along a peel order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Sequence

import numpy as np

from .errors import InfeasibleError, InputError
from .geometry import cross
from .model import Truss, topology_report

DEV_TOL = 1e-8


def length_map(truss: Truss, lengths: Optional[Dict[int, float]] = None) -> Dict[int, float]:
    """Resolve a per-edge length table; defaults to stored-or-measured lengths."""
    out = {}
    for i, _ in truss.active_edges():
        if lengths is not None and i in lengths:
            val = float(lengths[i])
        elif lengths is not None:
            raise InputError(f"length missing for edge {i}")
        else:
            val = truss.edge_length(i)
        if not (val > 0.0) or not math.isfinite(val):
            raise InputError(f"edge {i} has non-positive length {val}")
        out[i] = val
    return out


def _face_angles(truss: Truss, face, ell: Dict[int, float]):
    """Angles of a face keyed by vertex, from the cosine law.

    Raises on violated (or degenerate, within 1e-12 relative) triangle
    inequalities; acos arguments are clamped only inside a 1e-12 guard.
    """
    i, j, k = face
    lij = ell[truss.find_edge(i, j)]
    ljk = ell[truss.find_edge(j, k)]
    lik = ell[truss.find_edge(i, k)]
    m = max(lij, ljk, lik)
    if lij + ljk - lik <= 1e-12 * m or ljk + lik - lij <= 1e-12 * m \
            or lik + lij - ljk <= 1e-12 * m:
        raise InfeasibleError(
            f"face {face} violates the strict triangle inequality "
            f"(lengths {lij:.6g}, {ljk:.6g}, {lik:.6g})")
    out = {}
    for vx, (p, q, r) in ((i, (lij, lik, ljk)), (j, (lij, ljk, lik)), (k, (lik, ljk, lij))):
        c = (p * p + q * q - r * r) / (2.0 * p * q)
        if c > 1.0 + 1e-12 or c < -1.0 - 1e-12:
            raise InfeasibleError(f"degenerate angle at vertex {vx} of face {face}")
        out[vx] = math.acos(max(-1.0, min(1.0, c)))
    return out


@dataclass(frozen=True)
class CurvatureReport:
    atoms: dict            # interior vertex -> K
    flat: bool
    max_abs: float
    tol: float


def curvature_atoms(truss: Truss, lengths: Optional[Dict[int, float]] = None,
                    tol: float = DEV_TOL) -> CurvatureReport:
    ell = length_map(truss, lengths)
    topo = topology_report(truss)
    acc = {v: 0.0 for v in topo.interior_vertices}
    for f in topo.faces:
        ang = _face_angles(truss, f, ell)
        for v in f:
            if v in acc:
                acc[v] += ang[v]
    atoms = {v: 2.0 * math.pi - s for v, s in acc.items()}
    max_abs = max((abs(k) for k in atoms.values()), default=0.0)
    return CurvatureReport(atoms=atoms, flat=(max_abs < tol), max_abs=max_abs, tol=tol)


# ----------------------------------------------------------------------
# peel order

def peel_order(truss: Truss):
    """Construction order for a disk triangulation.

    Found by reverse removal: repeatedly strip a boundary triangle with two
    boundary edges if one exists, otherwise a boundary triangle whose
    boundary edge faces an interior vertex (one always exists while interior
    vertices remain).  Ties break on the lowest face index.  Reversing the
    removals gives an order in which every triangle meets the union of its
    predecessors in exactly one edge or two adjacent edges.
    """
    topo = topology_report(truss)
    if topo.genus != 0:
        raise InfeasibleError("peel order requires a disk (no holes)")
    faces = list(topo.faces)
    index = {f: i for i, f in enumerate(faces)}
    remaining = set(faces)

    def edge_faces_now():
        ef: dict = {}
        for f in remaining:
            i, j, k = f
            for a, b in ((i, j), (j, k), (i, k)):
                ef.setdefault(frozenset((a, b)), []).append(f)
        return ef

    removal = []
    while len(remaining) > 1:
        ef = edge_faces_now()
        boundary_edges = {e for e, fs in ef.items() if len(fs) == 1}
        boundary_verts = set()
        for e in boundary_edges:
            boundary_verts |= set(e)
        ears = []
        bites = []
        for f in remaining:
            i, j, k = f
            edges = [frozenset((i, j)), frozenset((j, k)), frozenset((i, k))]
            nb = sum(1 for e in edges if e in boundary_edges)
            if nb >= 2:
                ears.append(f)
            elif nb == 1:
                bedge = next(e for e in edges if e in boundary_edges)
                apex = next(v for v in f if v not in bedge)
                if apex not in boundary_verts:
                    bites.append(f)
        if ears:
            pick = min(ears, key=lambda f: index[f])
        elif bites:
            pick = min(bites, key=lambda f: index[f])
        else:
            raise InfeasibleError("peel order stuck; triangulation is not a disk")
        removal.append(pick)
        remaining.discard(pick)
    removal.extend(remaining)
    removal.reverse()
    return removal


# ----------------------------------------------------------------------
# development

@dataclass(frozen=True)
class Development:
    coords: np.ndarray      # (v, 2) planar positions
    order: tuple            # faces in placement order
    diameter: float
    max_edge_error: float   # worst |realized - prescribed| / diameter


def develop(truss: Truss, lengths: Optional[Dict[int, float]] = None,
            seed_edge: Optional[int] = None, tol: float = DEV_TOL) -> Development:
    """Isometric planar development of a flat disk triangulation.

    The seed edge is pinned from the origin along the +x axis, and its
    lowest-index adjacent face opens to the same side it occupies in the
    stored coordinates (upper half plane if that placement is degenerate);
    everything else is then forced, so the output is deterministic and an
    already flat embedding comes back unchanged up to rotation and shift.
    """
    ell = length_map(truss, lengths)
    curv = curvature_atoms(truss, lengths, tol=tol)
    if not curv.flat:
        bad = sorted((v for v, k in curv.atoms.items() if abs(k) >= tol),
                     key=lambda v: -abs(curv.atoms[v]))
        raise InfeasibleError(
            f"length data is not flat: curvature atoms at vertices {bad[:6]} "
            f"(max |K| = {curv.max_abs:.3e})")
    order = peel_order(truss)

    placed: dict = {}
    placed_edges: set = set()
    placed_face_of_edge: dict = {}
    scale = max(ell.values())

    def put_face(f):
        nonlocal scale
        have = [v for v in f if v in placed]
        i, j, k = f
        pairs = [(i, j), (j, k), (i, k)]
        if len(have) == 0:
            # first triangle: local cosine-law coordinates
            li = ell[truss.find_edge(i, j)]
            lj = ell[truss.find_edge(j, k)]
            lk = ell[truss.find_edge(i, k)]
            placed[i] = np.array([0.0, 0.0])
            placed[j] = np.array([li, 0.0])
            x = (li * li + lk * lk - lj * lj) / (2.0 * li)
            y = math.sqrt(max(lk * lk - x * x, 0.0))
            placed[k] = np.array([x, y])
        elif len(have) >= 2:
            shared = [(a, b) for a, b in pairs
                      if a in placed and b in placed
                      and frozenset((a, b)) in placed_edges]
            if not shared:
                raise InfeasibleError(
                    "placement order broke: face meets predecessors without a shared edge")
            new = [v for v in f if v not in placed]
            if new:
                u, w = shared[0]
                nv = new[0]
                base = placed[w] - placed[u]
                d = float(np.linalg.norm(base))
                lu = ell[truss.find_edge(u, nv)]
                lw = ell[truss.find_edge(w, nv)]
                a = (d * d + lu * lu - lw * lw) / (2.0 * d)
                hh = math.sqrt(max(lu * lu - a * a, 0.0))
                t = base / d
                nrm = np.array([-t[1], t[0]])
                # open away from the already placed triangle on this edge
                prev = placed_face_of_edge[frozenset((u, w))]
                pv = next(v for v in prev if v not in (u, w))
                side = float(np.dot(placed[pv] - placed[u], nrm))
                sgn = -1.0 if side > 0 else 1.0
                placed[nv] = placed[u] + a * t + sgn * hh * nrm
        else:
            raise InfeasibleError("placement order broke: face meets predecessors at one vertex")
        # check all realized edges of this face against the length table
        for a, b in pairs:
            got = float(np.linalg.norm(placed[a] - placed[b]))
            want = ell[truss.find_edge(a, b)]
            if abs(got - want) > tol * max(scale, 1.0) * 100:
                raise InfeasibleError(
                    f"placement mismatch on edge ({a},{b}): {got:.12g} vs {want:.12g}; "
                    "length data is inconsistent")
            key = frozenset((a, b))
            placed_edges.add(key)
            placed_face_of_edge.setdefault(key, f)

    for f in order:
        put_face(f)

    coords = np.zeros((truss.n_vertices, 2))
    for v, p in placed.items():
        coords[v] = p
    if len(placed) != truss.n_vertices:
        raise InfeasibleError("development did not place every vertex")

    coords = _pin_seed(truss, coords, ell, seed_edge)

    dia = _diameter(coords)
    worst = 0.0
    for i, _ in truss.active_edges():
        e = truss.edges[i]
        got = float(np.linalg.norm(coords[e.a] - coords[e.b]))
        worst = max(worst, abs(got - ell[i]))
    rel = worst / max(dia, 1e-300)
    if rel > 100 * tol:
        raise InfeasibleError(
            f"development failed to reproduce edge lengths (worst misfit {worst:.3e})")
    return Development(coords=coords, order=tuple(order), diameter=dia, max_edge_error=rel)


def _pin_seed(truss: Truss, coords: np.ndarray, ell, seed_edge: Optional[int]) -> np.ndarray:
    if seed_edge is None:
        seed_edge = truss.active_edges()[0][0]
    e = truss.edges[seed_edge]
    if e.removed:
        raise InputError(f"seed edge {seed_edge} is removed")
    a, b = e.a, e.b
    origin = coords[a].copy()
    out = coords - origin
    d = out[b]
    ang = math.atan2(d[1], d[0])
    ca, sa = math.cos(-ang), math.sin(-ang)
    rot = np.array([[ca, -sa], [sa, ca]])
    out = out @ rot.T
    # reflection convention: lowest-index face on the seed edge keeps the
    # side it has in the stored drawing, upward when that is degenerate
    face = min((f for f in truss.alive_faces if a in f and b in f), default=None)
    if face is not None:
        w = next(v for v in face if v not in (a, b))
        src = truss.coords()
        want_up = cross(src[a], src[b], src[w]) >= 0
        if (out[w][1] >= 0) != want_up:
            out[:, 1] = -out[:, 1]
    return out


def _diameter(coords: np.ndarray) -> float:
    # hull-free quadratic scan is fine at these sizes
    d2 = 0.0
    for i in range(len(coords)):
        diff = coords[i + 1:] - coords[i]
        if len(diff):
            d2 = max(d2, float(np.max(np.einsum("ij,ij->i", diff, diff))))
    return math.sqrt(d2)


# ----------------------------------------------------------------------
# boundary turning

def turning_angle_sum(truss: Truss, lengths: Optional[Dict[int, float]] = None) -> float:
    """Total turning of the boundary computed from lengths alone.

    Sum over boundary vertices of (pi - incident angle sum).  Equals 2*pi
    for flat disks; in general it is 2*pi minus the total curvature atom.
    """
    ell = length_map(truss, lengths)
    topo = topology_report(truss)
    if topo.genus != 0:
        raise InfeasibleError("turning angle sum requires a single boundary loop")
    boundary = set(topo.boundary_loops[0])
    acc = {v: 0.0 for v in boundary}
    for f in topo.faces:
        ang = _face_angles(truss, f, ell)
        for v in f:
            if v in acc:
                acc[v] += ang[v]
    return sum(math.pi - s for s in acc.values())


# ----------------------------------------------------------------------
# 3-star flatness polynomial

def three_star_poly(p, q) -> float:
    """Flatness residual of a 3-star from squared lengths.

    p = (p1, p2, p3) are squared spoke lengths; q = (q12, q23, q31) squared
    rim lengths.  The value is the cleared form of the angle identity
    cos^2 a + cos^2 b + cos^2 c - 2 cos a cos b cos c = 1 that holds exactly
    when the three sector angles at the hub sum to a full turn; it vanishes
    iff the star closes up flat.
    """
    p1, p2, p3 = (float(x) for x in p)
    q12, q23, q31 = (float(x) for x in q)
    if min(p1, p2, p3) <= 0 or min(q12, q23, q31) <= 0:
        raise InputError("squared lengths must be positive")
    A = p1 + p2 - q12
    B = p2 + p3 - q23
    C = p3 + p1 - q31
    return (2.0 * p3 * A * A + 2.0 * p1 * B * B + 2.0 * p2 * C * C
            - 2.0 * A * B * C - 8.0 * p1 * p2 * p3)
