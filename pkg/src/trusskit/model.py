"""Planar bar-and-node structures.

A `Truss` is a straight-line embedded graph in the plane: vertices carry
coordinates, edges connect vertex indices and may carry an explicit rest
length.  Structures of interest are (mostly) triangulated: the bounded
faces are triangles, and a face list is either supplied or inferred from
the embedding.

Conventions used everywhere downstream:

* edges are soft-removable: `removed=True` keeps the edge (and its id) in
  the truss but excludes it from analysis, topology and rendering counts;
* a face is alive only while all three of its edges are alive;
* interior vertices are those whose alive faces close up into a full ring;
* the boundary of a triangulated truss is the set of edges with exactly
  one alive face, organized into disjoint simple loops (outer loop plus
  one loop per hole).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DisconnectedWarning, InfeasibleError, InputError
from .geometry import Point2, segments_cross

_COINCIDENT_SQ = 1e-24


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    length: Optional[float] = None
    removed: bool = False

    def pair(self) -> frozenset:
        return frozenset((self.a, self.b))


@dataclass(frozen=True)
class Truss:
    vertices: tuple
    edges: tuple
    faces: Optional[tuple] = None
    lattice: Optional[tuple] = None   # exact integer lattice coordinates, if any
    allow_multi: bool = False         # permit doubled (a,b) pairs (pinned assemblies)
    allow_coincident: bool = False    # permit distinct vertices at equal coordinates

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(Point2(float(x), float(y)) for x, y in self.vertices))
        object.__setattr__(self, "edges", tuple(
            e if isinstance(e, Edge) else Edge(*e) for e in self.edges))
        if self.faces is not None:
            object.__setattr__(self, "faces", tuple(
                tuple(sorted(f)) for f in self.faces))
        if self.lattice is not None:
            object.__setattr__(self, "lattice", tuple(
                (int(a), int(b)) for a, b in self.lattice))
            if len(self.lattice) != len(self.vertices):
                raise InputError("lattice coordinate list does not match vertex count")
        v = len(self.vertices)
        seen = {}
        for i, e in enumerate(self.edges):
            if not (0 <= e.a < v and 0 <= e.b < v):
                raise InputError(f"edge {i} references vertex out of range: ({e.a},{e.b})")
            if e.a == e.b:
                raise InputError(f"edge {i} is a loop at vertex {e.a}")
            key = e.pair()
            if key in seen and not self.allow_multi:
                raise InputError(
                    f"edges {seen[key]} and {i} duplicate the pair ({e.a},{e.b}); "
                    "doubled edges require allow_multi")
            seen.setdefault(key, i)
        if not self.allow_coincident:
            self._check_coincident()
        if self.faces is not None:
            for f in self.faces:
                if len(set(f)) != 3:
                    raise InputError(f"face {f} is not a triangle")
                for i in f:
                    if not 0 <= i < v:
                        raise InputError(f"face {f} references vertex out of range")

    def _check_coincident(self):
        # O(v log v) via sorting; coincidence is exact-coordinate collision
        order = sorted(range(len(self.vertices)), key=lambda i: self.vertices[i])
        for i, j in zip(order, order[1:]):
            dx = self.vertices[i][0] - self.vertices[j][0]
            dy = self.vertices[i][1] - self.vertices[j][1]
            if dx * dx + dy * dy < _COINCIDENT_SQ:
                raise InputError(
                    f"vertices {i} and {j} coincide; pinned assemblies must set allow_coincident")

    # ------------------------------------------------------------------
    # basic accessors

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def coords(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float)

    def active_edges(self):
        """(edge id, Edge) for every non-removed edge, ids ascending."""
        return [(i, e) for i, e in enumerate(self.edges) if not e.removed]

    def edge_vector(self, i: int) -> np.ndarray:
        e = self.edges[i]
        p, q = self.vertices[e.a], self.vertices[e.b]
        return np.array([q[0] - p[0], q[1] - p[1]])

    def edge_length(self, i: int) -> float:
        e = self.edges[i]
        if e.length is not None:
            return e.length
        p, q = self.vertices[e.a], self.vertices[e.b]
        return math.hypot(q[0] - p[0], q[1] - p[1])

    def measured_length(self, i: int) -> float:
        e = self.edges[i]
        p, q = self.vertices[e.a], self.vertices[e.b]
        return math.hypot(q[0] - p[0], q[1] - p[1])

    @cached_property
    def edge_ids_by_pair(self) -> dict:
        d: dict = {}
        for i, e in enumerate(self.edges):
            d.setdefault(e.pair(), []).append(i)
        return d

    def find_edge(self, a: int, b: int) -> int:
        """Id of the (unique alive) edge joining a and b."""
        ids = [i for i in self.edge_ids_by_pair.get(frozenset((a, b)), [])
               if not self.edges[i].removed]
        if not ids:
            raise InputError(f"no alive edge joins vertices {a} and {b}")
        if len(ids) > 1:
            raise InputError(f"edge ({a},{b}) is doubled; lookup is ambiguous")
        return ids[0]

    def is_connected(self) -> bool:
        v = self.n_vertices
        if v == 0:
            return True
        adj = [[] for _ in range(v)]
        for _, e in self.active_edges():
            adj[e.a].append(e.b)
            adj[e.b].append(e.a)
        seen = [False] * v
        stack = [0]
        seen[0] = True
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        return all(seen)

    # ------------------------------------------------------------------
    # derived structure

    @cached_property
    def alive_faces(self) -> tuple:
        """Faces all of whose edges are alive (inferred if no face list)."""
        faces = self.faces if self.faces is not None else infer_faces(self)
        out = []
        for f in faces:
            i, j, k = f
            try:
                self.find_edge(i, j)
                self.find_edge(j, k)
                self.find_edge(i, k)
            except InputError:
                continue
            out.append(tuple(sorted(f)))
        return tuple(out)


def remove_edges(truss: Truss, edge_ids: Iterable[int], restore: bool = False) -> Truss:
    """Soft-remove (or restore) edges by id; returns a new truss.

    Removal never deletes ids, so a later restore round-trips exactly.
    A removal that disconnects the alive link graph emits a
    DisconnectedWarning rather than failing.
    """
    ids = list(edge_ids)
    for i in ids:
        if not 0 <= i < len(truss.edges):
            raise InputError(f"edge id {i} out of range")
    idset = set(ids)
    new_edges = tuple(
        replace(e, removed=not restore) if i in idset else e
        for i, e in enumerate(truss.edges))
    out = replace(truss, edges=new_edges)
    if not restore and not out.is_connected():
        warnings.warn("edge removal disconnected the truss", DisconnectedWarning)
    return out


def truss_from_faces(points: Sequence, faces: Sequence, lattice=None) -> Truss:
    """Build a truss from coordinates and a triangle list; edges are derived."""
    pairs = []
    seen = set()
    for f in faces:
        i, j, k = f
        for a, b in ((i, j), (j, k), (i, k)):
            key = frozenset((a, b))
            if key not in seen:
                seen.add(key)
                pairs.append((min(a, b), max(a, b)))
    pairs.sort()
    return Truss(
        vertices=tuple(points),
        edges=tuple(Edge(a, b) for a, b in pairs),
        faces=tuple(tuple(sorted(f)) for f in faces),
        lattice=lattice,
    )


# ----------------------------------------------------------------------
# face inference

def infer_faces(truss: Truss) -> tuple:
    """Infer triangular faces of a straight-line embedded truss.

    Walks the planar subdivision induced by the alive edges and keeps the
    positively oriented triangular cells.  Refuses crossing edges, since
    the walk is meaningless for a non-planar embedding.  Triangular holes
    are geometrically indistinguishable from faces and will be reported
    as faces; supply an explicit face list to express such holes.
    """
    act = truss.active_edges()
    pts = truss.vertices
    _check_no_crossings(truss, act)

    # directed half-edge successor by clockwise angular order around each vertex
    nbrs: dict = {}
    for _, e in act:
        nbrs.setdefault(e.a, []).append(e.b)
        nbrs.setdefault(e.b, []).append(e.a)
    ang = {}
    for u, vs in nbrs.items():
        vs.sort(key=lambda w: math.atan2(pts[w][1] - pts[u][1], pts[w][0] - pts[u][0]))
        ang[u] = {w: i for i, w in enumerate(vs)}

    visited = set()
    faces = []
    for u0, vs in nbrs.items():
        for w0 in vs:
            if (u0, w0) in visited:
                continue
            cycle = []
            u, w = u0, w0
            while (u, w) not in visited:
                visited.add((u, w))
                cycle.append(u)
                # arrive at w from u; leave along the next neighbor clockwise
                # from the reversed direction
                order = nbrs[w]
                i = ang[w][u]
                nxt = order[(i - 1) % len(order)]
                u, w = w, nxt
            if len(cycle) == 3:
                a, b, c = cycle
                area = ((pts[b][0] - pts[a][0]) * (pts[c][1] - pts[a][1])
                        - (pts[b][1] - pts[a][1]) * (pts[c][0] - pts[a][0]))
                if area > 0:
                    faces.append(tuple(sorted(cycle)))
    faces = sorted(set(faces))
    return tuple(faces)


def _check_no_crossings(truss: Truss, act) -> None:
    pts = truss.vertices
    boxes = []
    for i, e in act:
        p, q = pts[e.a], pts[e.b]
        boxes.append((min(p[0], q[0]), min(p[1], q[1]), max(p[0], q[0]), max(p[1], q[1])))
    for x in range(len(act)):
        i, e = act[x]
        for y in range(x + 1, len(act)):
            j, f = act[y]
            if e.pair() & f.pair():
                continue
            bx, by = boxes[x], boxes[y]
            if bx[2] < by[0] or by[2] < bx[0] or bx[3] < by[1] or by[3] < bx[1]:
                continue
            if segments_cross(pts[e.a], pts[e.b], pts[f.a], pts[f.b]):
                raise InputError(
                    f"edges {i} and {j} cross; face inference requires a planar embedding")


# ----------------------------------------------------------------------
# topology report

@dataclass(frozen=True)
class TopologyReport:
    v: int
    e: int
    f: int
    v_interior: int
    v_boundary: int
    e_interior: int
    e_boundary: int
    chi: int
    genus: int                      # number of holes
    boundary_loops: tuple           # tuple of vertex cycles, outer loop first
    interior_vertices: tuple
    faces: tuple


def topology_report(truss: Truss) -> TopologyReport:
    """Combinatorial census of a triangulated truss (alive part only).

    Checks manifoldness along the way: every alive edge lies in one or two
    alive faces, every vertex link is a single path or cycle, and boundary
    edges organize into disjoint simple loops.
    """
    faces = truss.alive_faces
    act = truss.active_edges()
    if not act:
        raise InfeasibleError("truss has no alive edges")
    if not truss.is_connected():
        raise InfeasibleError("alive link graph is disconnected")

    edge_faces: dict = {i: [] for i, _ in act}
    pair_to_id = {}
    for i, e in act:
        pair_to_id[e.pair()] = i
    for f in faces:
        i, j, k = f
        for a, b in ((i, j), (j, k), (i, k)):
            eid = pair_to_id.get(frozenset((a, b)))
            if eid is None:
                raise InfeasibleError(f"face {f} references missing edge ({a},{b})")
            edge_faces[eid].append(f)

    boundary_edge_ids = []
    interior_edge_ids = []
    for i, flist in edge_faces.items():
        if len(flist) == 0:
            raise InfeasibleError(
                f"edge {i} lies in no face; structure is not triangulated")
        if len(flist) > 2:
            raise InfeasibleError(f"edge {i} lies in {len(flist)} faces (non-manifold)")
        (boundary_edge_ids if len(flist) == 1 else interior_edge_ids).append(i)

    # vertex links: edges around v chained by shared faces
    incident_edges: dict = {}
    for i, e in act:
        incident_edges.setdefault(e.a, []).append(i)
        incident_edges.setdefault(e.b, []).append(i)
    used_vertices = set(incident_edges)
    if len(used_vertices) != truss.n_vertices:
        raise InfeasibleError("isolated vertices present; census undefined")

    interior_vertices = []
    boundary_vertices = []
    for v in range(truss.n_vertices):
        eids = incident_edges[v]
        # count face-links per incident edge at v
        links = {i: 0 for i in eids}
        for i in eids:
            for f in edge_faces[i]:
                if v in f:
                    links[i] += 1
        ends = [i for i in eids if links[i] == 1]
        if any(links[i] == 0 for i in eids) or len(ends) not in (0, 2):
            raise InfeasibleError(f"vertex {v} has a pinched or non-manifold link")
        # single component check by walking faces around v
        star_faces = [f for f in faces if v in f]
        if not star_faces:
            raise InfeasibleError(f"vertex {v} lies in no face")
        if not _star_connected(v, star_faces):
            raise InfeasibleError(f"vertex {v} has a disconnected link (pinched)")
        if ends:
            boundary_vertices.append(v)
        else:
            interior_vertices.append(v)

    loops = _boundary_loops(truss, boundary_edge_ids)
    v = truss.n_vertices
    e = len(act)
    f = len(faces)
    chi = f - e + v
    genus = len(loops) - 1
    if chi != 1 - genus:
        raise InfeasibleError(
            f"inconsistent topology: chi={chi} but {len(loops)} boundary loops")
    # outer loop = the one enclosing the largest area
    from .geometry import signed_area
    loops = sorted(loops, key=lambda L: -abs(signed_area([truss.vertices[i] for i in L])))
    return TopologyReport(
        v=v, e=e, f=f,
        v_interior=len(interior_vertices),
        v_boundary=len(boundary_vertices),
        e_interior=len(interior_edge_ids),
        e_boundary=len(boundary_edge_ids),
        chi=chi, genus=genus,
        boundary_loops=tuple(tuple(L) for L in loops),
        interior_vertices=tuple(interior_vertices),
        faces=faces,
    )


def _star_connected(v: int, star_faces) -> bool:
    # faces around v, glued along shared edges through v
    n = len(star_faces)
    if n == 1:
        return True
    adj = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            shared = set(star_faces[i]) & set(star_faces[j])
            if v in shared and len(shared) == 2:
                adj[i].append(j)
                adj[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _boundary_loops(truss: Truss, boundary_edge_ids) -> list:
    nxt: dict = {}
    for i in boundary_edge_ids:
        e = truss.edges[i]
        nxt.setdefault(e.a, []).append(e.b)
        nxt.setdefault(e.b, []).append(e.a)
    for v, ws in nxt.items():
        if len(ws) != 2:
            raise InfeasibleError(
                f"boundary vertex {v} lies on {len(ws)} boundary edges (non-simple boundary)")
    loops = []
    unvisited = set(nxt)
    while unvisited:
        start = min(unvisited)
        loop = [start]
        unvisited.discard(start)
        prev, cur = None, start
        while True:
            a, b = nxt[cur]
            nxt_v = b if a == prev else a
            if nxt_v == start:
                break
            loop.append(nxt_v)
            unvisited.discard(nxt_v)
            prev, cur = cur, nxt_v
        loops.append(loop)
    return loops


# ----------------------------------------------------------------------
# stars

@dataclass(frozen=True)
class Star:
    center: int
    ring: tuple          # neighbor vertices in counterclockwise order
    radial_edges: tuple  # edge ids, radial_edges[i] joins center to ring[i]
    rim_edges: tuple     # edge ids, rim_edges[i] joins ring[i] to ring[i+1]


def star_of(truss: Truss, v: int) -> Star:
    """Full wheel around an interior vertex.

    Neighbors are returned in counterclockwise geometric order; the wheel
    must close up (every consecutive neighbor pair spans an alive face with
    the center and an alive rim edge), otherwise the star is open and an
    error is raised.
    """
    if not 0 <= v < truss.n_vertices:
        raise InputError(f"vertex {v} out of range")
    pts = truss.vertices
    nbrs = set()
    radial = {}
    for i, e in truss.active_edges():
        if e.a == v:
            nbrs.add(e.b)
            radial[e.b] = i
        elif e.b == v:
            nbrs.add(e.a)
            radial[e.a] = i
    if len(nbrs) < 3:
        raise InfeasibleError(f"vertex {v} has fewer than 3 neighbors; not interior")
    ring = sorted(nbrs, key=lambda w: math.atan2(pts[w][1] - pts[v][1], pts[w][0] - pts[v][0]))
    faceset = set(truss.alive_faces)
    rim = []
    for i, w in enumerate(ring):
        u = ring[(i + 1) % len(ring)]
        if tuple(sorted((v, w, u))) not in faceset:
            raise InfeasibleError(
                f"vertex {v} is not interior: no face spans neighbors {w} and {u}")
        rim.append(truss.find_edge(w, u))
    return Star(
        center=v,
        ring=tuple(ring),
        radial_edges=tuple(radial[w] for w in ring),
        rim_edges=tuple(rim),
    )
