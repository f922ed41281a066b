"""Generators for unit triangular-lattice patches.

Lattice points are integer pairs (a, b) standing for a*E1 + b*E2 with
E1 = (1, 0) and E2 = (1/2, sqrt(3)/2).  All generation, deduplication and
periodic merging happens on the integer pairs, so overlapping tiles merge
exactly; real coordinates are derived only when the final truss is built.

A "hexagon" here is the closed star of a lattice point: the point itself,
its six neighbors, six spokes, six rim links and six triangles.  Patches
are unions of hexagons:

* hexstar          -- single hexagon centered at the origin
* rhombus(n)       -- hexagons centered on (a, b), a, b in 1..n
* cell(k, holes)   -- rhombus(k) with holes drilled out
* gen_periodic     -- n x n lattice-translated copies of a cell, merged
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InputError
from .geometry import Point2
from .model import Edge, Truss

SQRT3 = math.sqrt(3.0)

# neighbor offsets in counterclockwise order starting from +x
OFFSETS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


def lattice_pos(a: int, b: int) -> Point2:
    return Point2(a + 0.5 * b, b * (SQRT3 / 2.0))


# ----------------------------------------------------------------------
# element-set builder

class _Builder:
    def __init__(self):
        self.verts: set = set()
        self.edges: set = set()   # frozensets of lattice pairs
        self.faces: set = set()   # frozensets of three lattice pairs

    def add_hexagon(self, c):
        ca, cb = c
        ring = [(ca + da, cb + db) for da, db in OFFSETS]
        self.verts.add((ca, cb))
        self.verts.update(ring)
        for i, w in enumerate(ring):
            u = ring[(i + 1) % 6]
            self.edges.add(frozenset(((ca, cb), w)))
            self.edges.add(frozenset((w, u)))
            self.faces.add(frozenset(((ca, cb), w, u)))

    def finalize(self, removed_edges=()) -> Truss:
        order = sorted(self.verts)
        ids = {p: i for i, p in enumerate(order)}
        pairs = sorted(
            tuple(sorted((ids[p], ids[q]))) for p, q in (tuple(e) for e in self.edges))
        removed_pairs = {
            tuple(sorted((ids[p], ids[q]))) for p, q in (tuple(e) for e in removed_edges)}
        edges = tuple(
            Edge(a, b, removed=(a, b) in removed_pairs) for a, b in pairs)
        faces = tuple(sorted(tuple(sorted(ids[p] for p in f)) for f in self.faces))
        return Truss(
            vertices=tuple(lattice_pos(a, b) for a, b in order),
            edges=edges,
            faces=faces,
            lattice=tuple(order),
        )


# ----------------------------------------------------------------------
# hole descriptors

@dataclass(frozen=True)
class EdgeHole:
    """Hole given by lattice links to delete (one link -> unit rhombus hole)."""
    links: tuple  # of ((a,b),(c,d)) lattice pairs

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(
            (tuple(p), tuple(q)) for p, q in self.links))


@dataclass(frozen=True)
class CenterHole:
    """Hole given by hexagon centers whose closed stars are carved out."""
    centers: tuple  # of (a,b) lattice pairs

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple(tuple(c) for c in self.centers))


@dataclass(frozen=True)
class BlockHole:
    """Hole covering an sa x sb rhombus footprint of triangles.

    corner is the low lattice corner; the footprint spans the grid points
    corner + [0..sa] x [0..sb].  Strictly inner grid points disappear,
    links interior to the footprint disappear, and the outline survives as
    the hole boundary curve of length 2(sa + sb).  shape (1, 1) carves the
    unit-rhombus hole (one diagonal link).
    """
    corner: tuple
    shape: tuple = (1, 1)

    def __post_init__(self):
        object.__setattr__(self, "corner", tuple(self.corner))
        object.__setattr__(self, "shape", tuple(self.shape))


HoleSpec = (EdgeHole, CenterHole, BlockHole)


def _drill(builder: _Builder, holes, interior_ok) -> None:
    """Carve holes out of the element sets.

    Each hole must sit strictly inside the patch (its whole footprint,
    boundary included, on interior vertices) and holes must not touch each
    other, so the resulting boundary curves stay disjoint and simple.
    """
    touched_per_hole = []
    for hole in holes:
        kill_edges: set = set()
        kill_faces: set = set()
        kill_verts: set = set()
        if isinstance(hole, EdgeHole):
            for p, q in hole.links:
                link = frozenset((p, q))
                if link not in builder.edges:
                    raise InputError(f"hole link {p}-{q} is not in the patch")
                kill_edges.add(link)
            for f in builder.faces:
                if any(e <= f for e in kill_edges):
                    kill_faces.add(f)
        elif isinstance(hole, CenterHole):
            for c in hole.centers:
                if c not in builder.verts:
                    raise InputError(f"hole center {c} is not in the patch")
            centers = set(hole.centers)
            kill_verts = set(centers)
            for f in builder.faces:
                if f & centers:
                    kill_faces.add(f)
            for e in builder.edges:
                if e & centers:
                    kill_edges.add(e)
                else:
                    adj = [f for f in builder.faces if e <= f]
                    if adj and all(f in kill_faces for f in adj):
                        kill_edges.add(e)
        elif isinstance(hole, BlockHole):
            a0, b0 = hole.corner
            sa, sb = hole.shape
            if sa < 1 or sb < 1:
                raise InputError("block hole shape must be at least 1 x 1")
            pts = {(a0 + i, b0 + j) for i in range(sa + 1) for j in range(sb + 1)}
            for p in sorted(pts):
                if p not in builder.verts:
                    raise InputError(f"block hole point {p} is not in the patch")
            kill_verts = {(a0 + i, b0 + j)
                          for i in range(1, sa) for j in range(1, sb)}
            for f in builder.faces:
                if all(p in pts for p in f):
                    kill_faces.add(f)
            for e in builder.edges:
                p, q = tuple(e)
                if p not in pts or q not in pts:
                    continue
                # outline links run along the four footprint sides; anything
                # else inside the footprint (including diagonals) is internal
                on_outline = (
                    (p[1] == q[1] == b0) or (p[1] == q[1] == b0 + sb)
                    or (p[0] == q[0] == a0) or (p[0] == q[0] == a0 + sa))
                if not on_outline:
                    kill_edges.add(e)
        else:
            raise InputError(f"unknown hole descriptor {hole!r}")

        touched = set(kill_verts)
        for e in kill_edges:
            touched |= set(e)
        for f in kill_faces:
            touched |= set(f)
        for p in touched:
            if not interior_ok(p):
                raise InputError(
                    f"hole touches non-interior vertex {p}; holes must sit strictly inside")
        for prev in touched_per_hole:
            if prev & touched:
                raise InputError("holes overlap or touch; their boundaries must be disjoint")
        touched_per_hole.append(touched)

        builder.edges -= kill_edges
        builder.faces -= kill_faces
        builder.verts -= kill_verts


# ----------------------------------------------------------------------
# patch generators

def hexstar() -> Truss:
    b = _Builder()
    b.add_hexagon((0, 0))
    return b.finalize()


def rhombus(n: int) -> Truss:
    if n < 1:
        raise InputError("rhombus size must be >= 1")
    b = _Builder()
    for a in range(1, n + 1):
        for c in range(1, n + 1):
            b.add_hexagon((a, c))
    return b.finalize()


def cell(k: int, holes: Sequence = ()) -> Truss:
    """k x k rhombus with holes drilled out (structurally, not soft-removed)."""
    if k < 1:
        raise InputError("cell size must be >= 1")
    b = _Builder()
    for a in range(1, k + 1):
        for c in range(1, k + 1):
            b.add_hexagon((a, c))
    interior = lambda p: 1 <= p[0] <= k and 1 <= p[1] <= k
    _drill(b, holes, interior)
    return b.finalize()


def gen_periodic(cell_truss: Truss, n: int, period: Optional[int] = None) -> Truss:
    """Merge an n x n grid of lattice-translated copies of a cell.

    Copies are shifted by multiples of period * E1 and period * E2; shared
    seam vertices and links merge exactly through the integer coordinates.
    """
    if cell_truss.lattice is None:
        raise InputError("periodic tiling requires a lattice-coordinate cell")
    if n < 1:
        raise InputError("tile count must be >= 1")
    if period is None:
        # a k x k rhombus spans lattice coordinates 0..k+1
        period = max(max(a for a, _ in cell_truss.lattice),
                     max(b for _, b in cell_truss.lattice)) - 1
    if period < 1:
        raise InputError("cannot infer a positive period from the cell")

    b = _Builder()
    removed: set = set()
    lat = cell_truss.lattice
    for i in range(n):
        for j in range(n):
            da, db = i * period, j * period
            shift = {v: (lat[v][0] + da, lat[v][1] + db) for v in range(cell_truss.n_vertices)}
            b.verts.update(shift.values())
            for _, e in ((idx, e) for idx, e in enumerate(cell_truss.edges)):
                key = frozenset((shift[e.a], shift[e.b]))
                if e.removed:
                    removed.add(key)
                b.edges.add(key)
            if cell_truss.faces:
                for f in cell_truss.faces:
                    b.faces.add(frozenset(shift[v] for v in f))
    return b.finalize(removed_edges=(tuple(e) for e in removed))


# ----------------------------------------------------------------------
# spec-style front end

@dataclass(frozen=True)
class PatchSpec:
    shape: str                      # hexstar | rhombus | cell | periodic
    n: int = 0                      # rhombus size / tile count
    k: int = 0                      # cell size
    holes: tuple = ()
    cell: Optional[Truss] = None


def gen_patch(spec: PatchSpec) -> Truss:
    if spec.shape == "hexstar":
        return hexstar()
    if spec.shape == "rhombus":
        return rhombus(spec.n)
    if spec.shape == "cell":
        return cell(spec.k, spec.holes)
    if spec.shape == "periodic":
        base = spec.cell if spec.cell is not None else cell(spec.k, spec.holes)
        return gen_periodic(base, spec.n, period=spec.k if spec.k else None)
    raise InputError(f"unknown patch shape {spec.shape!r}")


def holes_from_spec(text: str) -> tuple:
    """Parse a compact hole list: items joined by ';'.

    edge:A,B-C,D[+...]   links to delete (unit rhombus per link)
    center:A,B[+...]     closed hexagon stars to carve
    block:A,B[,SAxSB]    rhombus footprint with corner (A,B), default 1x1
    """
    def point(tok, item):
        parts = tok.split(",")
        if len(parts) != 2:
            raise InputError(f"hole {item!r}: expected 'a,b', got {tok!r}")
        try:
            return (int(parts[0]), int(parts[1]))
        except ValueError:
            raise InputError(f"hole {item!r}: non-integer coordinate in {tok!r}") from None

    holes = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        kind, sep, rest = item.partition(":")
        if not sep:
            raise InputError(f"hole {item!r}: expected 'kind:...'")
        if kind == "edge":
            links = []
            for link in rest.split("+"):
                p, sep2, q = link.partition("-")
                if not sep2:
                    raise InputError(f"hole {item!r}: link needs 'a,b-c,d'")
                links.append((point(p, item), point(q, item)))
            holes.append(EdgeHole(tuple(links)))
        elif kind == "center":
            holes.append(CenterHole(tuple(point(c, item) for c in rest.split("+"))))
        elif kind == "block":
            parts = rest.split(",")
            if len(parts) == 2:
                corner, shape = point(rest, item), (1, 1)
            elif len(parts) == 3:
                corner = point(",".join(parts[:2]), item)
                sa, sep3, sb = parts[2].partition("x")
                if not sep3:
                    raise InputError(f"hole {item!r}: shape needs 'SAxSB'")
                try:
                    shape = (int(sa), int(sb))
                except ValueError:
                    raise InputError(f"hole {item!r}: non-integer shape") from None
            else:
                raise InputError(f"hole {item!r}: expected 'block:a,b[,SAxSB]'")
            holes.append(BlockHole(corner, shape))
        else:
            raise InputError(f"hole {item!r}: unknown kind {kind!r}")
    if not holes:
        raise InputError("empty hole spec")
    return tuple(holes)


def hole_grid_points(hole) -> int:
    """Grid points of the closed hole footprint (the m of the loss formula)."""
    if isinstance(hole, BlockHole):
        return (hole.shape[0] + 1) * (hole.shape[1] + 1)
    if isinstance(hole, CenterHole) and len(hole.centers) == 1:
        return 7
    if isinstance(hole, EdgeHole) and len(hole.links) == 1:
        return 4
    raise InputError(
        "footprint size is only implied for block holes, single-center holes "
        "and single-link holes; pass m explicitly")
