"""Damage assessment, hole accounting, and resilience measures.

Removing links from a rigid truss first eats the compatibility surplus c
and only then produces mechanisms; damage is recoverable while the
survivor stays infinitesimally rigid, and the elongations of lost links
can then be rebuilt from the surviving ones.  Carving a hole whose
1-neighborhoods are clean girder rings costs exactly v1 + l1 - 3
conditions, which bounds how much damage a region of given boundary
length can hide and yields the per-area compatibility density of
periodically damaged lattices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Sequence

import numpy as np

from .errors import InfeasibleError, InputError
from .geometry import angle_at, point_in_polygon, signed_area
from .lattice import SQRT3, cell, gen_periodic, lattice_pos, rhombus
from .model import Truss, remove_edges, topology_report
from .rigidity import DEFAULT_TOL, analyze, solve_prescribed_elongations

ANGLE_TOL = 1e-9


# ----------------------------------------------------------------------
# link-removal damage

@dataclass(frozen=True)
class DamageReport:
    removed: tuple                      # edge ids taken out
    recoverable: bool                   # survivor still infinitesimally rigid
    c_before: int
    c_after: int
    nullity_after: int
    flexes: Optional[np.ndarray] = None         # (n_flex, 2v) rows when unrecoverable
    lam_rebuilt: Optional[Dict[int, float]] = None  # removed edge id -> elongation
    residual: float = 0.0


def assess_damage(truss: Truss, removed: Sequence[int],
                  lam: Optional[Dict[int, float]] = None,
                  tol: float = DEFAULT_TOL) -> DamageReport:
    """Remove links, classify the damage, optionally rebuild lost elongations.

    lam maps surviving edge ids to prescribed elongation rates (entries for
    removed ids are ignored, so the pre-damage table can be passed as is).
    When the damage is recoverable and lam is compatible for the survivor,
    the unique elongations of the removed links are reconstructed from the
    displacement the survivors force.
    """
    removed = tuple(dict.fromkeys(int(i) for i in removed))
    alive = {i for i, _ in truss.active_edges()}
    for i in removed:
        if i not in alive:
            raise InputError(f"edge {i} is not an active edge")

    before = analyze(truss, tol=tol)
    survivor = remove_edges(truss, removed)
    after = analyze(survivor, tol=tol)
    recoverable = after.is_inf_rigid
    if recoverable and after.c != before.c - len(removed):
        raise InfeasibleError(
            f"rank bookkeeping broke: c {before.c} -> {after.c} "
            f"after removing {len(removed)} links")

    lam_rebuilt = None
    residual = 0.0
    if lam is not None and recoverable:
        vec = []
        for i, _ in survivor.active_edges():
            if i not in lam:
                raise InputError(f"elongation missing for surviving edge {i}")
            vec.append(float(lam[i]))
        U, residual, compatible = solve_prescribed_elongations(
            survivor, np.asarray(vec), tol=tol)
        if not compatible:
            raise InfeasibleError(
                f"prescribed elongations are incompatible with the surviving "
                f"links (residual {residual:.3e})")
        lam_rebuilt = {}
        U2 = U.reshape(-1, 2)
        for i in removed:
            e = truss.edges[i]
            d = truss.edge_vector(i)            # V_b - V_a
            du = U2[e.b] - U2[e.a]
            lam_rebuilt[i] = float(d @ du)

    return DamageReport(
        removed=removed,
        recoverable=recoverable,
        c_before=before.c,
        c_after=after.c,
        nullity_after=after.nullity,
        flexes=None if recoverable else after.flex_basis,
        lam_rebuilt=lam_rebuilt,
        residual=float(residual),
    )


# ----------------------------------------------------------------------
# hole accounting

@dataclass(frozen=True)
class HoleLossReport:
    c_filled: int
    c_holed: int
    loss: int
    formula_loss: int
    collared: bool
    v1: int                  # grid points strictly inside the hole
    ell1: int                # links on the hole boundary curve
    boundary: tuple          # boundary vertex cycle, counterclockwise
    kappa: tuple             # turning angle at each boundary vertex (radians)
    holed: Truss = field(repr=False, default=None)


def faces_within(truss: Truss, lattice_points) -> tuple:
    """Faces of a lattice truss whose corners all lie in the given point set."""
    if truss.lattice is None:
        raise InputError("faces_within needs a lattice-coordinate truss")
    pts = {tuple(p) for p in lattice_points}
    out = [f for f in truss.alive_faces
           if all(truss.lattice[v] in pts for v in f)]
    return tuple(out)


def hole_loss(filled: Truss, hole_faces: Sequence, tol: float = DEFAULT_TOL) -> HoleLossReport:
    """Compatibility cost of carving the given faces out of a truss.

    The faces must form a region bounded by one simple closed curve of at
    least 3 links that stays clear of the outer boundary.  Both counts come
    from direct rank; the closed form v1 + l1 - 3 is exact whenever the
    hole is collared (its boundary curve turns gently enough for both
    1-neighborhoods to be clean rings) and a lower bound otherwise.
    """
    hole = {tuple(sorted(f)) for f in hole_faces}
    if not hole:
        raise InputError("no hole faces given")
    alive = set(filled.alive_faces)
    for f in hole:
        if f not in alive:
            raise InputError(f"face {f} is not an alive face of the truss")

    # sort each alive edge by how many of its faces fall in the hole
    edge_faces: dict = {}
    for f in alive:
        i, j, k = f
        for a, b in ((i, j), (j, k), (i, k)):
            edge_faces.setdefault(frozenset((a, b)), []).append(f)
    interior_edges = []
    boundary_edges = []
    for e, fs in edge_faces.items():
        inside = sum(1 for f in fs if f in hole)
        if inside == len(fs) and inside > 0:
            interior_edges.append(e)
        elif inside > 0:
            boundary_edges.append(e)

    cycle = _trace_cycle(boundary_edges)
    if signed_area([filled.vertices[v] for v in cycle]) < 0:
        cycle = [cycle[0]] + cycle[:0:-1]
    topo = topology_report(filled)
    outer = set()
    for loop in topo.boundary_loops:
        outer |= set(loop)
    hole_verts = set()
    for f in hole:
        hole_verts |= set(f)
    if hole_verts & outer:
        raise InputError("hole touches the outer boundary")

    v1_set = hole_verts - set(cycle)
    v1 = len(v1_set)
    ell1 = len(cycle)

    # drill: drop the faces, flag interior links as removed
    ids = set()
    for e in interior_edges:
        a, b = tuple(e)
        ids.add(filled.find_edge(a, b))
    new_edges = tuple(
        replace(edge, removed=True) if i in ids else edge
        for i, edge in enumerate(filled.edges))
    holed = Truss(
        vertices=filled.vertices,
        edges=new_edges,
        faces=tuple(sorted(alive - hole)),
        lattice=filled.lattice,
        allow_multi=filled.allow_multi,
        allow_coincident=filled.allow_coincident,
    )

    c_filled = analyze(filled, tol=tol).c
    c_holed = analyze(holed, tol=tol).c
    loss = c_filled - c_holed
    formula_loss = v1 + ell1 - 3

    kappa = _turning_angles(filled, hole, cycle)
    collared = _collar_ok(kappa)
    if collared and loss != formula_loss:
        raise InfeasibleError(
            f"collared hole loss {loss} disagrees with v1 + l1 - 3 = {formula_loss}")

    return HoleLossReport(
        c_filled=c_filled, c_holed=c_holed, loss=loss,
        formula_loss=formula_loss, collared=collared,
        v1=v1, ell1=ell1, boundary=tuple(cycle), kappa=kappa, holed=holed)


def _trace_cycle(boundary_edges):
    """Order boundary links into one simple closed curve (ccw)."""
    if len(boundary_edges) < 3:
        raise InputError("hole boundary must carry at least 3 links")
    nbr: dict = {}
    for e in boundary_edges:
        a, b = tuple(e)
        nbr.setdefault(a, []).append(b)
        nbr.setdefault(b, []).append(a)
    for v, ws in nbr.items():
        if len(ws) != 2:
            raise InputError(
                "hole boundary is not a single simple closed curve "
                f"(vertex {v} lies on {len(ws)} boundary links)")
    start = min(nbr)
    cycle = [start]
    prev, cur = None, start
    while True:
        a, b = nbr[cur]
        nxt = b if a == prev else a
        if nxt == start:
            break
        cycle.append(nxt)
        prev, cur = cur, nxt
        if len(cycle) > len(boundary_edges):
            raise InputError("hole boundary is not a single simple closed curve")
    if len(cycle) != len(boundary_edges):
        raise InputError("hole boundary splits into several curves")
    return cycle


def _turning_angles(truss: Truss, hole, cycle):
    """Turning angle at each boundary vertex, walking counterclockwise.

    The interior angle inside the hole at a boundary vertex is the sum of
    the hole-face angles there; turning is pi minus that, and it sums to a
    full turn around the curve.
    """
    inner = {v: 0.0 for v in cycle}
    for f in hole:
        i, j, k = f
        for v, (p, q) in ((i, (j, k)), (j, (i, k)), (k, (i, j))):
            if v in inner:
                inner[v] += angle_at(truss.vertices[v], truss.vertices[p],
                                     truss.vertices[q])
    return tuple(math.pi - inner[v] for v in cycle)


def _collar_ok(kappa) -> bool:
    third = math.pi / 3.0
    lo = [k < -third - ANGLE_TOL for k in kappa]
    lo_eq = [abs(k + third) <= ANGLE_TOL for k in kappa]
    hi = [k > third + ANGLE_TOL for k in kappa]
    hi_eq = [abs(k - third) <= ANGLE_TOL for k in kappa]
    n = len(kappa)
    if any(lo) or any(hi):
        return False
    for i in range(n):
        if all(lo_eq[(i + j) % n] for j in range(3)):
            return False
        if all(hi_eq[(i + j) % n] for j in range(3)):
            return False
    return True


# ----------------------------------------------------------------------
# isoperimetric bounds

def isoperimetric(ell: int) -> dict:
    """Closed-form bounds for a hole with boundary curve of length ell."""
    ell = int(ell)
    if ell < 3:
        raise InputError("boundary length must be at least 3")
    return {
        "max_interior": (ell * ell - 6 * ell + 12) // 12,
        "loss_lower": ell - 3,
        "loss_upper": (ell * ell + 6 * ell - 24) // 12,
    }


def max_interior_by_search(max_len: int) -> Dict[int, int]:
    """Brute-force maximum enclosed grid points per curve length.

    Enumerates self-avoiding closed walks on the triangular lattice (first
    step fixed along +E1; rotating any curve makes that lossless) up to
    max_len and counts strictly enclosed lattice points.
    """
    if max_len < 3:
        raise InputError("need max_len >= 3")
    if max_len > 10:
        raise InputError("search is limited to curves of length <= 10")
    from .lattice import OFFSETS
    best = {l: 0 for l in range(3, max_len + 1)}

    def hexdist(p):
        a, b = p
        return max(abs(a), abs(b), abs(a + b))

    def enclosed(walk):
        poly = [lattice_pos(a, b) for a, b in walk]
        on_curve = set(walk)
        amin = min(a for a, _ in walk)
        amax = max(a for a, _ in walk)
        bmin = min(b for _, b in walk)
        bmax = max(b for _, b in walk)
        cnt = 0
        for a in range(amin, amax + 1):
            for b in range(bmin, bmax + 1):
                if (a, b) in on_curve:
                    continue
                if point_in_polygon(lattice_pos(a, b), poly):
                    cnt += 1
        return cnt

    start = (0, 0)
    walk = [start, (1, 0)]
    seen = {start, (1, 0)}

    def dfs():
        cur = walk[-1]
        steps = len(walk) - 1
        for da, db in OFFSETS:
            nxt = (cur[0] + da, cur[1] + db)
            if nxt == start and steps + 1 >= 3:
                n = steps + 1
                if n <= max_len:
                    got = enclosed(walk)
                    if got > best[n]:
                        best[n] = got
                continue
            if nxt in seen:
                continue
            if steps + 1 + hexdist(nxt) > max_len:
                continue
            walk.append(nxt)
            seen.add(nxt)
            dfs()
            walk.pop()
            seen.remove(nxt)

    dfs()
    return best


# ----------------------------------------------------------------------
# asymptotic compatibility

@dataclass(frozen=True)
class PeriodicCellSpec:
    """k x k periodic cell with h holes, each retiring m grid points.

    m counts every grid point of the closed hole footprint: the strictly
    inner ones plus the boundary-curve ones, so the per-hole compatibility
    cost is m - 3.
    """
    k: int
    h: int = 0
    m: int = 0
    holes: tuple = ()    # lattice hole descriptors for empirical builds

    def __post_init__(self):
        if self.k < 1:
            raise InputError("cell size must be >= 1")
        if self.h < 0 or self.m < 0 or (self.h > 0) != (self.m > 0):
            raise InputError("hole counts (h, m) must be both zero or both positive")
        if self.k * self.k <= self.h * self.m:
            raise InputError("holes retire every interior vertex of the cell")
        object.__setattr__(self, "holes", tuple(self.holes))


@dataclass(frozen=True)
class ACResult:
    formula: float
    empirical: Dict[int, float]
    gap: Optional[float]
    spec: PeriodicCellSpec


def asymptotic_compatibility(spec: PeriodicCellSpec,
                             empirical_n: Optional[Sequence[int]] = None,
                             tol: float = DEFAULT_TOL) -> ACResult:
    """Compatibility conditions per unit area of a periodically damaged lattice.

    The closed form (k^2 - h(m-3)) / ((sqrt3/2) k^2) is the n -> infinity
    limit.  With empirical_n, the n x n tilings are built outright and
    measured by direct rank over the area nk(nk+1) sqrt3/2.
    """
    k = spec.k
    formula = (k * k - spec.h * (spec.m - 3)) / ((SQRT3 / 2.0) * k * k)
    empirical: Dict[int, float] = {}
    gap = None
    if empirical_n:
        if spec.h > 0 and not spec.holes:
            raise InputError("empirical AC needs concrete hole descriptors")
        if spec.holes and spec.h and len(spec.holes) != spec.h:
            raise InputError(f"spec says {spec.h} holes, got {len(spec.holes)}")
        base = cell(k, holes=spec.holes)
        if spec.h:
            ti = topology_report(base)
            if ti.v_interior != k * k - spec.h * spec.m:
                raise InputError(
                    f"hole descriptors retire {k * k - ti.v_interior} grid points, "
                    f"but h*m = {spec.h * spec.m}")
        for n in sorted(set(int(n) for n in empirical_n)):
            if n < 1:
                raise InputError("tile counts must be >= 1")
            omega = gen_periodic(base, n, period=k)
            c = analyze(omega, tol=tol).c
            area = n * k * (n * k + 1) * SQRT3 / 2.0
            empirical[n] = c / area
        last = empirical[max(empirical)]
        gap = abs(last - formula) / abs(formula)
    return ACResult(formula=formula, empirical=empirical, gap=gap, spec=spec)


# ----------------------------------------------------------------------
# maximal thinning

@dataclass(frozen=True)
class ThinningReport:
    truss: Truss
    removed_edge_ids: tuple
    removable_count: int
    c: int
    is_inf_rigid: bool


def ne_thinning(n: int, tol: float = DEFAULT_TOL) -> ThinningReport:
    """Remove the upper-right spoke of every hexagon of rhombus(n).

    Takes out one link per interior vertex (n^2 links, the whole
    compatibility surplus), leaving the truss infinitesimally rigid with
    c = 0; one more removal anywhere must create a mechanism.
    """
    if n < 1:
        raise InputError("rhombus size must be >= 1")
    base = rhombus(n)
    ids = []
    index = {p: i for i, p in enumerate(base.lattice)}
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            ids.append(base.find_edge(index[(a, b)], index[(a, b + 1)]))
    thinned = remove_edges(base, ids)
    rep = analyze(thinned, tol=tol)
    if not rep.is_inf_rigid or rep.c != 0:
        raise InfeasibleError(
            f"thinned rhombus({n}) should be exactly rigid, got "
            f"c={rep.c}, nullity={rep.nullity}")
    return ThinningReport(
        truss=thinned, removed_edge_ids=tuple(ids),
        removable_count=n * n, c=rep.c, is_inf_rigid=rep.is_inf_rigid)
