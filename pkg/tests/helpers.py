"""Shared test generators: random triangulated disks, drilled holes,
rigid-motion fits, balanced load vectors, random BTP trees.

Everything is deterministically seeded; "random" means reproducible.
"""

import math

import numpy as np

from trusskit import Segment, Bigon, Triangle, Prism, Pin, PrismLegs
from trusskit.btp import prism_determinant
from trusskit.model import Truss, truss_from_faces
from trusskit.rigidity import gauge_matrix


# ----------------------------------------------------------------------
# random triangulated disks

def random_disk(seed, rings=2, jitter=0.2, min_angle_deg=15.0):
    """Random triangulated disk: a hexagonal lattice ball, vertices jittered.

    The face list is combinatorial (fixed by the ball), so jittering cannot
    create slivers along the hull the way a Delaunay rebuild would; a
    quality floor on the angles is still enforced and bad jitters resampled.
    """
    idx = {}
    base = []
    for a in range(-rings, rings + 1):
        for b in range(-rings, rings + 1):
            if max(abs(a), abs(b), abs(a + b)) <= rings:
                idx[(a, b)] = len(base)
                base.append((a + 0.5 * b, b * math.sqrt(3.0) / 2.0))
    faces = []
    for (a, b), i in idx.items():
        if (a + 1, b) in idx and (a, b + 1) in idx:
            faces.append(tuple(sorted((i, idx[(a + 1, b)], idx[(a, b + 1)]))))
        if (a + 1, b) in idx and (a, b + 1) in idx and (a + 1, b + 1) in idx:
            faces.append(tuple(sorted((idx[(a + 1, b)], idx[(a, b + 1)],
                                       idx[(a + 1, b + 1)]))))
    base = np.asarray(base)
    for attempt in range(100):
        rng = np.random.default_rng(1_000_003 * seed + attempt)
        pts = base + rng.uniform(-jitter, jitter, base.shape)
        if _min_angle(pts, faces) >= math.radians(min_angle_deg):
            return truss_from_faces([tuple(p) for p in pts], sorted(faces))
    raise RuntimeError(f"no well-shaped disk for seed {seed}")


def _min_angle(pts, faces):
    worst = math.pi
    for i, j, k in faces:
        a = math.dist(pts[j], pts[k])
        b = math.dist(pts[i], pts[k])
        c = math.dist(pts[i], pts[j])
        for p, q, r in ((a, b, c), (b, c, a), (c, a, b)):
            arg = (q * q + r * r - p * p) / (2.0 * q * r)
            worst = min(worst, math.acos(max(-1.0, min(1.0, arg))))
    return worst


def adjacency(truss):
    adj = {i: set() for i in range(truss.n_vertices)}
    for _, e in truss.active_edges():
        adj[e.a].add(e.b)
        adj[e.b].add(e.a)
    return adj


def deep_interior(truss, topo):
    """Interior vertices all of whose neighbors are interior too."""
    interior = set(topo.interior_vertices)
    adj = adjacency(truss)
    return [v for v in topo.interior_vertices if adj[v] <= interior]


def drill_star(truss, v):
    """Delete vertex v and every face through it; reindexes the rest."""
    faces = [f for f in truss.alive_faces if v not in f]
    keep = [i for i in range(truss.n_vertices) if i != v]
    remap = {old: new for new, old in enumerate(keep)}
    pts = [truss.vertices[i] for i in keep]
    return truss_from_faces(
        pts, [tuple(sorted(remap[x] for x in f)) for f in faces])


# ----------------------------------------------------------------------
# rigid-motion fit

def rigid_fit_residual(X, Y, allow_reflection=False):
    """Frobenius misfit of the best rigid motion carrying Y onto X."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    Xc = X - X.mean(axis=0)
    Yc = Y - Y.mean(axis=0)
    U, _, Vt = np.linalg.svd(Xc.T @ Yc)
    R = U @ Vt
    if not allow_reflection and np.linalg.det(R) < 0:
        U = U.copy()
        U[:, -1] = -U[:, -1]
        R = U @ Vt
    return float(np.linalg.norm(Yc @ R.T - Xc))


# ----------------------------------------------------------------------
# balanced loads

def balanced_loads(truss, rng, scale=1.0):
    """Random nodal forces with zero net force and torque."""
    F = rng.normal(size=2 * truss.n_vertices) * scale
    G = gauge_matrix(truss)
    Q, _ = np.linalg.qr(G.T)
    return F - Q @ (Q.T @ F)


# ----------------------------------------------------------------------
# random BTP trees

def random_btp(seed, max_depth=2):
    """Random bigon/triangle/prism/pin tree with nondegenerate junctions.

    Every generated node is guaranteed to hold exactly one vertex at each
    of its two terminal points, so pins always resolve.
    """
    rng = np.random.default_rng(seed)
    p = _fresh(rng)
    q = _fresh(rng)
    while math.dist(p, q) < 1.0:
        q = _fresh(rng)
    return _node(rng, p, q, max_depth, root=True)


def _fresh(rng):
    return (float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5)))


def _apart(rng, p, q):
    # a point clearly off the line through p and q
    while True:
        m = _fresh(rng)
        area = abs((q[0] - p[0]) * (m[1] - p[1]) - (q[1] - p[1]) * (m[0] - p[0]))
        if area > 2.0 and math.dist(m, p) > 0.5 and math.dist(m, q) > 0.5:
            return m


def _tri_node(rng, a, b, c, depth):
    return Triangle(_node(rng, a, c, depth), _node(rng, a, b, depth),
                    _node(rng, b, c, depth), pins=(a, b, c))


def _node(rng, p, q, depth, root=False):
    if depth <= 0:
        return Segment(p, q)
    kind = rng.choice(["segment", "bigon", "triangle", "prism", "pin"],
                      p=[0.3, 0.2, 0.25, 0.15, 0.1])
    if kind == "segment" and not root:
        return Segment(p, q)
    if kind == "segment":
        kind = rng.choice(["bigon", "triangle", "prism", "pin"])
    if kind == "bigon":
        return Bigon(_node(rng, p, q, depth - 1),
                     _node(rng, p, q, depth - 1), pins=(p, q))
    if kind == "triangle":
        m = _apart(rng, p, q)
        return Triangle(_node(rng, p, q, depth - 1),
                        _node(rng, p, m, depth - 1),
                        _node(rng, m, q, depth - 1), pins=(p, m, q))
    if kind == "prism":
        z1, z4 = p, q
        while True:
            z2 = _apart(rng, z1, z4)
            z3 = _apart(rng, z1, z2)
            z5 = _apart(rng, z4, z1)
            z6 = _apart(rng, z4, z5)
            det = prism_determinant(PrismLegs((z1, z2, z3, z4, z5, z6)))
            if abs(det) > 10.0:
                break
        return Prism(_tri_node(rng, z1, z2, z3, depth - 1),
                     _tri_node(rng, z4, z5, z6, depth - 1),
                     legs=(_node(rng, z1, z4, depth - 1),
                           _node(rng, z2, z5, depth - 1),
                           _node(rng, z3, z6, depth - 1)),
                     pins=((z1, z4), (z2, z5), (z3, z6)))
    # pin: a bigon of two triangles sharing an unpinned apex coordinate
    t = _apart(rng, p, q)
    child = Bigon(_tri_node(rng, p, q, t, depth - 1),
                  _tri_node(rng, p, q, t, depth - 1), pins=(p, q))
    return Pin(child, at=t)
