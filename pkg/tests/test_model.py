"""Structure model: validation, soft removal, face inference, topology, stars."""

import math

import numpy as np
import pytest

import helpers
from trusskit import (DisconnectedWarning, Edge, InfeasibleError, InputError,
                      Truss, hexstar, remove_edges, rhombus, star_of,
                      topology_report, truss_from_faces)
from trusskit.model import infer_faces


def test_edge_validation():
    with pytest.raises(InputError):
        Truss(vertices=((0, 0), (1, 0)), edges=((0, 2),))
    with pytest.raises(InputError):
        Truss(vertices=((0, 0), (1, 0)), edges=((0, 0),))
    with pytest.raises(InputError):
        Truss(vertices=((0, 0), (1, 0)), edges=((0, 1), (1, 0)))
    with pytest.raises(InputError):
        Truss(vertices=((0, 0), (0, 0), (1, 0)), edges=((0, 2), (1, 2)))
    with pytest.raises(InputError):
        Truss(vertices=((0, 0), (1, 0), (0, 1)), edges=((0, 1),),
              faces=((0, 1, 1),))
    # escape hatches for pinned assemblies
    Truss(vertices=((0, 0), (1, 0)), edges=((0, 1), (1, 0)), allow_multi=True)
    Truss(vertices=((0, 0), (0, 0), (1, 0)), edges=((0, 2), (1, 2)),
          allow_coincident=True)


def test_remove_restore_round_trip():
    t = rhombus(2)
    before = t.edges
    cut = remove_edges(t, [3, 7])
    assert {i for i, _ in cut.active_edges()} == \
        {i for i, _ in t.active_edges()} - {3, 7}
    assert cut.edges[3].removed and cut.edges[7].removed
    with pytest.raises(InputError):
        cut.find_edge(cut.edges[3].a, cut.edges[3].b)
    back = remove_edges(cut, [3, 7], restore=True)
    assert back.edges == before
    with pytest.raises(InputError):
        remove_edges(t, [999])


def test_disconnection_warns():
    t = Truss(vertices=((0, 0), (1, 0), (2, 0)), edges=((0, 1), (1, 2)))
    with pytest.warns(DisconnectedWarning):
        remove_edges(t, [1])


def test_lengths_and_vectors():
    t = Truss(vertices=((0, 0), (3, 4)), edges=(Edge(0, 1, length=5.5),))
    assert t.edge_length(0) == 5.5          # stored length wins
    assert t.measured_length(0) == pytest.approx(5.0)
    assert np.allclose(t.edge_vector(0), [3.0, 4.0])


def test_truss_from_faces_derives_edges():
    t = truss_from_faces([(0, 0), (1, 0), (0.5, 1), (1.5, 1)],
                         [(0, 1, 2), (1, 3, 2)])
    pairs = sorted((e.a, e.b) for e in t.edges)
    assert pairs == [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
    assert t.faces == ((0, 1, 2), (1, 2, 3))


def test_infer_faces_matches_generator():
    ref = hexstar()
    bare = Truss(vertices=ref.vertices, edges=ref.edges)
    assert set(infer_faces(bare)) == set(ref.faces)
    # crossing edges are refused
    x = Truss(vertices=((0, 0), (2, 2), (0, 2), (2, 0)),
              edges=((0, 1), (2, 3)))
    with pytest.raises(InputError):
        infer_faces(x)


def test_topology_hexstar():
    topo = topology_report(hexstar())
    assert (topo.v, topo.e, topo.f) == (7, 12, 6)
    assert topo.v_interior == 1 and topo.v_boundary == 6
    assert topo.chi == 1 and topo.genus == 0
    assert len(topo.boundary_loops) == 1
    assert len(topo.boundary_loops[0]) == 6
    assert topo.interior_vertices == (3,)


def test_topology_rhombus2():
    topo = topology_report(rhombus(2))
    assert topo.interior_vertices == (4, 5, 8, 9)
    assert topo.chi == 1 and topo.genus == 0


def test_topology_random_disks():
    for seed in range(5):
        t = helpers.random_disk(seed, rings=2 + seed % 2)
        topo = topology_report(t)
        assert topo.chi == 1 and topo.genus == 0
        assert topo.v_interior + topo.v_boundary == topo.v
        assert topo.e_boundary == len(topo.boundary_loops[0])
        # alive faces all manifold triangles
        assert topo.f == len(t.alive_faces)


def test_topology_detects_holes():
    t = helpers.random_disk(1, rings=3)
    topo = topology_report(t)
    deep = helpers.deep_interior(t, topo)
    holed = helpers.drill_star(t, deep[0])
    th = topology_report(holed)
    assert th.genus == 1
    assert len(th.boundary_loops) == 2


def test_star_of_center():
    t = hexstar()
    star = star_of(t, 3)
    assert len(star.ring) == 6
    # counterclockwise ring, consecutive neighbors joined by rim edges
    pts = t.vertices
    for i, w in enumerate(star.ring):
        u = star.ring[(i + 1) % 6]
        e = t.edges[star.rim_edges[i]]
        assert {e.a, e.b} == {w, u}
        r = t.edges[star.radial_edges[i]]
        assert {r.a, r.b} == {3, w}
    angles = [math.atan2(pts[w][1] - pts[3][1], pts[w][0] - pts[3][0])
              for w in star.ring]
    assert angles == sorted(angles)
    with pytest.raises(InfeasibleError):
        star_of(t, 0)
    with pytest.raises(InputError):
        star_of(t, 99)
