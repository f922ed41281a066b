"""Damage assessment, hole accounting, isoperimetric bounds, AC, thinning."""

import math

import numpy as np
import pytest

from trusskit import (BlockHole, InfeasibleError, InputError,
                      PeriodicCellSpec, analyze, assemble_rigidity,
                      assess_damage, asymptotic_compatibility, cell,
                      faces_within, hole_loss, isoperimetric,
                      max_interior_by_search, ne_thinning, rhombus, wagon_row)

SQRT3 = math.sqrt(3.0)


def test_recoverable_removal_bookkeeping():
    t = rhombus(2)
    rep = assess_damage(t, [8])
    assert rep.recoverable
    assert (rep.c_before, rep.c_after) == (4, 3)
    assert rep.nullity_after == 3
    assert rep.flexes is None and rep.lam_rebuilt is None
    rep = assess_damage(t, [8, 12, 8])     # duplicates collapse
    assert rep.removed == (8, 12)
    assert rep.c_after == 2
    with pytest.raises(InputError):
        assess_damage(t, [999])
    # removing an already removed edge is refused
    from trusskit import remove_edges
    with pytest.raises(InputError):
        assess_damage(remove_edges(t, [8]), [8])


def test_rebuilds_lost_elongations():
    rng = np.random.default_rng(13)
    t = rhombus(2)
    A = assemble_rigidity(t).matrix
    order = [i for i, _ in t.active_edges()]
    planted = rng.normal(size=2 * t.n_vertices)
    lam = A @ planted
    table = {i: float(lam[k]) for k, i in enumerate(order)}
    for removed in ([8], [8, 12], [3, 20]):
        rep = assess_damage(t, removed, lam=table)
        assert rep.recoverable
        assert rep.residual < 1e-9
        for i in removed:
            assert rep.lam_rebuilt[i] == pytest.approx(table[i], abs=1e-9)
    # dropping a surviving edge from the table is an input error
    short = dict(table)
    del short[0]
    with pytest.raises(InputError):
        assess_damage(t, [8], lam=short)


def test_unrecoverable_reports_flexes():
    t = rhombus(1)     # c = 1: two removals must break rigidity
    ids = [i for i, _ in t.active_edges()][:2]
    rep = assess_damage(t, ids)
    assert not rep.recoverable
    assert rep.nullity_after >= 4
    assert rep.flexes is not None and len(rep.flexes) >= 1
    assert rep.lam_rebuilt is None


def test_incompatible_table_is_refused():
    t = rhombus(2)
    # a lone stretch on one link of a surviving interior wheel is unrealizable
    row = next(r for r in (wagon_row(t, v) for v in (4, 5, 8, 9))
               if 8 not in r.coeffs)
    table = {i: 0.0 for i, _ in t.active_edges()}
    table[min(row.coeffs)] = 1.0
    with pytest.raises(InfeasibleError):
        assess_damage(t, [8], lam=table)


def test_hole_losses_on_cell7():
    host = cell(7)
    tri = faces_within(host, [(3, 3), (4, 3), (3, 4)])
    assert len(tri) == 1
    rep = hole_loss(host, tri)
    assert (rep.loss, rep.formula_loss) == (0, 0)
    assert (rep.v1, rep.ell1) == (0, 3)

    rho = faces_within(host, [(3, 3), (4, 3), (3, 4), (4, 4)])
    assert len(rho) == 2
    rep = hole_loss(host, rho)
    assert (rep.loss, rep.formula_loss) == (1, 1)
    assert (rep.v1, rep.ell1) == (0, 4)

    hexa = faces_within(host, [(4, 4), (5, 4), (4, 5), (3, 5), (3, 4),
                               (4, 3), (5, 3)])
    assert len(hexa) == 6
    rep = hole_loss(host, hexa)
    assert (rep.loss, rep.formula_loss) == (4, 4)
    assert (rep.v1, rep.ell1) == (1, 6)
    # sharp 60 degree corners keep even these small holes uncollared,
    # the closed form just happens to stay exact
    assert not rep.collared
    assert analyze(rep.holed).c == rep.c_holed
    assert sum(rep.kappa) == pytest.approx(2 * math.pi)


def test_collared_hole_matches_formula():
    host = cell(7)
    ball2 = [(a, b) for a in range(2, 7) for b in range(2, 7)
             if max(abs(a - 4), abs(b - 4), abs(a + b - 8)) <= 2]
    hexa2 = faces_within(host, ball2)      # side-2 hexagon, gentle corners
    assert len(hexa2) == 24
    rep = hole_loss(host, hexa2)
    assert rep.collared
    assert (rep.v1, rep.ell1) == (7, 12)
    assert rep.loss == rep.formula_loss == 16
    assert len(rep.boundary) == 12


def test_uncollared_loss_still_measured():
    host = cell(7)
    tri2 = faces_within(host, [(a, b) for a in range(3, 6)
                               for b in range(3, 6) if a + b <= 8])
    assert len(tri2) == 4                  # side-2 triangle
    rep = hole_loss(host, tri2)
    assert not rep.collared
    assert rep.loss >= rep.formula_loss == 3
    assert rep.loss == 3                   # rank says the bound is tight here


def test_hole_input_guards():
    host = cell(7)
    with pytest.raises(InputError):
        hole_loss(host, [])
    with pytest.raises(InputError):
        hole_loss(host, [(0, 0, 0)])       # not an alive face
    corner = faces_within(host, [(0, 0), (1, 0), (0, 1)])
    with pytest.raises(InputError):
        hole_loss(host, corner)            # touches the outer boundary
    two = faces_within(host, [(2, 2), (3, 2), (2, 3)]) \
        + faces_within(host, [(5, 5), (6, 5), (5, 6)])
    with pytest.raises(InputError):
        hole_loss(host, two)               # boundary splits into two curves


def test_faces_within_needs_lattice():
    from trusskit import Truss
    t = Truss(vertices=((0., 0.), (1., 0.), (0., 1.)),
              edges=((0, 1), (0, 2), (1, 2)), faces=((0, 1, 2),))
    with pytest.raises(InputError):
        faces_within(t, [(0, 0)])


def test_isoperimetric_formulas():
    for p in range(1, 5):
        ell = 6 * p
        got = isoperimetric(ell)
        assert got["max_interior"] == 3 * p * p - 3 * p + 1
        assert got["max_interior"] == ell * ell // 12 - ell // 2 + 1
        assert got["loss_lower"] == ell - 3
        assert got["loss_upper"] == 3 * p * p + 3 * p - 2
    assert isoperimetric(3)["max_interior"] == 0
    with pytest.raises(InputError):
        isoperimetric(2)


def test_brute_force_interior_matches_bound():
    best = max_interior_by_search(8)
    assert best == {3: 0, 4: 0, 5: 0, 6: 1, 7: 1, 8: 2}
    for ell, got in best.items():
        assert got == isoperimetric(ell)["max_interior"], ell
    with pytest.raises(InputError):
        max_interior_by_search(11)
    with pytest.raises(InputError):
        max_interior_by_search(2)


def test_periodic_cell_spec_guards():
    with pytest.raises(InputError):
        PeriodicCellSpec(k=0)
    with pytest.raises(InputError):
        PeriodicCellSpec(k=5, h=1, m=0)
    with pytest.raises(InputError):
        PeriodicCellSpec(k=3, h=3, m=3)


def test_asymptotic_compatibility_formula_and_empirical():
    spec = PeriodicCellSpec(k=7, h=1, m=4, holes=(BlockHole((3, 3)),))
    res = asymptotic_compatibility(spec, empirical_n=(1, 2))
    want = (49 - 1) / (SQRT3 / 2 * 49)
    assert res.formula == pytest.approx(want)
    assert set(res.empirical) == {1, 2}
    # finite tilings approach the limit from below
    assert res.empirical[1] < res.empirical[2] < want
    assert res.gap == pytest.approx((want - res.empirical[2]) / want)
    # formula without empirical runs needs no hole descriptors
    bare = asymptotic_compatibility(PeriodicCellSpec(k=7, h=1, m=4))
    assert bare.formula == pytest.approx(want) and bare.gap is None
    with pytest.raises(InputError):
        asymptotic_compatibility(PeriodicCellSpec(k=7, h=1, m=4),
                                 empirical_n=(1,))
    with pytest.raises(InputError):        # descriptors retire 4 points, not 7
        asymptotic_compatibility(
            PeriodicCellSpec(k=7, h=1, m=7, holes=(BlockHole((3, 3)),)),
            empirical_n=(1,))


def test_ne_thinning_counts():
    for n in (1, 2):
        rep = ne_thinning(n)
        assert rep.c == 0 and rep.is_inf_rigid
        assert rep.removable_count == n * n
        assert len(rep.removed_edge_ids) == n * n
        assert analyze(rep.truss).nullity == 3
    with pytest.raises(InputError):
        ne_thinning(0)
