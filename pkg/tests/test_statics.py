"""Elastostatics: the displacement and elongation routes must agree."""

import numpy as np
import pytest

import helpers
from trusskit import (InfeasibleError, InputError, Truss, analyze,
                      is_balanced, load_vector, remove_edges, rhombus,
                      solve_displacement, solve_elongation, spring_vector,
                      stiffness)
from trusskit.rigidity import gauge_matrix


def test_single_bar_force_over_stiffness():
    t = Truss(vertices=((0.0, 0.0), (1.0, 0.0)), edges=((0, 1),))
    for c, f in ((1.0, 1.0), (2.5, 0.75), (10.0, -3.0)):
        loads = {0: (-f, 0.0), 1: (f, 0.0)}
        for solver in (solve_displacement, solve_elongation):
            sol = solver(t, c, loads)
            assert sol.lam[0] == pytest.approx(f / c, abs=1e-12)
            assert sol.energy == pytest.approx(f * f / (2 * c), abs=1e-12)
            assert sol.residual_force < 1e-12 * max(abs(f), 1.0)


def test_routes_agree_on_random_trusses():
    rng = np.random.default_rng(7)
    for seed in range(5):
        t = helpers.random_disk(seed)
        F = helpers.balanced_loads(t, rng)
        springs = {i: float(rng.uniform(0.5, 3.0)) for i, _ in t.active_edges()}
        a = solve_displacement(t, springs, F)
        b = solve_elongation(t, springs, F)
        scale = max(np.linalg.norm(a.lam), 1e-12)
        assert np.linalg.norm(a.lam - b.lam) < 1e-8 * scale
        assert a.energy == pytest.approx(b.energy, rel=1e-8)
        assert np.linalg.norm(a.U - b.U) < 1e-7 * max(np.linalg.norm(a.U), 1.0)
        assert a.residual_compat < 1e-8 * scale
        assert b.residual_compat < 1e-8 * scale
        assert a.edge_order == b.edge_order


def test_routes_agree_after_damage():
    rng = np.random.default_rng(11)
    t = remove_edges(rhombus(2), [8])
    assert analyze(t).is_inf_rigid
    F = helpers.balanced_loads(t, rng)
    a = solve_displacement(t, 1.0, F)
    b = solve_elongation(t, 1.0, F)
    assert np.linalg.norm(a.lam - b.lam) < 1e-8 * max(np.linalg.norm(a.lam), 1e-12)
    assert len(a.lam) == len(t.active_edges())


def test_unbalanced_loads_are_refused():
    t = rhombus(1)
    assert not is_balanced(t, {0: (1.0, 0.0)})
    with pytest.raises(InputError):
        solve_displacement(t, 1.0, {0: (1.0, 0.0)})
    with pytest.raises(InputError):
        solve_elongation(t, 1.0, {0: (1.0, 0.0)})


def test_mechanism_exciting_load_is_infeasible():
    square = Truss(
        vertices=((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)),
        edges=((0, 1), (1, 2), (2, 3), (3, 0)))
    assert not analyze(square).is_inf_rigid
    flex = np.array([0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0])
    Q, _ = np.linalg.qr(gauge_matrix(square).T)
    F = flex - Q @ (Q.T @ flex)        # balanced, still drives the shear
    assert is_balanced(square, F)
    for solver in (solve_displacement, solve_elongation):
        with pytest.raises(InfeasibleError):
            solver(square, 1.0, F)


def test_spring_and_load_validation():
    t = rhombus(1)
    with pytest.raises(InputError):
        spring_vector(t, 0.0)
    with pytest.raises(InputError):
        spring_vector(t, -2.0)
    with pytest.raises(InputError):
        spring_vector(t, {0: 1.0})         # rest of the edges missing
    with pytest.raises(InputError):
        load_vector(t, {99: (1.0, 0.0)})
    with pytest.raises(InputError):
        load_vector(t, np.zeros(5))
    flat = load_vector(t, np.zeros((t.n_vertices, 2)))
    assert flat.shape == (2 * t.n_vertices,)


def test_stiffness_matrix_shape_and_kernel():
    t = rhombus(1)
    K = stiffness(t, 2.0)
    assert K.shape == (2 * t.n_vertices, 2 * t.n_vertices)
    assert np.allclose(K, K.T)
    w = np.linalg.eigvalsh(K)
    assert w[0] > -1e-9 and np.sum(w < 1e-9) == 3   # rigid motions only
