"""Linear elastostatics: K = A^T C A, and the two equivalent solve routes.

Hooke's law acts on the lambda elongations (lambda = length * strain
rate), with spring constants on the diagonal of C, so bar forces are
C Lambda and nodal balance reads A^T C Lambda = F.  With U eliminated
that is the displacement route K U = F, Lambda = A U; keeping Lambda as
the unknown instead, force balance plus every compatibility condition
B Lambda = 0 pins the same minimizer of W = 1/2 Lambda^T C Lambda.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Union

import numpy as np

from .errors import InfeasibleError, InputError
from .model import Truss
from .rigidity import (DEFAULT_TOL, assemble_rigidity, compatibility_basis,
                       gauge_matrix)

SpringInput = Union[float, Dict[int, float]]


def spring_vector(truss: Truss, springs: SpringInput) -> np.ndarray:
    """Per-edge stiffness aligned with the active-edge row order."""
    active = truss.active_edges()
    if isinstance(springs, (int, float)):
        vec = np.full(len(active), float(springs))
    else:
        try:
            vec = np.array([float(springs[i]) for i, _ in active])
        except KeyError as ex:
            raise InputError(f"spring constant missing for edge {ex.args[0]}")
    if not np.all(vec > 0):
        raise InputError("spring constants must be strictly positive")
    return vec


def load_vector(truss: Truss, loads) -> np.ndarray:
    """Nodal forces as a flat 2v vector; accepts (v,2), (2v,), or a dict."""
    v = truss.n_vertices
    if isinstance(loads, dict):
        F = np.zeros((v, 2))
        for i, f in loads.items():
            if not 0 <= int(i) < v:
                raise InputError(f"load on unknown vertex {i}")
            F[int(i)] = f
        return F.reshape(-1)
    F = np.asarray(loads, dtype=float)
    if F.shape == (v, 2):
        return F.reshape(-1)
    if F.shape == (2 * v,):
        return F
    raise InputError(f"loads have shape {F.shape}, expected ({v}, 2) or ({2*v},)")


def is_balanced(truss: Truss, F, tol: float = DEFAULT_TOL) -> bool:
    """Net force and net torque vanish (F orthogonal to the gauge rows)."""
    Fv = load_vector(truss, F)
    G = gauge_matrix(truss)
    scale = max(float(np.linalg.norm(Fv)), 1.0) * max(
        float(np.max(np.abs(G))), 1.0)
    return float(np.linalg.norm(G @ Fv)) <= tol * scale


def stiffness(truss: Truss, springs: SpringInput = 1.0) -> np.ndarray:
    A = assemble_rigidity(truss).matrix
    C = spring_vector(truss, springs)
    return A.T @ (C[:, None] * A)


@dataclass(frozen=True)
class EquilibriumSolution:
    U: np.ndarray                 # flat 2v displacement representative
    lam: np.ndarray               # per active edge, row order
    energy: float                 # 1/2 lam^T C lam
    residual_force: float         # |A^T C lam - F|
    residual_compat: float        # |B lam|
    method: str
    edge_order: tuple


def _finish(truss, A, B, C, F, U, lam, method, tol, edge_order):
    rf = float(np.linalg.norm(A.T @ (C * lam) - F))
    rc = float(np.linalg.norm(B @ lam)) if B.size else 0.0
    scale = max(float(np.linalg.norm(F)), 1.0)
    if rf > 100 * tol * scale:
        raise InfeasibleError(
            f"load is not in equilibrium range (residual {rf:.3e}); "
            "it excites a mechanism of the truss")
    energy = 0.5 * float(lam @ (C * lam))
    return EquilibriumSolution(
        U=U, lam=lam, energy=energy, residual_force=rf, residual_compat=rc,
        method=method, edge_order=edge_order)


def solve_displacement(truss: Truss, springs: SpringInput, loads,
                       tol: float = DEFAULT_TOL) -> EquilibriumSolution:
    """Gauge-fixed solve of K U = F, then Lambda = A U."""
    F = load_vector(truss, loads)
    if not is_balanced(truss, F, tol):
        raise InputError("loads are unbalanced: net force or torque is nonzero")
    rig = assemble_rigidity(truss)
    A = rig.matrix
    C = spring_vector(truss, springs)
    K = A.T @ (C[:, None] * A)
    G = gauge_matrix(truss)
    stacked = np.vstack([K, G])
    target = np.concatenate([F, np.zeros(3)])
    U, *_ = np.linalg.lstsq(stacked, target, rcond=None)
    lam = A @ U
    B = compatibility_basis(truss, tol=tol).rows
    return _finish(truss, A, B, C, F, U, lam, "displacement", tol, rig.edge_order)


def solve_elongation(truss: Truss, springs: SpringInput, loads,
                     tol: float = DEFAULT_TOL) -> EquilibriumSolution:
    """Solve directly for Lambda: A^T C Lambda = F with B Lambda = 0."""
    F = load_vector(truss, loads)
    if not is_balanced(truss, F, tol):
        raise InputError("loads are unbalanced: net force or torque is nonzero")
    rig = assemble_rigidity(truss)
    A = rig.matrix
    C = spring_vector(truss, springs)
    B = compatibility_basis(truss, tol=tol).rows
    lhs = np.vstack([C[None, :] * A.T, B]) if B.size else C[None, :] * A.T
    rhs = np.concatenate([F, np.zeros(B.shape[0] if B.size else 0)])
    lam, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    # displacement representative for reporting, gauge-fixed
    G = gauge_matrix(truss)
    U, *_ = np.linalg.lstsq(np.vstack([A, G]),
                            np.concatenate([lam, np.zeros(3)]), rcond=None)
    return _finish(truss, A, B, C, F, U, lam, "elongation", tol, rig.edge_order)
