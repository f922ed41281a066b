"""First-order (infinitesimal) analysis of bar-and-node structures.

For a truss with v vertices and e alive bars, the geometry matrix A is
e x 2v: the row of bar (i, j) carries V_i - V_j in the slots of i and
V_j - V_i in the slots of j, so that for a velocity field U,

    (A U)_ij = (V_i - V_j) . (U_i - U_j) = l_ij * L_ij =: lambda_ij,

the product of rest length and elongation rate of the bar.  Everything
else is linear algebra on A:

* nullity n = dim ker A >= 3 (rigid motions); infinitesimally rigid
  means n == 3;
* the number of independent compatibility conditions satisfied by any
  geometric elongation vector is c = e - rank A = e - 2v + n;
* Maxwell's count C_M = e - 2v + 3 is the generic value of c, attained
  exactly when the truss is infinitesimally rigid.

Ranks use singular values with a relative threshold; reports echo the
threshold and the spectral gap that justified the cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import InfeasibleError, InputError
from .model import Truss

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class RigidityMatrix:
    matrix: np.ndarray         # e_active x 2v
    edge_order: tuple          # edge ids, row i of matrix belongs to edge_order[i]
    lengths: np.ndarray        # measured bar lengths, aligned with edge_order


def assemble_rigidity(truss: Truss) -> RigidityMatrix:
    act = truss.active_edges()
    if not act:
        raise InfeasibleError("no alive edges to assemble")
    v = truss.n_vertices
    A = np.zeros((len(act), 2 * v))
    lengths = np.zeros(len(act))
    order = []
    for r, (i, e) in enumerate(act):
        p = truss.vertices[e.a]
        q = truss.vertices[e.b]
        dx, dy = p[0] - q[0], p[1] - q[1]
        ln = float(np.hypot(dx, dy))
        if ln == 0.0 and not truss.allow_coincident:
            raise InputError(f"edge {i} has zero length")
        A[r, 2 * e.a] = dx
        A[r, 2 * e.a + 1] = dy
        A[r, 2 * e.b] = -dx
        A[r, 2 * e.b + 1] = -dy
        lengths[r] = ln
        order.append(i)
    return RigidityMatrix(matrix=A, edge_order=tuple(order), lengths=lengths)


def gauge_matrix(truss: Truss) -> np.ndarray:
    """Three rows spanning the rigid-motion velocity fields.

    Rows: unit x-translation, unit y-translation, and the rotation field
    (-y_i, x_i).  Appending them to A makes the stacked matrix injective
    precisely when the truss is infinitesimally rigid.
    """
    v = truss.n_vertices
    G = np.zeros((3, 2 * v))
    for i, (x, y) in enumerate(truss.vertices):
        G[0, 2 * i] = 1.0
        G[1, 2 * i + 1] = 1.0
        G[2, 2 * i] = -y
        G[2, 2 * i + 1] = x
    return G


def _rank_from_singular_values(s: np.ndarray, shape, tol: float):
    if s.size == 0:
        return 0, 0.0, 0.0
    thresh = tol * s[0] * max(shape)
    rank = int(np.sum(s > thresh))
    kept = float(s[rank - 1]) if rank > 0 else 0.0
    dropped = float(s[rank]) if rank < s.size else 0.0
    return rank, kept, dropped


@dataclass(frozen=True)
class AnalysisReport:
    v: int
    e: int
    rank: int
    nullity: int
    c: int                     # independent compatibility conditions
    maxwell: int               # e - 2v + 3
    is_inf_rigid: bool
    is_generic: bool           # c == maxwell
    flex_basis: np.ndarray     # (n - 3) x 2v, orthonormal, gauge-free
    edge_order: tuple
    tol: float
    sv_kept: float             # smallest singular value counted into the rank
    sv_dropped: float          # largest singular value below the threshold

    def as_dict(self) -> dict:
        return {
            "v": self.v,
            "e": self.e,
            "rank": self.rank,
            "nullity": self.nullity,
            "c": self.c,
            "maxwell": self.maxwell,
            "is_inf_rigid": self.is_inf_rigid,
            "is_generic": self.is_generic,
            "flex_count": int(self.flex_basis.shape[0]),
            "edge_order": list(self.edge_order),
            "tol": self.tol,
            "sv_kept": self.sv_kept,
            "sv_dropped": self.sv_dropped,
        }


def analyze(truss: Truss, tol: float = DEFAULT_TOL) -> AnalysisReport:
    rig = assemble_rigidity(truss)
    A = rig.matrix
    e, twov = A.shape
    v = twov // 2
    U, s, Vt = np.linalg.svd(A, full_matrices=True)
    rank, kept, dropped = _rank_from_singular_values(s, A.shape, tol)
    nullity = twov - rank
    null_basis = Vt[rank:, :]            # nullity x 2v, orthonormal

    # strip rigid motions out of the kernel: project onto the orthogonal
    # complement of the gauge span, then re-orthonormalize
    G = gauge_matrix(truss)
    Q, _ = np.linalg.qr(G.T)             # 2v x 3 orthonormal
    flex = null_basis - (null_basis @ Q) @ Q.T
    if flex.shape[0]:
        Uf, sf, Vtf = np.linalg.svd(flex, full_matrices=False)
        # input rows are unit-norm, so the threshold can be absolute
        keep = sf > tol * max(flex.shape)
        flex = Vtf[keep, :]
    expected_flexes = nullity - 3
    if flex.shape[0] != max(expected_flexes, 0):
        # gauge fields are not independent only for degenerate vertex sets
        raise InfeasibleError(
            f"flex extraction mismatch: nullity {nullity} but {flex.shape[0]} flexes; "
            "vertex set may be degenerate")

    return AnalysisReport(
        v=v,
        e=e,
        rank=rank,
        nullity=nullity,
        c=e - rank,
        maxwell=e - twov + 3,
        is_inf_rigid=(nullity == 3),
        is_generic=(e - rank == e - twov + 3),
        flex_basis=flex,
        edge_order=rig.edge_order,
        tol=tol,
        sv_kept=kept,
        sv_dropped=dropped,
    )


# ----------------------------------------------------------------------
# compatibility bases

@dataclass(frozen=True)
class CompatibilityBasis:
    rows: np.ndarray           # c x e, acting on lambda vectors
    edge_order: tuple
    method: str                # "leftnull" or "projector"
    tol: float

    @property
    def count(self) -> int:
        return int(self.rows.shape[0])


def compatibility_basis(truss: Truss, method: str = "leftnull",
                        tol: float = DEFAULT_TOL) -> CompatibilityBasis:
    """Basis of the linear conditions every geometric lambda vector obeys.

    leftnull:  orthonormal basis of the left null space of A (SVD).
    projector: rows harvested from the residual projector
               I - As (As^T As)^-1 As^T of the gauge-augmented matrix
               As = [A; G], restricted to its first e columns; requires an
               infinitesimally rigid truss so As^T As is invertible.
    """
    rig = assemble_rigidity(truss)
    A = rig.matrix
    e = A.shape[0]
    if method == "leftnull":
        U, s, Vt = np.linalg.svd(A, full_matrices=True)
        rank, _, _ = _rank_from_singular_values(s, A.shape, tol)
        rows = U[:, rank:].T.copy()
    elif method == "projector":
        G = gauge_matrix(truss)
        As = np.vstack([A, G])
        M = As.T @ As
        cond = np.linalg.cond(M)
        if not np.isfinite(cond) or cond > 1.0 / (tol * tol):
            raise InfeasibleError(
                "projector route needs an infinitesimally rigid truss "
                f"(augmented normal matrix condition {cond:.3g})")
        P = np.eye(As.shape[0]) - As @ np.linalg.solve(M, As.T)
        first = P[:, :e]
        # rank-revealing pivoted QR on the transpose picks independent rows
        q, r, piv = scipy.linalg.qr(first.T, pivoting=True, mode="economic")
        diag = np.abs(np.diag(r))
        if diag.size == 0 or diag[0] == 0.0:
            rank = 0
        else:
            rank = int(np.sum(diag > tol * diag[0] * max(first.shape)))
        rows = first[piv[:rank], :].copy()
        # orthonormalize for a well-conditioned basis
        if rows.shape[0]:
            rows = np.linalg.qr(rows.T)[0].T
    else:
        raise InputError(f"unknown method {method!r}")
    return CompatibilityBasis(rows=rows, edge_order=rig.edge_order, method=method, tol=tol)


# ----------------------------------------------------------------------
# prescribed elongations

def solve_prescribed_elongations(truss: Truss, lam: np.ndarray,
                                 gauge: Optional[np.ndarray] = None,
                                 tol: float = DEFAULT_TOL):
    """Velocity field realizing prescribed lambda = length * rate values.

    The solve is gauge-fixed: the stacked system [A; G] U = [lambda; gauge]
    has a unique least-squares solution on an infinitesimally rigid truss.
    Returns (U, residual, compatible) where residual is the 2-norm misfit
    of A U against lambda and compatible is the relative test against tol.
    """
    rig = assemble_rigidity(truss)
    A = rig.matrix
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (A.shape[0],):
        raise InputError(
            f"lambda has shape {lam.shape}, expected ({A.shape[0]},) "
            "(one entry per alive edge, ascending id)")
    G = gauge_matrix(truss)
    if gauge is None:
        gauge = np.zeros(3)
    gauge = np.asarray(gauge, dtype=float)
    if gauge.shape != (3,):
        raise InputError("gauge must supply exactly 3 values")
    rank_A = np.linalg.matrix_rank(A, tol=tol * max(A.shape))
    if 2 * truss.n_vertices - rank_A != 3:
        raise InfeasibleError(
            "prescribed-elongation solve requires an infinitesimally rigid truss")
    stacked = np.vstack([A, G])
    target = np.concatenate([lam, gauge])
    U, *_ = np.linalg.lstsq(stacked, target, rcond=None)
    residual = float(np.linalg.norm(A @ U - lam))
    scale = float(np.linalg.norm(lam))
    compatible = residual <= tol * max(scale, 1.0)
    return U, residual, compatible


# ----------------------------------------------------------------------
# elongation containers

@dataclass(frozen=True)
class ElongationVector:
    """Per-bar data aligned with an edge_order; lam = length * rate."""
    lam: np.ndarray
    edge_order: tuple

    @classmethod
    def from_rates(cls, truss: Truss, rates: np.ndarray) -> "ElongationVector":
        rig = assemble_rigidity(truss)
        rates = np.asarray(rates, dtype=float)
        if rates.shape != rig.lengths.shape:
            raise InputError("rate vector does not match alive edge count")
        return cls(lam=rates * rig.lengths, edge_order=rig.edge_order)

    def rates(self, truss: Truss) -> np.ndarray:
        rig = assemble_rigidity(truss)
        if rig.edge_order != self.edge_order:
            raise InputError("edge order mismatch between vector and truss")
        return self.lam / rig.lengths
