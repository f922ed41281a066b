"""Discrete-to-continuum probes for compatibility conditions.

A smooth strain field induces elongation rates on a truss edge by
averaging its quadratic form along the bar:

    L = (1/|d|) integral_0^1  d^T eps(gamma(s)) d  ds.

With polynomial strain the quadrature is exact, so the lattice limits can
be tested cleanly: the hexagon wheel sum converges to -(3/4) Ink(eps)
delta^2 with no delta^3 term, and the five-vertex boundary girder
functional scaled by 1/r converges to -eps11,2 + (eps11 - eps22) kappa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import InputError
from .model import Truss

MAX_STRAIN_DEGREE = 6


class Poly2:
    """Bivariate polynomial; coeff[i, j] multiplies x^i y^j."""

    __slots__ = ("coeff",)

    def __init__(self, coeff):
        if isinstance(coeff, Poly2):
            self.coeff = coeff.coeff
            return
        arr = np.asarray(coeff, dtype=float)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        elif arr.ndim == 1:
            arr = arr.reshape(-1, 1)   # 1-D input read as coefficients of x^i
        if arr.ndim != 2:
            raise InputError("polynomial coefficients must form a 2-D array")
        self.coeff = arr

    @classmethod
    def zero(cls) -> "Poly2":
        return cls([[0.0]])

    @property
    def degree(self) -> int:
        nz = np.argwhere(self.coeff != 0.0)
        if len(nz) == 0:
            return 0
        return int(max(i + j for i, j in nz))

    def __call__(self, x, y):
        return npoly.polyval2d(x, y, self.coeff)

    def dx(self) -> "Poly2":
        if self.coeff.shape[0] == 1:
            return Poly2.zero()
        return Poly2(npoly.polyder(self.coeff, axis=0))

    def dy(self) -> "Poly2":
        if self.coeff.shape[1] == 1:
            return Poly2.zero()
        return Poly2(npoly.polyder(self.coeff, axis=1))

    def __add__(self, other: "Poly2") -> "Poly2":
        a, b = self.coeff, Poly2(other).coeff
        out = np.zeros((max(a.shape[0], b.shape[0]),
                        max(a.shape[1], b.shape[1])))
        out[:a.shape[0], :a.shape[1]] += a
        out[:b.shape[0], :b.shape[1]] += b
        return Poly2(out)

    def __mul__(self, scalar: float) -> "Poly2":
        return Poly2(self.coeff * float(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        return f"Poly2(degree={self.degree})"


@dataclass(frozen=True)
class StrainField:
    e11: Poly2
    e12: Poly2
    e22: Poly2

    def __post_init__(self):
        for name in ("e11", "e12", "e22"):
            p = Poly2(getattr(self, name))
            if p.degree > MAX_STRAIN_DEGREE:
                raise InputError(
                    f"strain component {name} has degree {p.degree} > "
                    f"{MAX_STRAIN_DEGREE}")
            object.__setattr__(self, name, p)

    @property
    def degree(self) -> int:
        return max(self.e11.degree, self.e12.degree, self.e22.degree)


@dataclass(frozen=True)
class PolyDisplacement:
    u1: Poly2
    u2: Poly2

    def __post_init__(self):
        for name in ("u1", "u2"):
            p = Poly2(getattr(self, name))
            if p.degree > MAX_STRAIN_DEGREE + 1:
                raise InputError(f"displacement degree cap is {MAX_STRAIN_DEGREE + 1}")
            object.__setattr__(self, name, p)


def strain_of(u: PolyDisplacement) -> StrainField:
    """Symmetrized gradient, exactly differentiated."""
    return StrainField(e11=u.u1.dx(),
                       e12=0.5 * (u.u1.dy() + u.u2.dx()),
                       e22=u.u2.dy())


def ink(eps: StrainField, point=(0.0, 0.0)) -> float:
    """Incompatibility e11,22 - 2 e12,12 + e22,11 at a point."""
    x, y = float(point[0]), float(point[1])
    return float(eps.e11.dy().dy()(x, y)
                 - 2.0 * eps.e12.dx().dy()(x, y)
                 + eps.e22.dx().dx()(x, y))


def segment_elongation(eps: StrainField, p, q) -> float:
    """Induced elongation rate of the bar p -> q (exact for polynomials)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    d = q - p
    ell = float(np.hypot(d[0], d[1]))
    if ell == 0.0:
        raise InputError("zero-length bar")
    n = (eps.degree + 2 + 1) // 2
    nodes, weights = np.polynomial.legendre.leggauss(n)
    s = 0.5 * (nodes + 1.0)          # map to [0, 1]
    w = 0.5 * weights
    xs = p[0] + s * d[0]
    ys = p[1] + s * d[1]
    val = (d[0] * d[0] * eps.e11(xs, ys)
           + 2.0 * d[0] * d[1] * eps.e12(xs, ys)
           + d[1] * d[1] * eps.e22(xs, ys))
    return float(np.dot(w, val)) / ell


def induced_elongations(truss: Truss, eps: StrainField) -> np.ndarray:
    """Per-edge induced L, aligned with the active-edge row order."""
    out = []
    for i, e in truss.active_edges():
        out.append(segment_elongation(eps, truss.vertices[e.a], truss.vertices[e.b]))
    return np.array(out)


# ----------------------------------------------------------------------
# extrapolation helpers

def _neville(ts: np.ndarray, ys: np.ndarray) -> float:
    """Polynomial extrapolation of (t, y) samples to t = 0."""
    n = len(ts)
    tab = list(map(float, ys))
    for k in range(1, n):
        for i in range(n - k):
            tab[i] = tab[i + 1] + (tab[i + 1] - tab[i]) * ts[i + k] / (
                ts[i] - ts[i + k])
    return tab[0]


def _error_order(hs: Sequence[float], errs: Sequence[float],
                 floors: Sequence[float]) -> float:
    """Least-squares slope of log err against log h.

    Points whose error sits at the roundoff floor of the underlying sum
    are dropped; if fewer than two resolvable points remain the sequence
    already converged and the order reads as infinite.
    """
    pts = [(math.log(h), math.log(e)) for h, e, f in zip(hs, errs, floors)
           if e > max(f, 1e-300)]
    if len(pts) < 2:
        return math.inf
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    return float(np.polyfit(xs, ys, 1)[0])


# ----------------------------------------------------------------------
# hexagon probe (interior limit)

@dataclass(frozen=True)
class HexLimitProbe:
    deltas: tuple
    center: tuple
    W: tuple                    # wheel sum per delta
    fitted: float               # extrapolated W / delta^2
    order: float                # error order of W/delta^2 toward the fit
    predicted: float            # -(3/4) Ink(eps)(center)


def hexagon_limit_check(eps: StrainField, center=(0.0, 0.0),
                        deltas: Sequence[float] = (0.2, 0.1, 0.05, 0.025)) -> HexLimitProbe:
    """Wheel condition on shrinking regular hexagons around a center.

    W(delta) = (sum spoke L - sum rim L) / delta, the hexagonal wheel row
    with its 1/length weight.  For induced elongations of a strain field
    the expansion starts at -(3/4) Ink(eps) delta^2 with no delta^3 term,
    so W/delta^2 converges with error order 2.  Any elongations realized
    by an actual displacement satisfy the wheel row exactly, giving W = 0
    to roundoff.  Extrapolation is plain Neville in delta; for polynomial
    strain W is itself a polynomial, so four sides already reach the fit
    tolerance.
    """
    deltas = tuple(float(d) for d in deltas)
    if not deltas or any(d <= 0 for d in deltas):
        raise InputError("hexagon sides must be positive")
    if any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise InputError("hexagon sides must be strictly decreasing")
    cx, cy = float(center[0]), float(center[1])
    ring_dirs = [(math.cos(k * math.pi / 3.0), math.sin(k * math.pi / 3.0))
                 for k in range(6)]
    Ws = []
    gross = []
    for d in deltas:
        ring = [(cx + d * ux, cy + d * uy) for ux, uy in ring_dirs]
        w = 0.0
        g = 0.0
        for k in range(6):
            rim = segment_elongation(eps, ring[k], ring[(k + 1) % 6])
            spoke = segment_elongation(eps, (cx, cy), ring[k])
            w += spoke - rim
            g += abs(rim) + abs(spoke)
        Ws.append(w / d)
        gross.append(g / d)
    ys = np.array([w / (d * d) for w, d in zip(Ws, deltas)])
    fitted = _neville(np.array(deltas), ys)
    errs = [abs(y - fitted) for y in ys]
    # cancellation in W bottoms out around machine epsilon times the
    # gross magnitude of the twelve L terms
    floors = [1e-13 * g / (d * d) for g, d in zip(gross, deltas)]
    order = _error_order(deltas, errs, floors)
    return HexLimitProbe(
        deltas=deltas, center=(cx, cy), W=tuple(Ws), fitted=float(fitted),
        order=order, predicted=-0.75 * ink(eps, (cx, cy)))


# ----------------------------------------------------------------------
# boundary probe (five-vertex girder on a curved edge)

@dataclass(frozen=True)
class BoundaryProbe:
    kappa: float
    b: float
    rs: tuple
    raw: tuple                  # functional value per r
    scaled: tuple               # value / r per r
    fitted: float               # extrapolated limit of the convergent scaling
    normalization: str          # which scaling admits a finite nonzero limit
    order: float
    predicted: float            # -e11,2(0) + (e11(0) - e22(0)) kappa


def _rot(p, ang):
    c, s = math.cos(ang), math.sin(ang)
    return (c * p[0] - s * p[1], s * p[0] + c * p[1])


def boundary_limit_check(kappa: float, b: float, eps: StrainField,
                         rs: Sequence[float] = (0.2, 0.1, 0.05, 0.025)) -> BoundaryProbe:
    """Five-vertex boundary girder functional on a curved boundary.

    The boundary passes through the origin tangent to the x axis with
    curvature kappa and curvature derivative b; chords of length r reach
    boundary points V1, V4 at chord angles sin(alpha) = (kappa/2) r +-
    (b/6) r^2, and V2, V3 sit equilaterally above.  The functional follows
    the one-interior-vertex girder condition with half weights on the two
    chords.  Its value divided by r converges to
    -e11,2 + (e11 - e22) kappa at the origin; the raw value tends to zero.
    Both scalings are reported with the convergent one flagged.
    """
    rs = tuple(float(r) for r in rs)
    if not rs or any(r <= 0 for r in rs):
        raise InputError("chord lengths must be positive")
    if any(bb >= aa for aa, bb in zip(rs, rs[1:])):
        raise InputError("chord lengths must be strictly decreasing")
    kappa = float(kappa)
    b = float(b)
    raw = []
    gross = []
    for r in rs:
        sin_p = (kappa / 2.0) * r + (b / 6.0) * r * r
        sin_m = -(kappa / 2.0) * r + (b / 6.0) * r * r
        if abs(sin_p) >= 1 or abs(sin_m) >= 1:
            raise InputError(f"curvature too large for chord length {r}")
        ap = math.asin(sin_p)
        am = math.asin(sin_m)
        V0 = (0.0, 0.0)
        V1 = (r * math.cos(ap), r * math.sin(ap))
        V4 = (-r * math.cos(am), -r * math.sin(am))
        V2 = _rot(V1, math.pi / 3.0)
        V3 = _rot(V4, -math.pi / 3.0)
        h1 = (math.sqrt(3.0) / 2.0) * r
        mid = (0.5 * (V2[0] + V3[0]), 0.5 * (V2[1] + V3[1]))
        h2 = math.hypot(mid[0], mid[1])
        cosb = math.hypot(V3[0] - V2[0], V3[1] - V2[1]) / (2.0 * r)
        L01 = segment_elongation(eps, V0, V1)
        L04 = segment_elongation(eps, V0, V4)
        L02 = segment_elongation(eps, V0, V2)
        L03 = segment_elongation(eps, V0, V3)
        L23 = segment_elongation(eps, V2, V3)
        val = ((L01 + L04) / (2.0 * h1)
               - L23 / h2
               + (cosb / h2 - 0.5 / h1) * (L02 + L03))
        raw.append(val)
        gross.append((abs(L01) + abs(L04)) / (2.0 * h1)
                     + abs(L23) / h2
                     + abs(cosb / h2 - 0.5 / h1) * (abs(L02) + abs(L03)))
    scaled = tuple(v / r for v, r in zip(raw, rs))
    predicted = (-eps.e11.dy()(0.0, 0.0)
                 + (eps.e11(0.0, 0.0) - eps.e22(0.0, 0.0)) * kappa)
    fit_scaled = _neville(np.array(rs), np.array(scaled))
    fit_raw = _neville(np.array(rs), np.array(raw))
    # the raw functional dies with r; the 1/r scaling is the convergent one
    if abs(fit_scaled) > 10.0 * abs(fit_raw) or abs(fit_raw) < 1e-10:
        fitted, norm, seq = float(fit_scaled), "value/r", scaled
        floors = [1e-13 * g / r for g, r in zip(gross, rs)]
    else:
        fitted, norm, seq = float(fit_raw), "raw", raw
        floors = [1e-13 * g for g in gross]
    errs = [abs(y - fitted) for y in seq]
    order = _error_order(rs, errs, floors)
    return BoundaryProbe(
        kappa=kappa, b=b, rs=rs, raw=tuple(raw), scaled=scaled,
        fitted=fitted, normalization=norm, order=order,
        predicted=float(predicted))
