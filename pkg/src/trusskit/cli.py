"""Command line front end.

Thin shell over the library: every number printed here is produced by the
corresponding library call and formatted, never recomputed.  Reports go
out as JSON (floats in shortest round-trip form), matrices as CSV with 17
significant digits.

Exit codes: 0 ok, 1 bad input, 2 infeasible computation, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import btp, climit, damage, development, lattice, statics, svg, wagon
from .errors import InfeasibleError, InputError
from .model import Truss
from .rigidity import DEFAULT_TOL, analyze, compatibility_basis
from .truss_io import load_truss, parse_truss, save_truss, serialize_truss


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; route through InputError for exit 1
    def error(self, message):
        raise InputError(message)


def _emit(doc) -> None:
    print(json.dumps(doc, indent=1))


def _load(path: str, btp_file: bool = False) -> Truss:
    if btp_file:
        return btp.assemble(btp.node_from_json(_read_json(path))).truss
    return load_truss(path)


def _ids(text: str) -> list:
    try:
        return [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def _floats(text: str) -> list:
    try:
        return [float(t) for t in text.split(",") if t.strip() != ""]
    except ValueError:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from None


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON: {exc.msg}") from None


def _strain(spec: str) -> climit.StrainField:
    """Strain spec: JSON object or @file, components as coefficient arrays.

    {"e11": [[0,0,1]], "e12": 0, "e22": [[1]]} means e11 = y^2, e22 = 1;
    coeff[i][j] multiplies x^i y^j.
    """
    if spec.startswith("@"):
        try:
            with open(spec[1:]) as fh:
                spec = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {spec[1:]}: {exc.strerror}") from None
    try:
        obj = json.loads(spec)
    except json.JSONDecodeError as exc:
        raise InputError(f"strain spec is not valid JSON: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise InputError("strain spec must be a JSON object")
    extra = set(obj) - {"e11", "e12", "e22"}
    if extra:
        raise InputError(f"strain spec has unknown components {sorted(extra)}")
    return climit.StrainField(
        e11=climit.Poly2(obj.get("e11", 0.0)),
        e12=climit.Poly2(obj.get("e12", 0.0)),
        e22=climit.Poly2(obj.get("e22", 0.0)))


def _out(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ----------------------------------------------------------------------
# subcommands

def cmd_gen(args) -> int:
    holes = lattice.holes_from_spec(args.holes) if args.holes else ()
    truss = lattice.gen_patch(lattice.PatchSpec(
        shape=args.shape, n=args.n, k=args.k, holes=holes))
    _out(serialize_truss(truss), args.output)
    return 0


def cmd_analyze(args) -> int:
    truss = _load(args.file, args.btp)
    _emit(analyze(truss, tol=args.tol).as_dict())
    return 0


def cmd_compat(args) -> int:
    truss = _load(args.file, args.btp)
    basis = compatibility_basis(truss, method=args.method, tol=args.tol)
    lines = [",".join(f"edge_{e}" for e in basis.edge_order)]
    for row in basis.rows:
        lines.append(",".join("%.17g" % x for x in row))
    _out("\n".join(lines) + "\n", args.output)
    return 0


def cmd_wagon(args) -> int:
    truss = _load(args.file)
    from .model import topology_report
    for v in topology_report(truss).interior_vertices:
        row = wagon.wagon_row(truss, v)
        terms = ",".join(f"{e}={'%.17g' % c}" for e, c in sorted(row.coeffs.items()))
        print(f"{row.center}: {terms}")
    return 0


def cmd_curvesum(args) -> int:
    truss = _load(args.file)
    fn = wagon.curve_sum(truss, _ids(args.region))
    for e in sorted(fn.sigma):
        cls = fn.classes.get(e, "-")
        print(f"{e} {cls} {'%.17g' % fn.sigma[e]} {'%.17g' % fn.closed_form[e]}")
    return 0


def cmd_develop(args) -> int:
    truss = _load(args.file)
    dev = development.develop(truss, seed_edge=args.seed_edge)
    out = Truss(
        [tuple(p) for p in dev.coords],
        truss.edges, faces=truss.faces)
    _out(serialize_truss(out), args.output)
    print(f"max edge error: {dev.max_edge_error:.3e} of diameter {dev.diameter:.6g}",
          file=sys.stderr)
    return 0


def cmd_damage(args) -> int:
    truss = _load(args.file)
    lam = None
    if args.lam:
        raw = _read_json(args.lam)
        if not isinstance(raw, dict):
            raise InputError("elongation file must map edge ids to values")
        lam = {int(k): float(v) for k, v in raw.items()}
    rep = damage.assess_damage(truss, _ids(args.remove), lam=lam, tol=args.tol)
    doc = {
        "removed": list(rep.removed),
        "recoverable": rep.recoverable,
        "c_before": rep.c_before,
        "c_after": rep.c_after,
        "nullity_after": rep.nullity_after,
    }
    if rep.flexes is not None:
        doc["flexes"] = [list(map(float, r)) for r in rep.flexes]
    if rep.lam_rebuilt is not None:
        doc["lam_rebuilt"] = {str(k): v for k, v in sorted(rep.lam_rebuilt.items())}
        doc["residual"] = rep.residual
    _emit(doc)
    return 0


def cmd_ac(args) -> int:
    holes = lattice.holes_from_spec(args.holes) if args.holes else ()
    h = args.h if args.h is not None else len(holes)
    if args.m is not None:
        m = args.m
    elif holes:
        ms = {lattice.hole_grid_points(x) for x in holes}
        if len(ms) != 1:
            raise InputError(f"holes have mixed footprints {sorted(ms)}; pass --m")
        m = ms.pop()
    else:
        m = 0
    spec = damage.PeriodicCellSpec(k=args.k, h=h, m=m, holes=holes)
    res = damage.asymptotic_compatibility(spec, empirical_n=args.empirical, tol=args.tol)
    _emit({
        "k": spec.k, "h": spec.h, "m": spec.m,
        "formula": res.formula,
        "empirical": {str(n): v for n, v in sorted(res.empirical.items())},
        "gap": res.gap,
    })
    return 0


def cmd_statics(args) -> int:
    truss = _load(args.file)
    raw = _read_json(args.loads)
    loads = {int(k): v for k, v in raw.items()} if isinstance(raw, dict) else raw
    springs = 1.0
    if args.springs:
        raw = _read_json(args.springs)
        springs = {int(k): float(v) for k, v in raw.items()} if isinstance(raw, dict) else float(raw)
    solvefn = statics.solve_elongation if args.method == "elongation" else statics.solve_displacement
    sol = solvefn(truss, springs, loads, tol=args.tol)
    _emit({
        "method": sol.method,
        "U": [list(map(float, p)) for p in sol.U.reshape(-1, 2)],
        "lambda": {str(e): float(x) for e, x in zip(sol.edge_order, sol.lam)},
        "energy": sol.energy,
        "residual_force": sol.residual_force,
        "residual_compat": sol.residual_compat,
    })
    return 0


def cmd_limit(args) -> int:
    if args.kind == "hexagon":
        eps = _strain(args.ink_field)
        center = _floats(args.center)
        if len(center) != 2:
            raise InputError("--center needs 'x,y'")
        probe = climit.hexagon_limit_check(eps, center=center, deltas=_floats(args.deltas))
        _emit({
            "deltas": list(probe.deltas),
            "center": list(probe.center),
            "W": list(probe.W),
            "fitted": probe.fitted,
            "order": None if probe.order == float("inf") else probe.order,
            "predicted": probe.predicted,
        })
    else:
        probe = climit.boundary_limit_check(
            args.kappa, args.b, _strain(args.eps), rs=_floats(args.rs))
        _emit({
            "kappa": probe.kappa, "b": probe.b, "rs": list(probe.rs),
            "raw": list(probe.raw), "scaled": list(probe.scaled),
            "fitted": probe.fitted,
            "normalization": probe.normalization,
            "order": None if probe.order == float("inf") else probe.order,
            "predicted": probe.predicted,
        })
    return 0


def cmd_svg(args) -> int:
    truss = _load(args.file)
    values = None
    if args.values:
        values = _read_json(args.values)
    elif args.region and args.coloring == "sigma":
        fn = wagon.curve_sum(truss, _ids(args.region))
        values = [fn.sigma.get(i, 0.0) for i, _ in truss.active_edges()]
    _out(svg.render_svg(truss, coloring=args.coloring, values=values), args.output)
    return 0


def cmd_serve(args) -> int:
    from .service import serve
    if args.file:
        truss = _load(args.file)
    else:
        holes = lattice.holes_from_spec(args.holes) if args.holes else ()
        truss = lattice.gen_patch(lattice.PatchSpec(
            shape=args.shape, n=args.n, k=args.k, holes=holes))
    serve(truss, args.port)
    return 0


# ----------------------------------------------------------------------

def build_parser() -> _Parser:
    p = _Parser(prog="trusskit",
                description="compatibility conditions of planar bar-and-node structures")
    sub = p.add_subparsers(dest="command", required=True)

    def add_tol(q):
        q.add_argument("--tol", type=float, default=DEFAULT_TOL)

    q = sub.add_parser("gen", help="generate a lattice patch")
    q.add_argument("--shape", required=True,
                   choices=["hexstar", "rhombus", "cell", "periodic"])
    q.add_argument("--n", type=int, default=0)
    q.add_argument("--k", type=int, default=0)
    q.add_argument("--holes", default="")
    q.add_argument("-o", "--output", default=None)
    q.set_defaults(fn=cmd_gen)

    q = sub.add_parser("analyze", help="rank / nullity / compatibility counts")
    q.add_argument("file")
    q.add_argument("--btp", action="store_true",
                   help="input is a BTP assembly tree, not a truss file")
    add_tol(q)
    q.set_defaults(fn=cmd_analyze)

    q = sub.add_parser("compat", help="compatibility basis as CSV")
    q.add_argument("file")
    q.add_argument("--btp", action="store_true")
    q.add_argument("--method", default="leftnull", choices=["leftnull", "projector"])
    q.add_argument("-o", "--output", default=None)
    add_tol(q)
    q.set_defaults(fn=cmd_compat)

    q = sub.add_parser("wagon", help="wagon wheel rows at interior vertices")
    q.add_argument("file")
    q.set_defaults(fn=cmd_wagon)

    q = sub.add_parser("curvesum", help="curve sum functional over a region")
    q.add_argument("file")
    q.add_argument("--region", required=True, help="comma-separated interior vertex ids")
    q.set_defaults(fn=cmd_curvesum)

    q = sub.add_parser("develop", help="lay out a flat triangulation from lengths")
    q.add_argument("file")
    q.add_argument("--seed-edge", type=int, default=None)
    q.add_argument("-o", "--output", default=None)
    q.set_defaults(fn=cmd_develop)

    q = sub.add_parser("damage", help="assess an edge removal set")
    q.add_argument("file")
    q.add_argument("--remove", required=True, help="comma-separated edge ids")
    q.add_argument("--lam", default=None,
                   help="JSON file of surviving elongations for reconstruction")
    q.add_argument("--json", action="store_true", help="accepted for symmetry; output is JSON")
    add_tol(q)
    q.set_defaults(fn=cmd_damage)

    q = sub.add_parser("ac", help="asymptotic compatibility of a damaged lattice")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--holes", default="")
    q.add_argument("--h", type=int, default=None)
    q.add_argument("--m", type=int, default=None)
    q.add_argument("--empirical", type=_ids, default=None, help="tile counts, e.g. 1,2")
    add_tol(q)
    q.set_defaults(fn=cmd_ac)

    q = sub.add_parser("statics", help="equilibrium under nodal loads")
    q.add_argument("file")
    q.add_argument("--loads", required=True)
    q.add_argument("--springs", default=None)
    q.add_argument("--method", default="displacement",
                   choices=["displacement", "elongation"])
    add_tol(q)
    q.set_defaults(fn=cmd_statics)

    q = sub.add_parser("limit", help="discrete-to-continuum probes")
    lsub = q.add_subparsers(dest="kind", required=True)
    qh = lsub.add_parser("hexagon")
    qh.add_argument("--ink-field", required=True, help="strain spec (JSON or @file)")
    qh.add_argument("--deltas", default="0.2,0.1,0.05,0.025")
    qh.add_argument("--center", default="0,0")
    qh.set_defaults(fn=cmd_limit, kind="hexagon")
    qb = lsub.add_parser("boundary")
    qb.add_argument("--kappa", type=float, required=True)
    qb.add_argument("--b", type=float, default=0.0)
    qb.add_argument("--eps", required=True, help="strain spec (JSON or @file)")
    qb.add_argument("--rs", default="0.2,0.1,0.05,0.025")
    qb.set_defaults(fn=cmd_limit, kind="boundary")

    q = sub.add_parser("svg", help="render a truss")
    q.add_argument("file")
    q.add_argument("--coloring", default="none",
                   choices=["none", "sigma", "elongation", "flex"])
    q.add_argument("--values", default=None, help="JSON array aligned with active edges")
    q.add_argument("--region", default=None,
                   help="with --coloring sigma: derive values from this region")
    q.add_argument("-o", "--output", default=None)
    q.set_defaults(fn=cmd_svg)

    q = sub.add_parser("serve", help="run the HTTP JSON API")
    q.add_argument("--port", type=int, default=8787)
    q.add_argument("--file", default=None, help="truss file to load as base")
    q.add_argument("--shape", default="hexstar",
                   choices=["hexstar", "rhombus", "cell", "periodic"])
    q.add_argument("--n", type=int, default=0)
    q.add_argument("--k", type=int, default=0)
    q.add_argument("--holes", default="")
    q.set_defaults(fn=cmd_serve)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0
    except Exception as exc:   # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
