"""Truss file format, version 1.

JSON with dense integer ids:

    {"version": 1,
     "vertices": [{"id": 0, "x": 0.0, "y": 0.0}, ...],
     "edges": [{"id": 0, "a": 0, "b": 1, "length": 1.0, "removed": false}, ...],
     "faces": [[0, 1, 2], ...]}

Lengths and faces are optional.  `serialize` is canonical: ids sorted,
floats printed with 17 significant digits, fixed key order and spacing,
so serialize(parse(x)) == x for files this module wrote.
"""

from __future__ import annotations

import json
import math
import warnings
from typing import Union

from .errors import InputError, LengthMismatchWarning
from .model import Edge, Truss

LENGTH_WARN_TOL = 1e-6


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        raise InputError(f"non-finite number {x!r} cannot be serialized")
    return "%.17g" % x


def _field(obj: dict, where: str, key: str, kinds, required=True, default=None):
    if key not in obj:
        if required:
            raise InputError(f"{where}: missing field {key!r}")
        return default
    val = obj[key]
    if not isinstance(kinds, tuple):
        kinds = (kinds,)
    names = "/".join(k.__name__ for k in kinds)
    # bool is an int subclass; only accept it where bool is asked for
    if isinstance(val, bool) and bool not in kinds:
        raise InputError(f"{where}.{key}: expected {names}, got bool")
    if not isinstance(val, kinds):
        raise InputError(f"{where}.{key}: expected {names}, got {type(val).__name__}")
    return val


def parse_truss(source: Union[str, bytes, dict]) -> Truss:
    if isinstance(source, (str, bytes)):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise InputError(
                f"not valid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}") from None
    else:
        doc = source
    if not isinstance(doc, dict):
        raise InputError("truss file must be a JSON object")
    version = _field(doc, "truss", "version", int)
    if version != 1:
        raise InputError(f"unsupported truss file version {version}")

    raw_vertices = _field(doc, "truss", "vertices", list)
    verts = {}
    for k, rec in enumerate(raw_vertices):
        if not isinstance(rec, dict):
            raise InputError(f"vertices[{k}]: expected an object")
        where = f"vertices[{k}]"
        vid = _field(rec, where, "id", int)
        if vid in verts:
            raise InputError(f"{where}: duplicate vertex id {vid}")
        x = float(_field(rec, where, "x", (int, float)))
        y = float(_field(rec, where, "y", (int, float)))
        verts[vid] = (x, y)
    if set(verts) != set(range(len(verts))):
        raise InputError("vertex ids must be dense 0..n-1")
    coords = [verts[i] for i in range(len(verts))]

    raw_edges = _field(doc, "truss", "edges", list)
    edges = {}
    for k, rec in enumerate(raw_edges):
        if not isinstance(rec, dict):
            raise InputError(f"edges[{k}]: expected an object")
        where = f"edges[{k}]"
        eid = _field(rec, where, "id", int)
        if eid in edges:
            raise InputError(f"{where}: duplicate edge id {eid}")
        a = _field(rec, where, "a", int)
        b = _field(rec, where, "b", int)
        for end, name in ((a, "a"), (b, "b")):
            if not 0 <= end < len(coords):
                raise InputError(
                    f"edge {eid} references missing vertex {end} (field {name!r})")
        length = _field(rec, where, "length", (int, float), required=False)
        removed = _field(rec, where, "removed", bool, required=False, default=False)
        edges[eid] = Edge(a, b, None if length is None else float(length),
                          bool(removed))
    if set(edges) != set(range(len(edges))):
        raise InputError("edge ids must be dense 0..e-1")
    edge_list = [edges[i] for i in range(len(edges))]

    faces = doc.get("faces")
    if faces is not None:
        if not isinstance(faces, list):
            raise InputError("faces: expected a list of triples")
        for k, f in enumerate(faces):
            if not (isinstance(f, list) and len(f) == 3
                    and all(isinstance(i, int) for i in f)):
                raise InputError(f"faces[{k}]: expected a triple of vertex ids")
        faces = tuple(tuple(f) for f in faces)

    truss = Truss(coords, edge_list, faces=faces)
    for i, e in enumerate(truss.edges):
        if e.length is not None:
            measured = truss.measured_length(i)
            if abs(e.length - measured) > LENGTH_WARN_TOL * max(1.0, measured):
                warnings.warn(
                    f"edge {i} stored length {e.length:g} differs from embedded "
                    f"distance {measured:g}; lengths win for length problems, "
                    "positions for displacement problems", LengthMismatchWarning,
                    stacklevel=2)
    return truss


def load_truss(path: str) -> Truss:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_truss(data)


def serialize_truss(truss: Truss) -> str:
    out = ['{"version": 1,', ' "vertices": [']
    for i, p in enumerate(truss.vertices):
        rec = f'  {{"id": {i}, "x": {_fmt(p[0])}, "y": {_fmt(p[1])}}}'
        if i + 1 < len(truss.vertices):
            rec += ","
        out.append(rec)
    out.append(" ],")
    out.append(' "edges": [')
    for i, e in enumerate(truss.edges):
        rec = f'  {{"id": {i}, "a": {e.a}, "b": {e.b}'
        if e.length is not None:
            rec += f', "length": {_fmt(e.length)}'
        rec += f', "removed": {"true" if e.removed else "false"}}}'
        if i + 1 < len(truss.edges):
            rec += ","
        out.append(rec)
    out.append(" ]" + ("," if truss.faces is not None else ""))
    if truss.faces is not None:
        rows = ", ".join("[%d, %d, %d]" % f for f in truss.faces)
        out.append(f' "faces": [{rows}]')
    out.append("}")
    return "\n".join(out) + "\n"


def save_truss(truss: Truss, path: str) -> None:
    text = serialize_truss(truss)
    with open(path, "w") as fh:
        fh.write(text)
