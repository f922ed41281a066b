"""HTTP JSON API for interactive damage exploration.

A single in-memory session holds a base truss, the current truss, and an
ordered toggle history.  Mutations are serialized under one lock and bump
a snapshot counter; clients may send the snapshot they last saw and get
409 back if someone else mutated in between.  Reads grab immutable
references under the lock and build their payload outside it, so they
never block each other.

Every mutating call returns the fresh analysis payload, whose fields
mirror the analysis report attribute names, so clients never compute
physics themselves.
"""

from __future__ import annotations

import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .damage import assess_damage
from .errors import InfeasibleError, InputError
from .lattice import PatchSpec, gen_patch, holes_from_spec
from .model import Truss, remove_edges
from .rigidity import DEFAULT_TOL, analyze
from .truss_io import parse_truss, serialize_truss
from .wagon import wagon_row

_TOGGLE_RE = re.compile(r"^/api/edges/(\d+)/toggle$")


class Conflict(Exception):
    pass


def _analysis_payload(report) -> dict:
    payload = report.as_dict()
    payload["flex_basis"] = [list(map(float, row)) for row in report.flex_basis]
    return payload


class SessionState:
    """Base truss + current truss + replayable toggle history."""

    def __init__(self, base: Truss, tol: float = DEFAULT_TOL):
        self.lock = threading.Lock()
        self.tol = tol
        self.snapshot = 0
        self._install(base)

    def _install(self, base: Truss):
        self.base = base
        self.current = base
        self.history = []
        self.analysis = analyze(base, self.tol)
        self.snapshot += 1

    # ------------------------------------------------------------------
    # mutations (call under lock)

    def replace(self, truss: Truss):
        self._install(truss)

    def reset(self):
        self._install(self.base)

    def toggle(self, edge_id: int, expect=None):
        if expect is not None and expect != self.snapshot:
            raise Conflict(f"snapshot {expect} is stale (now {self.snapshot})")
        if not 0 <= edge_id < len(self.current.edges):
            raise InputError(f"no edge {edge_id}")
        removing = not self.current.edges[edge_id].removed
        before = self.analysis
        self.current = remove_edges(self.current, [edge_id], restore=not removing)
        self.analysis = analyze(self.current, self.tol)
        entry = {
            "step": len(self.history),
            "edge": edge_id,
            "action": "remove" if removing else "restore",
            "c": self.analysis.c,
            "nullity": self.analysis.nullity,
            "is_inf_rigid": self.analysis.is_inf_rigid,
        }
        if removing:
            # single-edge damage summary relative to the pre-toggle state
            rep = assess_damage(
                remove_edges(self.current, [edge_id], restore=True),
                [edge_id], tol=self.tol)
            entry["recoverable"] = rep.recoverable
            entry["c_before"] = before.c
        self.history.append(entry)
        self.snapshot += 1
        return entry["action"]


def _truss_doc(truss: Truss) -> dict:
    return json.loads(serialize_truss(truss))


class ApiHandler(BaseHTTPRequestHandler):
    state: SessionState = None   # set by make_server
    protocol_version = "HTTP/1.1"

    # quiet server: no per-request stderr lines
    def log_message(self, fmt, *args):
        pass

    def _send(self, code: int, payload: dict):
        body = json.dumps(payload).encode()
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    # browser clients preflight their JSON POSTs
    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def _body(self) -> dict:
        n = int(self.headers.get("Content-Length") or 0)
        if n == 0:
            return {}
        try:
            doc = json.loads(self.rfile.read(n))
        except json.JSONDecodeError as exc:
            raise InputError(f"request body is not valid JSON: {exc.msg}") from None
        if not isinstance(doc, dict):
            raise InputError("request body must be a JSON object")
        return doc

    # ------------------------------------------------------------------

    def do_GET(self):
        try:
            st = self.state
            with st.lock:
                snap, truss, report = st.snapshot, st.current, st.analysis
                history = list(st.history)
            if self.path == "/api/truss":
                self._send(200, {"snapshot": snap, "truss": _truss_doc(truss)})
            elif self.path == "/api/analysis":
                self._send(200, {"snapshot": snap,
                                 "analysis": _analysis_payload(report)})
            elif self.path == "/api/flexes":
                flexes = [
                    [[float(row[2 * i]), float(row[2 * i + 1])]
                     for i in range(truss.n_vertices)]
                    for row in report.flex_basis]
                self._send(200, {"snapshot": snap, "nullity": report.nullity,
                                 "flexes": flexes})
            elif self.path == "/api/wagonwheels":
                # per-vertex, tolerant of damage: a vertex keeps its wheel
                # condition only while its star is still a closed alive fan
                wheels = []
                for v in range(truss.n_vertices):
                    try:
                        row = wagon_row(truss, v)
                    except InfeasibleError:
                        continue
                    wheels.append({"center": row.center,
                                   "coeffs": {str(e): c
                                              for e, c in sorted(row.coeffs.items())}})
                self._send(200, {"snapshot": snap, "wheels": wheels})
            elif self.path == "/api/history":
                self._send(200, {"snapshot": snap, "history": history})
            else:
                self._send(404, {"error": f"no such endpoint {self.path}"})
        except (InputError, InfeasibleError) as exc:
            self._send(400, {"error": str(exc)})
        except Exception as exc:   # pragma: no cover - defensive
            self._send(500, {"error": f"internal: {exc}"})

    def do_POST(self):
        try:
            st = self.state
            body = self._body()
            m = _TOGGLE_RE.match(self.path)
            if m:
                with st.lock:
                    action = st.toggle(int(m.group(1)), body.get("snapshot"))
                    snap, report = st.snapshot, st.analysis
                self._send(200, {"snapshot": snap, "action": action,
                                 "analysis": _analysis_payload(report)})
            elif self.path == "/api/generate":
                shape = body.get("shape")
                if not isinstance(shape, str):
                    raise InputError("generate needs a 'shape' string")
                holes = body.get("holes", ())
                if isinstance(holes, str):
                    holes = holes_from_spec(holes) if holes else ()
                truss = gen_patch(PatchSpec(
                    shape=shape, n=int(body.get("n", 0)),
                    k=int(body.get("k", 0)), holes=tuple(holes)))
                with st.lock:
                    st.replace(truss)
                    snap, report = st.snapshot, st.analysis
                self._send(200, {"snapshot": snap,
                                 "analysis": _analysis_payload(report)})
            elif self.path == "/api/reset":
                with st.lock:
                    st.reset()
                    snap, report = st.snapshot, st.analysis
                self._send(200, {"snapshot": snap,
                                 "analysis": _analysis_payload(report)})
            else:
                self._send(404, {"error": f"no such endpoint {self.path}"})
        except Conflict as exc:
            self._send(409, {"error": str(exc)})
        except (InputError, InfeasibleError) as exc:
            self._send(400, {"error": str(exc)})
        except Exception as exc:   # pragma: no cover - defensive
            self._send(500, {"error": f"internal: {exc}"})

    def do_PUT(self):
        try:
            st = self.state
            if self.path != "/api/truss":
                self._send(404, {"error": f"no such endpoint {self.path}"})
                return
            truss = parse_truss(self._body())
            with st.lock:
                st.replace(truss)
                snap, report = st.snapshot, st.analysis
            self._send(200, {"snapshot": snap,
                             "analysis": _analysis_payload(report)})
        except (InputError, InfeasibleError) as exc:
            self._send(400, {"error": str(exc)})
        except Exception as exc:   # pragma: no cover - defensive
            self._send(500, {"error": f"internal: {exc}"})


def make_server(truss: Truss, port: int = 0,
                tol: float = DEFAULT_TOL) -> ThreadingHTTPServer:
    """Build (but do not start) the API server; port 0 picks a free one."""
    state = SessionState(truss, tol)
    handler = type("BoundApiHandler", (ApiHandler,), {"state": state})
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve(truss: Truss, port: int, tol: float = DEFAULT_TOL) -> None:
    server = make_server(truss, port, tol)
    host, actual = server.server_address[:2]
    print(f"serving on http://{host}:{actual}/api", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
