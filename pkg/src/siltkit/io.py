"""Algebra files, DOT export and run manifests.

Algebra file (JSON)::

    {
      "field_prime": 1000003,              (optional)
      "vertices": [1, 2],
      "arrows": [{"name": "a", "source": 1, "target": 2}, ...],
      "relations": [[{"coefficient": 1, "path": ["a", "b"]}, ...], ...]
    }

Vertex labels are strings, integers or lists (read back as tuples).  The
``{"manifest": ..., "result": {"algebra": ...}}`` document printed by the
construct commands is accepted too.
"""
from __future__ import annotations

import json
import platform
import time
from dataclasses import asdict, dataclass, field
from json.decoder import JSONDecodeError, scanstring

import networkx as nx
import numpy as np

from .linalg import DEFAULT_PRIME
from .quiver import BoundQuiverAlgebra, Quiver, build_algebra

_WS = " \t\r\n"


class AlgebraFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _parse_located(text: str):
    """JSON parse that also records the offset of every value by its access path."""
    decoder = json.JSONDecoder()
    where: dict[tuple, int] = {}

    def skip(i):
        while i < len(text) and text[i] in _WS:
            i += 1
        return i

    def fail(msg, i):
        raise JSONDecodeError(msg, text, i)

    def value(i, path):
        i = skip(i)
        where[path] = i
        if i >= len(text):
            fail("Expecting value", i)
        ch = text[i]
        if ch == "{":
            out = {}
            i = skip(i + 1)
            if i < len(text) and text[i] == "}":
                return out, i + 1
            while True:
                i = skip(i)
                if i >= len(text) or text[i] != '"':
                    fail("Expecting property name enclosed in double quotes", i)
                key, i = scanstring(text, i + 1)
                i = skip(i)
                if i >= len(text) or text[i] != ":":
                    fail("Expecting ':' delimiter", i)
                out[key], i = value(i + 1, path + (key,))
                i = skip(i)
                if i < len(text) and text[i] == ",":
                    i += 1
                    continue
                if i < len(text) and text[i] == "}":
                    return out, i + 1
                fail("Expecting ',' delimiter", i)
        if ch == "[":
            out = []
            i = skip(i + 1)
            if i < len(text) and text[i] == "]":
                return out, i + 1
            while True:
                v, i = value(i, path + (len(out),))
                out.append(v)
                i = skip(i)
                if i < len(text) and text[i] == ",":
                    i += 1
                    continue
                if i < len(text) and text[i] == "]":
                    return out, i + 1
                fail("Expecting ',' delimiter", i)
        return decoder.raw_decode(text, i)

    obj, end = value(0, ())
    end = skip(end)
    if end != len(text):
        fail("Extra data", end)
    return obj, where


def _label(x):
    if isinstance(x, list):
        return tuple(_label(y) for y in x)
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    raise TypeError("vertex labels must be strings, integers or lists")


def _label_out(x):
    return [_label_out(y) for y in x] if isinstance(x, tuple) else x


@dataclass
class AlgebraSpec:
    vertices: list
    arrows: list  # (name, source, target)
    relations: list  # [[(coefficient, [names]), ...], ...]
    field_prime: int | None = None

    def build(self, p: int | None = None, max_cap: int = 40) -> BoundQuiverAlgebra:
        prime = p or self.field_prime or DEFAULT_PRIME
        return build_algebra(Quiver(self.vertices, self.arrows), self.relations, prime, max_cap)


def parse_algebra_text(text: str) -> AlgebraSpec:
    try:
        data, where = _parse_located(text)
    except JSONDecodeError as exc:
        raise AlgebraFileError(exc.msg, exc.lineno, exc.colno) from None

    root: tuple = ()
    # accept the envelope printed by ``siltkit construct``
    if isinstance(data, dict) and "vertices" not in data:
        inner = data.get("result")
        if isinstance(inner, dict) and isinstance(inner.get("algebra"), dict):
            data, root = inner["algebra"], ("result", "algebra")

    def err(msg, path):
        pos = where.get(root + path)
        if pos is None:
            raise AlgebraFileError(msg)
        raise AlgebraFileError(msg, *_line_col(text, pos))

    if not isinstance(data, dict):
        err("top level must be an object", ())
    for key in ("vertices", "arrows"):
        if key not in data:
            err(f"missing key {key!r}", ())
    if not isinstance(data["vertices"], list):
        err("'vertices' must be a list", ("vertices",))
    verts = []
    for k, v in enumerate(data["vertices"]):
        try:
            verts.append(_label(v))
        except TypeError as exc:
            err(str(exc), ("vertices", k))
    if len(set(verts)) != len(verts):
        err("duplicate vertex label", ("vertices",))
    vset = set(verts)
    arrows = []
    if not isinstance(data["arrows"], list):
        err("'arrows' must be a list", ("arrows",))
    for k, a in enumerate(data["arrows"]):
        path = ("arrows", k)
        if not isinstance(a, dict) or not {"name", "source", "target"} <= set(a):
            err("arrow needs 'name', 'source' and 'target'", path)
        if not isinstance(a["name"], str) or not a["name"]:
            err("arrow name must be a nonempty string", path + ("name",))
        for end in ("source", "target"):
            try:
                lab = _label(a[end])
            except TypeError as exc:
                err(str(exc), path + (end,))
            if lab not in vset:
                err(f"unknown vertex {a[end]!r}", path + (end,))
        arrows.append((a["name"], _label(a["source"]), _label(a["target"])))
    names = [a[0] for a in arrows]
    if len(set(names)) != len(names):
        err("duplicate arrow name", ("arrows",))
    known = set(names)
    rels = []
    raw = data.get("relations", [])
    if not isinstance(raw, list):
        err("'relations' must be a list", ("relations",))
    for k, rel in enumerate(raw):
        if not isinstance(rel, list) or not rel:
            err("a relation is a nonempty list of terms", ("relations", k))
        terms = []
        for t, term in enumerate(rel):
            path = ("relations", k, t)
            if not isinstance(term, dict) or not {"coefficient", "path"} <= set(term):
                err("term needs 'coefficient' and 'path'", path)
            c = term["coefficient"]
            if isinstance(c, bool) or not isinstance(c, int):
                if isinstance(c, str):
                    try:
                        c = int(c)
                    except ValueError:
                        err(f"malformed coefficient {term['coefficient']!r}", path + ("coefficient",))
                else:
                    err(f"malformed coefficient {c!r}", path + ("coefficient",))
            if not isinstance(term["path"], list) or not term["path"]:
                err("path must be a nonempty list of arrow names", path + ("path",))
            for j, nm in enumerate(term["path"]):
                if nm not in known:
                    err(f"unknown arrow {nm!r} in relation", path + ("path", j))
            terms.append((c, list(term["path"])))
        rels.append(terms)
    p = data.get("field_prime")
    if p is not None and (isinstance(p, bool) or not isinstance(p, int)):
        err("field_prime must be an integer", ("field_prime",))
    return AlgebraSpec(verts, arrows, rels, p)


def parse_algebra_file(path) -> AlgebraSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra_text(fh.read())


def spec_to_json(spec: AlgebraSpec) -> dict:
    out = {}
    if spec.field_prime is not None:
        out["field_prime"] = spec.field_prime
    out["vertices"] = [_label_out(v) for v in spec.vertices]
    out["arrows"] = [{"name": n, "source": _label_out(s), "target": _label_out(t)} for n, s, t in spec.arrows]
    out["relations"] = [[{"coefficient": int(c), "path": list(p)} for c, p in rel] for rel in spec.relations]
    return out


def emit_algebra_file(spec: AlgebraSpec) -> str:
    return json.dumps(spec_to_json(spec), indent=2) + "\n"


def spec_from_algebra(A: BoundQuiverAlgebra) -> AlgebraSpec:
    return AlgebraSpec(list(A.quiver.vertices), list(A.quiver.arrows),
                       [[(int(c), list(p)) for c, p in rel] for rel in A.relations], A.p)


# ---------------------------------------------------------------- DOT

def _dot_id(x) -> str:
    return '"' + str(x).replace('"', '\\"') + '"'


def emit_dot(graph: nx.DiGraph, name: str = "G") -> str:
    """DOT text with nodes and edges in sorted order."""
    lines = [f"digraph {name} {{"]
    for v in sorted(graph.nodes, key=str):
        attrs = graph.nodes[v]
        label = attrs.get("label", v)
        lines.append(f"  {_dot_id(v)} [label={_dot_id(label)}];")
    for u, v in sorted(graph.edges, key=lambda e: (str(e[0]), str(e[1]))):
        label = graph.edges[u, v].get("label")
        extra = f" [label={_dot_id(label)}]" if label is not None else ""
        lines.append(f"  {_dot_id(u)} -> {_dot_id(v)}{extra};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def label_graph(G: nx.DiGraph, result) -> nx.DiGraph:
    """Attach g-vector-matrix labels to the nodes of an exchange quiver."""
    H = nx.DiGraph()
    for v in G.nodes:
        rows = result.nodes[v].key()
        H.add_node(v, label=";".join(",".join(str(x) for x in r) for r in rows))
    for u, v, data in G.edges(data=True):
        H.add_edge(u, v, label=",".join(str(s) for s in data.get("label", ())))
    return H


# ---------------------------------------------------------------- manifests

def _versions() -> dict:
    import numba

    from . import __version__

    return {"siltkit": __version__, "python": platform.python_version(), "numpy": np.__version__,
            "numba": numba.__version__}


@dataclass
class RunManifest:
    command: str
    inputs: dict
    seed: int
    field_prime: int
    versions: dict = field(default_factory=_versions)
    wall_time: float = 0.0
    _start: float = field(default_factory=time.perf_counter, repr=False)

    def finish(self) -> "RunManifest":
        self.wall_time = round(time.perf_counter() - self._start, 6)
        return self

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("_start")
        return d
