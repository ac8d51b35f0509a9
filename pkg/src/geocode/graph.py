"""Shape programs as directed acyclic graphs of typed operation nodes.

Nodes carry static attributes and named, typed input ports; edges move
values (numbers, booleans, vectors, curves, profiles, frames, meshes) from a
source node to a target port. A graph is bound to a parameter schema, has
exactly one mesh-valued output node, and evaluates deterministically: each
node runs once in a fixed topological order, memoized within the call.

Switchable geometry stays in the graph permanently; a switch node gated
false passes an empty mesh downstream, which keeps the graph static and
validation one-shot. Parameter references whose entry carries the existence
label evaluate to a fixed substitute (range midpoint / lowest value / False)
so that gated-off branches still evaluate cleanly and identically regardless
of what the hidden entries used to hold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .geometry import (Frame, GeometryError, LabeledMesh, PathCurve,
                       ProfileCurve, attach, join, mirror, retag,
                       rotational_replicate, sweep)
from .params import (BOOLEAN, CONTINUOUS, DISCRETE, INVISIBLE, ParameterSchema,
                     ParameterVector, validate_vector)

NUMBER, VECTOR, CURVE, PROFILE, FRAME, MESH = "number", "vector", "curve", "profile", "frame", "mesh"
BOOL = "boolean"

FORMAT_VERSION = 1


class GraphError(ValueError):
    """Structurally invalid graph."""


class NodeEvalError(RuntimeError):
    """Runtime failure inside one node's evaluation."""

    def __init__(self, node_id: str, cause: Exception):
        super().__init__(f"node {node_id!r}: {cause}")
        self.node_id = node_id
        self.cause = cause


@dataclass(frozen=True)
class OperationNode:
    id: str
    kind: str
    attrs: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    port: str


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def add(self, msg: str):
        self.errors.append(msg)


# ---------------------------------------------------------------------------
# node kind registry

_MATH_UNARY = {"abs", "neg", "not"}
_MATH_BOOL_OUT = {"ge", "gt", "le", "lt", "eq", "and", "or", "not"}
_MATH_OPS = {"add", "sub", "mul", "div", "min", "max", "lerp", "abs", "neg",
             "atan2", "where", "ge", "gt", "le", "lt", "eq", "and", "or", "not"}

_VECTOR_OPS = {
    "make": ({"x": NUMBER, "y": NUMBER, "z": NUMBER}, VECTOR),
    "add": ({"a": VECTOR, "b": VECTOR}, VECTOR),
    "scale": ({"v": VECTOR, "s": NUMBER}, VECTOR),
    "component": ({"v": VECTOR}, NUMBER),
    "profile_point": ({"profile": PROFILE, "t": NUMBER}, VECTOR),
    "frame_origin": ({"f": FRAME}, VECTOR),
    "frame_tangent": ({"f": FRAME}, VECTOR),
    "frame_normal": ({"f": FRAME}, VECTOR),
    "frame_binormal": ({"f": FRAME}, VECTOR),
    "span_frame_x": ({"f": FRAME}, FRAME),
}

_SCALE_PORTS = {
    "constant": ("s0",),
    "linear": ("s0", "s1"),
    "peak": ("s0", "s1", "s2", "pos"),
}


def _math_ports(attrs):
    op = attrs.get("op")
    if op in _MATH_UNARY:
        return {"a": BOOL if op == "not" else NUMBER}
    if op == "lerp":
        return {"a": NUMBER, "b": NUMBER, "t": NUMBER}
    if op == "where":
        return {"c": BOOL, "a": NUMBER, "b": NUMBER}
    if op in ("and", "or"):
        return {"a": BOOL, "b": BOOL}
    return {"a": NUMBER, "b": NUMBER}


def node_ports(node: OperationNode, schema: ParameterSchema) -> dict[str, str]:
    """Required input ports of a node: name -> value type."""
    k = node.kind
    if k in ("constant", "parameter-ref"):
        return {}
    if k == "math":
        return _math_ports(node.attrs)
    if k == "vector-op":
        return dict(_VECTOR_OPS[node.attrs["op"]][0])
    if k == "curve-builder":
        return {f"p{i}": VECTOR for i in range(int(node.attrs["points"]))}
    if k == "profile-builder":
        return {"roundness": NUMBER, "half_width": NUMBER, "half_depth": NUMBER}
    if k == "sample-curve":
        return {"curve": CURVE, "t": NUMBER}
    if k == "sweep":
        ports = {"profile": PROFILE, "path": CURVE}
        for s in _SCALE_PORTS[node.attrs.get("scale", "constant")]:
            ports[s] = NUMBER
        return ports
    if k == "attach":
        return {"element": MESH, "anchor": FRAME, "target": FRAME}
    if k == "mirror":
        return {"m": MESH}
    if k == "rotate-replicate":
        return {"m": MESH, "count": NUMBER}
    if k == "join":
        return {f"m{i}": MESH for i in range(int(node.attrs["count"]))}
    if k == "switch":
        return {"m": MESH, "gate": BOOL}
    if k in ("part-tag", "output"):
        return {"m": MESH}
    raise GraphError(f"unknown node kind {k!r}")


def optional_ports(node: OperationNode) -> dict[str, str]:
    if node.kind == "attach":
        return {"fit_width": NUMBER}
    return {}


def output_type(node: OperationNode, schema: ParameterSchema) -> str:
    k = node.kind
    if k == "constant":
        v = node.attrs["value"]
        if isinstance(v, bool):
            return BOOL
        if isinstance(v, (list, tuple)):
            return VECTOR
        if isinstance(v, LabeledMesh):
            return MESH
        return NUMBER
    if k == "parameter-ref":
        spec = schema.spec(node.attrs["name"])
        return BOOL if spec.kind == BOOLEAN else NUMBER
    if k == "math":
        return BOOL if node.attrs.get("op") in _MATH_BOOL_OUT else NUMBER
    if k == "vector-op":
        return _VECTOR_OPS[node.attrs["op"]][1]
    if k == "curve-builder":
        return CURVE
    if k == "profile-builder":
        return PROFILE
    if k == "sample-curve":
        return FRAME
    return MESH


def _check_attrs(node: OperationNode, schema: ParameterSchema, report: ValidationReport):
    k, a = node.kind, node.attrs
    try:
        if k == "constant" and "value" not in a:
            report.add(f"{node.id}: constant without value")
        elif k == "parameter-ref":
            schema.spec(a["name"])
        elif k == "math" and a.get("op") not in _MATH_OPS:
            report.add(f"{node.id}: unknown math op {a.get('op')!r}")
        elif k == "vector-op":
            if a.get("op") not in _VECTOR_OPS:
                report.add(f"{node.id}: unknown vector op {a.get('op')!r}")
            elif a["op"] == "component" and a.get("index") not in (0, 1, 2):
                report.add(f"{node.id}: component index must be 0, 1, or 2")
        elif k == "curve-builder":
            n = int(a["points"])
            if n < 4 or (n - 1) % 3 != 0:
                report.add(f"{node.id}: control point count must be 3k+1, k>=1")
        elif k == "sweep":
            if a.get("scale", "constant") not in _SCALE_PORTS:
                report.add(f"{node.id}: unknown sweep scale kind {a.get('scale')!r}")
            if int(a.get("profile_samples", 16)) < 3 or int(a.get("path_samples", 32)) < 2:
                report.add(f"{node.id}: sweep resolution too low")
        elif k == "mirror":
            n = np.asarray(a["plane_normal"], float)
            if abs(np.linalg.norm(n) - 1.0) > 1e-9:
                report.add(f"{node.id}: mirror plane normal must be unit length")
        elif k == "rotate-replicate":
            np.asarray(a["axis_point"], float)
            np.asarray(a["axis_dir"], float)
        elif k == "join" and int(a.get("count", 0)) < 1:
            report.add(f"{node.id}: join requires at least one input")
        elif k == "part-tag" and not a.get("part"):
            report.add(f"{node.id}: part-tag without part name")
    except Exception as e:  # malformed attrs of any shape
        report.add(f"{node.id}: bad attributes: {e}")


# ---------------------------------------------------------------------------
# the graph

class ProgramGraph:
    """DAG of operation nodes bound to a parameter schema."""

    def __init__(self, nodes: list[OperationNode], edges: list[Edge],
                 schema: ParameterSchema):
        self.nodes = list(nodes)
        self.edges = list(edges)
        self.schema = schema
        self.by_id = {n.id: n for n in self.nodes}
        if len(self.by_id) != len(self.nodes):
            raise GraphError("duplicate node ids")

    def incoming(self) -> dict[str, dict[str, str]]:
        """target id -> {port: source id}"""
        inc: dict[str, dict[str, str]] = {n.id: {} for n in self.nodes}
        for e in self.edges:
            inc[e.target][e.port] = e.source
        return inc


def topo_order(graph: ProgramGraph) -> list[str]:
    """Deterministic topological order; ties broken by node id."""
    indeg = {n.id: 0 for n in graph.nodes}
    out: dict[str, list[str]] = {n.id: [] for n in graph.nodes}
    for e in graph.edges:
        indeg[e.target] += 1
        out[e.source].append(e.target)
    ready = sorted([i for i, d in indeg.items() if d == 0])
    order = []
    while ready:
        nid = ready.pop(0)
        order.append(nid)
        inserted = False
        for t in out[nid]:
            indeg[t] -= 1
            if indeg[t] == 0:
                ready.append(t)
                inserted = True
        if inserted:
            ready.sort()
    if len(order) != len(graph.nodes):
        rest = sorted(set(indeg) - set(order))
        raise GraphError(f"graph has a cycle involving: {', '.join(rest)}")
    return order


def validate(graph: ProgramGraph) -> ValidationReport:
    """Structural validation: a passing graph always evaluates without
    structural error (runtime geometry errors remain possible)."""
    report = ValidationReport()
    ids = set(graph.by_id)
    for e in graph.edges:
        if e.source not in ids:
            report.add(f"edge from unknown node {e.source!r}")
        if e.target not in ids:
            report.add(f"edge into unknown node {e.target!r}")
    if report.errors:
        return report

    for n in graph.nodes:
        if n.kind not in ("constant", "parameter-ref", "math", "vector-op",
                          "curve-builder", "profile-builder", "sample-curve", "sweep",
                          "attach", "mirror", "rotate-replicate", "join", "switch",
                          "part-tag", "output"):
            report.add(f"{n.id}: unknown kind {n.kind!r}")
            continue
        _check_attrs(n, graph.schema, report)
    if report.errors:
        return report

    outputs = [n for n in graph.nodes if n.kind == "output"]
    if len(outputs) != 1:
        report.add(f"graph must have exactly one output node, found {len(outputs)}")

    inc = graph.incoming()
    seen_ports: set[tuple[str, str]] = set()
    for e in graph.edges:
        key = (e.target, e.port)
        if key in seen_ports:
            report.add(f"{e.target}: port {e.port!r} wired more than once")
        seen_ports.add(key)
    for n in graph.nodes:
        ports = node_ports(n, graph.schema)
        opt = optional_ports(n)
        for p, vtype in ports.items():
            if p not in inc[n.id]:
                report.add(f"{n.id}: required port {p!r} not connected")
        for p, src in inc[n.id].items():
            vtype = ports.get(p) or opt.get(p)
            if vtype is None:
                report.add(f"{n.id}: unknown port {p!r}")
                continue
            src_type = output_type(graph.by_id[src], graph.schema)
            if src_type != vtype:
                report.add(f"{n.id}: port {p!r} expects {vtype}, got {src_type} from {src}")

    try:
        order = topo_order(graph)
    except GraphError as e:
        report.add(str(e))
        return report

    if outputs:
        # reverse reachability from the output: no dead nodes allowed
        rev: dict[str, list[str]] = {n.id: [] for n in graph.nodes}
        for e in graph.edges:
            rev[e.target].append(e.source)
        reached = set()
        stack = [outputs[0].id]
        while stack:
            nid = stack.pop()
            if nid in reached:
                continue
            reached.add(nid)
            stack.extend(rev[nid])
        dead = sorted(set(graph.by_id) - reached)
        if dead:
            report.add(f"dead nodes not reaching the output: {', '.join(dead)}")
    return report


# ---------------------------------------------------------------------------
# evaluation

def _smoothstep(x: float) -> float:
    x = min(max(x, 0.0), 1.0)
    return x * x * (3.0 - 2.0 * x)


def _param_value(spec, value):
    if value is not INVISIBLE:
        return bool(value) if spec.kind == BOOLEAN else float(value)
    # fixed substitute for hidden entries; gated-off consumers discard it
    if spec.kind == CONTINUOUS:
        return 0.5 * (spec.min + spec.max)
    if spec.kind == DISCRETE:
        return float(spec.lo)
    return False


def _eval_math(op, ins):
    a = ins.get("a")
    b = ins.get("b")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "min":
        return min(a, b)
    if op == "max":
        return max(a, b)
    if op == "lerp":
        return a + (b - a) * ins["t"]
    if op == "abs":
        return abs(a)
    if op == "neg":
        return -a
    if op == "atan2":
        return float(np.arctan2(a, b))
    if op == "where":
        return a if ins["c"] else b
    if op == "ge":
        return a >= b
    if op == "gt":
        return a > b
    if op == "le":
        return a <= b
    if op == "lt":
        return a < b
    if op == "eq":
        return a == b
    if op == "and":
        return a and b
    if op == "or":
        return a or b
    if op == "not":
        return not a
    raise GraphError(f"unknown math op {op!r}")


def _eval_vector_op(attrs, ins):
    op = attrs["op"]
    if op == "make":
        return np.array([ins["x"], ins["y"], ins["z"]], dtype=float)
    if op == "add":
        return ins["a"] + ins["b"]
    if op == "scale":
        return ins["v"] * ins["s"]
    if op == "component":
        return float(ins["v"][attrs["index"]])
    if op == "profile_point":
        p2 = ins["profile"].boundary_point(ins["t"])
        return np.array([p2[0], p2[1], 0.0])
    if op == "frame_origin":
        return ins["f"].origin.copy()
    if op == "frame_tangent":
        return ins["f"].tangent.copy()
    if op == "frame_normal":
        return ins["f"].normal.copy()
    if op == "frame_binormal":
        return ins["f"].binormal.copy()
    if op == "span_frame_x":
        f: Frame = ins["f"]
        ex = np.array([1.0, 0.0, 0.0])
        n = f.normal - f.normal[0] * ex
        ln = np.linalg.norm(n)
        if ln < 1e-12:
            raise GeometryError("span frame: source normal is parallel to the span axis")
        npr = n / ln
        binormal = -npr
        normal = np.cross(binormal, ex)
        origin = np.array([0.0, f.origin[1], f.origin[2]])
        return Frame(origin, ex, normal, binormal)
    raise GraphError(f"unknown vector op {op!r}")


def _make_scale_fn(kind, ins):
    if kind == "constant":
        s0 = ins["s0"]
        return lambda t: s0
    if kind == "linear":
        s0, s1 = ins["s0"], ins["s1"]
        return lambda t: s0 + (s1 - s0) * t
    s0, s1, s2 = ins["s0"], ins["s1"], ins["s2"]
    pos = min(max(ins["pos"], 0.05), 0.95)

    def peak(t):
        if t < pos:
            return s0 + (s1 - s0) * _smoothstep(t / pos)
        return s1 + (s2 - s1) * _smoothstep((t - pos) / (1.0 - pos))

    return peak


def _eval_node(node: OperationNode, ins: dict, schema: ParameterSchema, params_map: dict):
    k, a = node.kind, node.attrs
    if k == "constant":
        v = a["value"]
        if isinstance(v, (list, tuple)):
            return np.asarray(v, dtype=float)
        return v
    if k == "parameter-ref":
        return _param_value(schema.spec(a["name"]), params_map[a["name"]])
    if k == "math":
        return _eval_math(a["op"], ins)
    if k == "vector-op":
        return _eval_vector_op(a, ins)
    if k == "curve-builder":
        pts = np.stack([ins[f"p{i}"] for i in range(int(a["points"]))])
        nseg = (len(pts) - 1) // 3
        segs = np.stack([pts[3 * i:3 * i + 4] for i in range(nseg)])
        return PathCurve(segs, init_normal=a.get("init_normal"))
    if k == "profile-builder":
        return ProfileCurve(ins["roundness"], ins["half_width"], ins["half_depth"])
    if k == "sample-curve":
        return ins["curve"].frame_at(min(max(ins["t"], 0.0), 1.0))
    if k == "sweep":
        fn = _make_scale_fn(a.get("scale", "constant"), ins)
        return sweep(ins["profile"], ins["path"], fn,
                     int(a.get("profile_samples", 16)), int(a.get("path_samples", 32)),
                     part=a.get("part", "element"))
    if k == "attach":
        return attach(ins["element"], ins["anchor"], ins["target"],
                      fit_width=ins.get("fit_width"))
    if k == "mirror":
        return mirror(ins["m"], a["plane_point"], a["plane_normal"])
    if k == "rotate-replicate":
        count = max(1, int(round(ins["count"])))
        return rotational_replicate(ins["m"], a["axis_point"], a["axis_dir"], count)
    if k == "join":
        return join([ins[f"m{i}"] for i in range(int(a["count"]))])
    if k == "switch":
        return ins["m"] if ins["gate"] else LabeledMesh.empty()
    if k == "part-tag":
        return retag(ins["m"], a["part"])
    if k == "output":
        return ins["m"]
    raise GraphError(f"unknown node kind {k!r}")


def evaluate(graph: ProgramGraph, params: ParameterVector,
             stats: dict | None = None) -> LabeledMesh:
    """Evaluate the graph on a canonical parameter vector.

    Pure function of (graph, params): nodes run once each in a deterministic
    topological order and the output node's mesh is returned bit-identically
    across runs. Runtime failures carry the offending node id.
    """
    validate_vector(params, graph.schema)
    params_map = {s.name: v for s, v in zip(graph.schema, params.values)}
    inc = graph.incoming()
    values: dict[str, object] = {}
    evaluations = 0
    for nid in topo_order(graph):
        node = graph.by_id[nid]
        ins = {port: values[src] for port, src in inc[nid].items()}
        try:
            values[nid] = _eval_node(node, ins, graph.schema, params_map)
        except NodeEvalError:
            raise
        except Exception as e:
            raise NodeEvalError(nid, e) from e
        evaluations += 1
    if stats is not None:
        stats["node_evaluations"] = evaluations
    out = [n for n in graph.nodes if n.kind == "output"]
    if not out:
        raise GraphError("graph has no output node")
    return values[out[0].id]


# ---------------------------------------------------------------------------
# serialization

def graph_to_json(graph: ProgramGraph) -> str:
    nodes = []
    for n in graph.nodes:
        attrs = dict(n.attrs)
        if n.kind == "constant" and isinstance(attrs.get("value"), LabeledMesh):
            m = attrs["value"]
            attrs["value"] = {"__mesh__": True, "vertices": m.vertices.tolist(),
                              "faces": m.faces.tolist(), "face_part": list(m.face_part)}
        nodes.append({"id": n.id, "kind": n.kind, "attrs": attrs})
    doc = {"format": FORMAT_VERSION,
           "schema": graph.schema.to_json(),
           "nodes": nodes,
           "edges": [[e.source, e.target, e.port] for e in graph.edges]}
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def graph_from_json(text: str) -> ProgramGraph:
    doc = json.loads(text)
    if doc.get("format") != FORMAT_VERSION:
        raise GraphError(f"unsupported graph format {doc.get('format')!r}")
    schema = ParameterSchema.from_json(doc["schema"])
    nodes = []
    for nd in doc["nodes"]:
        attrs = dict(nd["attrs"])
        v = attrs.get("value")
        if isinstance(v, dict) and v.get("__mesh__"):
            attrs["value"] = LabeledMesh.create(v["vertices"], v["faces"], v["face_part"])
        nodes.append(OperationNode(nd["id"], nd["kind"], attrs))
    edges = [Edge(*e) for e in doc["edges"]]
    return ProgramGraph(nodes, edges, schema)


# ---------------------------------------------------------------------------
# construction helper

class GraphBuilder:
    """Fluent construction of program graphs.

    Methods return node ids; numeric arguments are promoted to shared
    constant nodes automatically.
    """

    def __init__(self, schema: ParameterSchema):
        self.schema = schema
        self.nodes: list[OperationNode] = []
        self.edges: list[Edge] = []
        self._counts: dict[str, int] = {}
        self._const_cache: dict = {}
        self._param_cache: dict[str, str] = {}

    def _new_id(self, kind: str) -> str:
        n = self._counts.get(kind, 0)
        self._counts[kind] = n + 1
        return f"{kind}_{n:03d}"

    def add(self, kind: str, inputs: dict[str, str] | None = None, **attrs) -> str:
        nid = self._new_id(kind)
        self.nodes.append(OperationNode(nid, kind, attrs))
        for port, src in (inputs or {}).items():
            self.edges.append(Edge(src, nid, port))
        return nid

    def _as_num(self, x) -> str:
        if isinstance(x, str):
            return x
        return self.const(float(x))

    def const(self, value) -> str:
        key = (type(value).__name__, repr(value))
        if key not in self._const_cache:
            self._const_cache[key] = self.add("constant", value=value)
        return self._const_cache[key]

    def param(self, name: str) -> str:
        if name not in self._param_cache:
            self._param_cache[name] = self.add("parameter-ref", name=name)
        return self._param_cache[name]

    def math(self, op: str, a, b=None, t=None, c=None) -> str:
        inputs = {"a": self._as_num(a)}
        if op == "where":
            inputs = {"c": c, "a": self._as_num(a), "b": self._as_num(b)}
        elif op == "lerp":
            inputs["b"] = self._as_num(b)
            inputs["t"] = self._as_num(t)
        elif op not in _MATH_UNARY:
            inputs["b"] = self._as_num(b)
        return self.add("math", inputs, op=op)

    def vec(self, x, y, z) -> str:
        return self.add("vector-op", {"x": self._as_num(x), "y": self._as_num(y),
                                      "z": self._as_num(z)}, op="make")

    def vop(self, op: str, inputs: dict[str, str], **attrs) -> str:
        return self.add("vector-op", inputs, op=op, **attrs)

    def component(self, v: str, index: int) -> str:
        return self.vop("component", {"v": v}, index=index)

    def vadd(self, a: str, b: str) -> str:
        return self.vop("add", {"a": a, "b": b})

    def vscale(self, v: str, s) -> str:
        return self.vop("scale", {"v": v, "s": self._as_num(s)})

    def curve(self, points: list[str], init_normal=None) -> str:
        attrs = {"points": len(points)}
        if init_normal is not None:
            attrs["init_normal"] = list(init_normal)
        return self.add("curve-builder", {f"p{i}": p for i, p in enumerate(points)}, **attrs)

    def profile(self, roundness, half_width, half_depth) -> str:
        return self.add("profile-builder", {"roundness": self._as_num(roundness),
                                            "half_width": self._as_num(half_width),
                                            "half_depth": self._as_num(half_depth)})

    def sample(self, curve: str, t) -> str:
        return self.add("sample-curve", {"curve": curve, "t": self._as_num(t)})

    def sweep(self, profile: str, path: str, scale, part: str,
              profile_samples: int = 16, path_samples: int = 32) -> str:
        kind, *vals = scale
        inputs = {"profile": profile, "path": path}
        for name, v in zip(_SCALE_PORTS[kind], vals):
            inputs[name] = self._as_num(v)
        return self.add("sweep", inputs, scale=kind, part=part,
                        profile_samples=profile_samples, path_samples=path_samples)

    def attach(self, element: str, anchor: str, target: str, fit_width=None) -> str:
        inputs = {"element": element, "anchor": anchor, "target": target}
        if fit_width is not None:
            inputs["fit_width"] = self._as_num(fit_width)
        return self.add("attach", inputs)

    def mirror_x(self, m: str) -> str:
        return self.add("mirror", {"m": m}, plane_point=[0.0, 0.0, 0.0],
                        plane_normal=[1.0, 0.0, 0.0])

    def replicate_z(self, m: str, count) -> str:
        return self.add("rotate-replicate", {"m": m, "count": self._as_num(count)},
                        axis_point=[0.0, 0.0, 0.0], axis_dir=[0.0, 0.0, 1.0])

    def join(self, *meshes: str) -> str:
        return self.add("join", {f"m{i}": m for i, m in enumerate(meshes)},
                        count=len(meshes))

    def switch(self, m: str, gate: str) -> str:
        return self.add("switch", {"m": m, "gate": gate})

    def tag(self, m: str, part: str) -> str:
        return self.add("part-tag", {"m": m}, part=part)

    def output(self, m: str) -> str:
        return self.add("output", {"m": m})

    def build(self) -> ProgramGraph:
        graph = ProgramGraph(self.nodes, self.edges, self.schema)
        report = validate(graph)
        if not report.ok:
            raise GraphError("graph failed validation:\n" + "\n".join(report.errors))
        return graph
