"""DAGs carrying a combinatorial strongly planar embedding.

An embedding is given purely by orders: at every vertex the incoming and
outgoing edges are listed bottom-to-top, and the sources and sinks are
listed bottom-to-top along the outer face.  Edges are understood to run
left to right, so the counterclockwise rotation at a vertex is its
out-edges bottom-to-top followed by its in-edges top-to-bottom.

Strong planarity is certified without coordinates: faces of the rotation
system are traced dart by dart, each component must satisfy Euler's
formula, and the angle count of Bertolazzi et al. for upward embeddings
must hold with the large angles sitting exactly at the left corner of each
source and the right corner of each sink.
"""

from __future__ import annotations

import heapq
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from .errors import StructuralError

NetflowVector = Mapping[str, int]


@dataclass(frozen=True)
class Vertex:
    id: str
    in_edges: tuple[str, ...]
    out_edges: tuple[str, ...]


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class EmbeddedDag:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    sources: tuple[str, ...]
    sinks: tuple[str, ...]

    @classmethod
    def build(
        cls,
        edges: Iterable[tuple[str, str, str]],
        sources: Sequence[str],
        sinks: Sequence[str],
        in_orders: Optional[Mapping[str, Sequence[str]]] = None,
        out_orders: Optional[Mapping[str, Sequence[str]]] = None,
        vertex_order: Optional[Sequence[str]] = None,
    ) -> "EmbeddedDag":
        """Assemble a dag from ``(id, tail, head)`` triples.

        Unless overridden per vertex, in- and out-edge orders follow the
        order in which edges are listed, so listing edges bottom-to-top is
        usually enough.
        """
        edges = [Edge(str(e), str(t), str(h)) for e, t, h in edges]
        ins: dict[str, list[str]] = defaultdict(list)
        outs: dict[str, list[str]] = defaultdict(list)
        order: list[str] = list(vertex_order or [])
        seen = set(order)
        for e in edges:
            outs[e.tail].append(e.id)
            ins[e.head].append(e.id)
            for v in (e.tail, e.head):
                if v not in seen:
                    seen.add(v)
                    order.append(v)
        for v, seq in (in_orders or {}).items():
            ins[v] = list(seq)
        for v, seq in (out_orders or {}).items():
            outs[v] = list(seq)
        vertices = tuple(Vertex(v, tuple(ins[v]), tuple(outs[v])) for v in order)
        return cls(vertices, tuple(edges), tuple(sources), tuple(sinks))

    @cached_property
    def vertex(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def edge(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @cached_property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def out_pos(self) -> dict[str, int]:
        """Position of each edge among its tail's out-edges (0 = bottom)."""
        return {e: k for v in self.vertices for k, e in enumerate(v.out_edges)}

    @cached_property
    def in_pos(self) -> dict[str, int]:
        return {e: k for v in self.vertices for k, e in enumerate(v.in_edges)}

    @cached_property
    def source_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.sources)}

    @cached_property
    def sink_index(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.sinks)}

    @cached_property
    def memo(self) -> dict:
        """Scratch space where other modules cache data derived from this dag."""
        return {}

    @property
    def m(self) -> int:
        return len(self.sources)

    @cached_property
    def topological_order(self) -> tuple[str, ...]:
        """Kahn order, ties broken by vertex listing order."""
        verts = self.vertices
        rank = {v.id: i for i, v in enumerate(verts)}
        head = {e.id: rank[e.head] for e in self.edges}
        indeg = [len(v.in_edges) for v in verts]
        ready = [i for i, d in enumerate(indeg) if d == 0]
        out: list[str] = []
        while ready:
            i = heapq.heappop(ready)
            out.append(verts[i].id)
            for e in verts[i].out_edges:
                h = head[e]
                indeg[h] -= 1
                if indeg[h] == 0:
                    heapq.heappush(ready, h)
        if len(out) != len(verts):
            raise StructuralError("graph has a directed cycle")
        return tuple(out)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[tuple[str, str], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {rule for rule, _ in self.violations}

    def __bool__(self) -> bool:
        return self.ok


def derive_rotation_system(dag: EmbeddedDag) -> dict[str, tuple[str, ...]]:
    """Counterclockwise cyclic edge order at every vertex."""
    _check_partition(dag, raise_on_error=True)
    return _rotation(dag)


def _rotation(dag: EmbeddedDag) -> dict[str, tuple[str, ...]]:
    return {v.id: v.out_edges + v.in_edges[::-1] for v in dag.vertices}


def _incidence_matches(dag: EmbeddedDag) -> bool:
    ins: list[tuple[str, str]] = []
    outs: list[tuple[str, str]] = []
    for v in dag.vertices:
        vid = v.id
        ins += [(e, vid) for e in v.in_edges]
        outs += [(e, vid) for e in v.out_edges]
    edges = dag.edges
    if len(ins) != len(edges) or len(outs) != len(edges):
        return False
    return set(ins) == {(e.id, e.head) for e in edges} and set(outs) == {(e.id, e.tail) for e in edges}


def _check_partition(dag: EmbeddedDag, raise_on_error: bool = False) -> list[tuple[str, str]]:
    problems: list[tuple[str, str]] = []
    vids = [v.id for v in dag.vertices]
    eids = [e.id for e in dag.edges]
    if len(set(vids)) != len(vids):
        problems.append(("ids", "duplicate vertex ids"))
    if len(set(eids)) != len(eids):
        problems.append(("ids", "duplicate edge ids"))
    vset = set(vids)
    for e in dag.edges:
        if e.tail not in vset or e.head not in vset:
            problems.append(("ids", f"edge {e.id} has an unknown endpoint"))
        elif e.tail == e.head:
            problems.append(("acyclic", f"edge {e.id} is a loop"))
    if not problems and _incidence_matches(dag):
        return problems
    if not problems:
        expect_in: dict[str, list[str]] = defaultdict(list)
        expect_out: dict[str, list[str]] = defaultdict(list)
        for e in dag.edges:
            expect_out[e.tail].append(e.id)
            expect_in[e.head].append(e.id)
        for v in dag.vertices:
            ins, outs = expect_in[v.id], expect_out[v.id]
            if len(v.in_edges) != len(ins) or set(v.in_edges) != set(ins):
                problems.append(("partition", f"in-edges of {v.id} disagree with edge heads"))
            if len(v.out_edges) != len(outs) or set(v.out_edges) != set(outs):
                problems.append(("partition", f"out-edges of {v.id} disagree with edge tails"))
    if problems and raise_on_error:
        raise StructuralError("; ".join(d for _, d in problems))
    return problems


@dataclass
class FaceStructure:
    """Faces of the rotation system, grouped by connected component.

    A corner ``(v, k)`` is the angle at ``v`` swept counterclockwise from
    ``rotation[v][k]`` to ``rotation[v][k + 1]``.
    """

    rotation: dict[str, tuple[str, ...]]
    faces: list[list[tuple[str, int]]]
    face_of_corner: dict[tuple[str, int], int]
    components: list[list[str]]
    component_of: dict[str, int]
    component_faces: list[list[int]]
    outer_face: list[int] = field(default_factory=list)

    def large_corner(self, v: str) -> tuple[str, int]:
        return (v, len(self.rotation[v]) - 1)

    def corners_on_outer_face(self, v: str) -> list[int]:
        outer = self.outer_face[self.component_of[v]]
        return [k for k in range(len(self.rotation[v])) if self.face_of_corner[(v, k)] == outer]


def trace_faces(dag: EmbeddedDag, checked: bool = False) -> FaceStructure:
    rotation = _rotation(dag) if checked else derive_rotation_system(dag)
    index = dag.edge_index
    tails = [e.tail for e in dag.edges]
    # dart 2i runs along edge i tail->head, dart 2i+1 head->tail
    nxt = [0] * (2 * len(tails))
    corner_of = [None] * (2 * len(tails))
    for v, rot in rotation.items():
        deg = len(rot)
        ids = [index[e] for e in rot]
        for k, i in enumerate(ids):
            arriving = 2 * i + (tails[i] == v)
            j = ids[(k + 1) % deg]
            nxt[arriving] = 2 * j + (tails[j] != v)
            corner_of[arriving] = (v, k)

    faces: list[list[tuple[str, int]]] = []
    face_of_corner: dict[tuple[str, int], int] = {}
    seen = [False] * len(nxt)
    for d0 in range(len(nxt)):
        if seen[d0]:
            continue
        fi = len(faces)
        corners = []
        d = d0
        while not seen[d]:
            seen[d] = True
            c = corner_of[d]
            corners.append(c)
            face_of_corner[c] = fi
            d = nxt[d]
        faces.append(corners)

    parent = {v: v for v in dag.vertex_ids}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in dag.edges:
        parent[find(e.tail)] = find(e.head)
    groups: dict[str, list[str]] = defaultdict(list)
    for v in dag.vertex_ids:
        groups[find(v)].append(v)
    comps = list(groups.values())
    component_of = {v: i for i, c in enumerate(comps) for v in c}
    comp_faces: list[list[int]] = [[] for _ in comps]
    for i, corners in enumerate(faces):
        comp_faces[component_of[corners[0][0]]].append(i)

    fs = FaceStructure(rotation, faces, face_of_corner, comps, component_of, comp_faces)
    terminals = [v for v in dag.sources if v in rotation] + [v for v in dag.sinks if v in rotation]
    for ci, comp in enumerate(comps):
        members = set(comp)
        chosen = None
        for v in terminals:
            if v in members and rotation[v]:
                chosen = face_of_corner[fs.large_corner(v)]
                break
        if chosen is None:
            chosen = comp_faces[ci][0] if comp_faces[ci] else -1
        fs.outer_face.append(chosen)
    return fs


def _is_switch(dag: EmbeddedDag, rotation, corner: tuple[str, int]) -> bool:
    v, k = corner
    rot = rotation[v]
    a, b = rot[k], rot[(k + 1) % len(rot)]
    ea, eb = dag.edge[a], dag.edge[b]
    return (ea.tail == v) == (eb.tail == v)


def validate_strong_planarity(dag: EmbeddedDag) -> ValidationReport:
    """Report every violated rule of a strongly planar embedding."""
    problems = _check_partition(dag)
    if problems:
        return ValidationReport(tuple(problems))

    for v in dag.vertices:
        if not v.in_edges and not v.out_edges:
            problems.append(("isolated", f"vertex {v.id} has no incident edge"))

    try:
        dag.topological_order
    except StructuralError:
        problems.append(("acyclic", "graph has a directed cycle"))

    true_sources = [v.id for v in dag.vertices if not v.in_edges and v.out_edges]
    true_sinks = [v.id for v in dag.vertices if not v.out_edges and v.in_edges]
    if len(set(dag.sources)) != len(dag.sources) or set(dag.sources) != set(true_sources):
        problems.append(("sources", "sources list is not exactly the vertices without in-edges"))
    if len(set(dag.sinks)) != len(dag.sinks) or set(dag.sinks) != set(true_sinks):
        problems.append(("sinks", "sinks list is not exactly the vertices without out-edges"))
    if problems:
        return ValidationReport(tuple(problems))

    problems = _euler_violations(dag)
    if problems:
        return ValidationReport(tuple(problems))

    fs = trace_faces(dag, checked=True)
    rotation = fs.rotation

    src_comp = [fs.component_of[s] for s in dag.sources]
    snk_comp = [fs.component_of[t] for t in dag.sinks]
    for ci, comp in enumerate(fs.components):
        members = set(comp)
        srcs = [s for s in dag.sources if s in members]
        snks = [t for t in dag.sinks if t in members]
        outer = fs.outer_face[ci]
        large = {fs.large_corner(v) for v in srcs + snks}
        off = [v for v, _ in large if fs.face_of_corner[(v, len(rotation[v]) - 1)] != outer]
        if off:
            problems.append((
                "outer-face",
                f"terminals {sorted(off)} are not on the outer face of component {ci}",
            ))
            continue
        for fi in fs.component_faces[ci]:
            switches = sum(_is_switch(dag, rotation, cr) for cr in fs.faces[fi])
            want = 2 * (len(large) - 1) if fi == outer else 2
            if switches != want:
                kind = "outer" if fi == outer else "inner"
                problems.append((
                    "upward",
                    f"{kind} face {fi} has {switches} switches, an upward embedding needs {want}",
                ))
        seq = [cr[0] for cr in fs.faces[outer] if cr in large]
        expected = snks + srcs[::-1]
        if not _is_cyclic_rotation(seq, expected):
            problems.append((
                "outer-order",
                f"terminals of component {ci} appear as {seq} along the outer face, "
                f"expected a rotation of {expected}",
            ))

    if not (_blocks(src_comp) and _blocks(snk_comp) and _dedup(src_comp) == _dedup(snk_comp)):
        problems.append((
            "outer-order",
            "components must occupy contiguous, identically ordered blocks of sources and sinks",
        ))
    return ValidationReport(tuple(problems))


def _euler_violations(dag: EmbeddedDag) -> list[tuple[str, str]]:
    """Face counts per component against Euler's formula, on integer darts."""
    edges = dag.edges
    index = {e.id: i for i, e in enumerate(edges)}
    vidx = {v.id: i for i, v in enumerate(dag.vertices)}
    tails = [vidx[e.tail] for e in edges]
    heads = [vidx[e.head] for e in edges]
    # dart 2i + 1 is edge i seen from its tail, 2i from its head
    nxt = [0] * (2 * len(edges))
    for vert in dag.vertices:
        ds = [2 * index[e] + 1 for e in vert.out_edges] + [2 * index[e] for e in reversed(vert.in_edges)]
        for a, b in zip(ds, ds[1:] + ds[:1]):
            nxt[a] = b ^ 1

    parent = list(range(len(vidx)))
    for t, h in zip(tails, heads):
        while parent[t] != t:
            t = parent[t]
        while parent[h] != h:
            h = parent[h]
        parent[t] = h
    root = []
    for v in range(len(parent)):
        while parent[v] != v:
            v = parent[v]
        root.append(v)

    seen = bytearray(len(nxt))
    face_roots = []
    for d0 in range(len(nxt)):
        if seen[d0]:
            continue
        face_roots.append(root[tails[d0 >> 1]])
        d = d0
        while not seen[d]:
            seen[d] = 1
            d = nxt[d]

    # genus is nonnegative per component, so the totals agree only if every component is planar
    roots = list(dict.fromkeys(root))
    if len(face_roots) == len(edges) - len(root) + 2 * len(roots):
        return []
    n_vertices = Counter(root)
    n_edges = Counter(root[t] for t in tails)
    n_faces = Counter(face_roots)
    problems = []
    for ci, r in enumerate(roots):
        need = n_edges[r] - n_vertices[r] + 2
        if n_faces[r] != need:
            problems.append(("euler", f"component {ci} traces {n_faces[r]} faces, planarity needs {need}"))
    return problems


def _is_cyclic_rotation(seq: list, expected: list) -> bool:
    if len(seq) != len(expected):
        return False
    if not seq:
        return True
    n = len(seq)
    return any(seq[i:] + seq[:i] == expected for i in range(n))


def _dedup(xs: list) -> list:
    out = []
    for x in xs:
        if not out or out[-1] != x:
            out.append(x)
    return out


def _blocks(xs: list) -> bool:
    d = _dedup(xs)
    return len(d) == len(set(d))


def unit_netflow(dag: EmbeddedDag) -> dict[str, int]:
    src, snk = set(dag.sources), set(dag.sinks)
    return {v: 1 if v in src else -1 if v in snk else 0 for v in dag.vertex_ids}


def flow_feasible(dag: EmbeddedDag, a: NetflowVector) -> bool:
    """Transshipment feasibility with unbounded edge capacities."""
    g = nx.DiGraph()
    top, bottom = ("super", "source"), ("super", "sink")
    g.add_node(top)
    g.add_node(bottom)
    g.add_nodes_from(dag.vertex_ids)
    for e in dag.edges:
        g.add_edge(e.tail, e.head)
    supply = 0
    for v, x in a.items():
        if x > 0:
            g.add_edge(top, v, capacity=x)
            supply += x
        elif x < 0:
            g.add_edge(v, bottom, capacity=-x)
    demand = -sum(x for x in a.values() if x < 0)
    if supply != demand:
        return False
    if supply == 0:
        return True
    return nx.maximum_flow_value(g, top, bottom) == supply


def check_nondegenerate(dag: EmbeddedDag, a: NetflowVector) -> ValidationReport:
    problems: list[tuple[str, str]] = []
    if set(a) != set(dag.vertex_ids):
        problems.append(("domain", "netflow must be defined on exactly the vertex set"))
        return ValidationReport(tuple(problems))
    for s in dag.sources:
        if a[s] <= 0:
            problems.append(("source-sign", f"source {s} has netflow {a[s]} <= 0"))
    for t in dag.sinks:
        if a[t] >= 0:
            problems.append(("sink-sign", f"sink {t} has netflow {a[t]} >= 0"))
    total = sum(a.values())
    if total != 0:
        problems.append(("sum", f"netflow sums to {total}, not 0"))
    elif not flow_feasible(dag, a):
        problems.append(("feasible", "no nonnegative flow has this netflow"))
    try:
        fs = trace_faces(dag)
    except StructuralError as exc:
        problems.append(("partition", str(exc)))
    else:
        for v, x in a.items():
            if x != 0 and not fs.corners_on_outer_face(v):
                problems.append(("outer-face", f"vertex {v} has netflow {x} but is interior"))
    return ValidationReport(tuple(problems))


def is_balanced(dag: EmbeddedDag) -> bool:
    return validate_strong_planarity(dag).ok and check_nondegenerate(dag, unit_netflow(dag)).ok


def terminal_order(dag: EmbeddedDag, outer_hint: Mapping[int, str]) -> tuple[list[str], list[str]]:
    """Read source and sink orders off the outer faces.

    ``dag`` may carry placeholder source/sink lists.  For every component,
    ``outer_hint`` names a vertex of degree one whose single corner lies on
    that component's outer face.  Components are stacked in ascending key
    order of ``outer_hint``.
    """
    fs = trace_faces(dag)
    sources: list[str] = []
    sinks: list[str] = []
    for _, v in sorted(outer_hint.items()):
        face = fs.face_of_corner[(v, 0)]
        seq = []
        for x, k in fs.faces[face]:
            vx = dag.vertex[x]
            if (not vx.in_edges or not vx.out_edges) and k == len(fs.rotation[x]) - 1:
                seq.append(x)
        # cyclic pattern is sinks bottom-to-top then sources top-to-bottom
        n = len(seq)
        is_sink = [not dag.vertex[x].out_edges for x in seq]
        start = next(i for i in range(n) if is_sink[i] and not is_sink[i - 1])
        seq = seq[start:] + seq[:start]
        k = sum(is_sink)
        sinks.extend(seq[:k])
        sources.extend(reversed(seq[k:]))
    return sources, sinks
