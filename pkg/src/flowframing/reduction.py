"""Decontraction to the balanced case and the two-point extension.

Decontraction splits a netflow ``a_i`` into ``|a_i|`` unit sources (or
sinks) hanging off vertex ``i``.  The two-point extension adds a common
source and sink so that one-source-one-sink results apply.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .embedded_dag import (
    EmbeddedDag,
    Edge,
    Vertex,
    check_nondegenerate,
    is_balanced,
    terminal_order,
    trace_faces,
    unit_netflow,
    validate_strong_planarity,
)
from .errors import InternalInvariantViolated, InvalidInput
from .routes import Route, is_route

FlowVector = dict[str, Fraction]


class Placement(enum.Enum):
    BELOW = "below"
    ABOVE = "above"


@dataclass(frozen=True)
class ReductionMap:
    original: EmbeddedDag
    netflow: tuple[tuple[str, int], ...]
    reduced: EmbeddedDag
    decontracted_vertices: tuple[tuple[tuple[str, int], str], ...]
    decontracted_edges: frozenset[str]

    @property
    def a(self) -> dict[str, int]:
        return dict(self.netflow)


@dataclass(frozen=True)
class TwoPointExtension:
    base: EmbeddedDag
    extended: EmbeddedDag
    zero_vertex: str
    one_vertex: str
    source_edges: tuple[str, ...]
    sink_edges: tuple[str, ...]

    @property
    def extension_edges(self) -> frozenset[str]:
        return frozenset(self.source_edges + self.sink_edges)


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def _outer_positions(dag: EmbeddedDag, fs, v: str, incoming: bool) -> list[int]:
    """Insertion positions in v's in- (or out-) list whose corner is outer."""
    vert = dag.vertex[v]
    r, q = len(vert.out_edges), len(vert.in_edges)
    deg = r + q
    outer = set(fs.corners_on_outer_face(v))
    if incoming:
        return [p for p in range(q + 1) if (r + q - 1 - p) % deg in outer]
    return [p for p in range(r + 1) if (p - 1) % deg in outer]


def decontract(
    dag: EmbeddedDag, a: Mapping[str, int], placement: Placement = Placement.BELOW
) -> ReductionMap:
    """Hang ``|a_i|`` unit sources/sinks off every vertex with nonzero netflow.

    The new edges are inserted as one consecutive block at the lowest
    (``BELOW``) or highest (``ABOVE``) position of the vertex's in- or
    out-list whose corner lies on the outer face.
    """
    report = validate_strong_planarity(dag)
    if not report.ok:
        raise InvalidInput(f"not strongly planar: {report.violations}")
    report = check_nondegenerate(dag, a)
    if not report.ok:
        raise InvalidInput(f"netflow is degenerate: {report.violations}")

    fs = trace_faces(dag)
    taken = set(dag.vertex_ids) | set(dag.edge_ids)
    ins = {v.id: list(v.in_edges) for v in dag.vertices}
    outs = {v.id: list(v.out_edges) for v in dag.vertices}
    edges = list(dag.edges)
    order = list(dag.vertex_ids)
    new_vertices: list[Vertex] = []
    mapping: list[tuple[tuple[str, int], str]] = []
    new_edges: set[str] = set()

    for v in dag.vertex_ids:
        x = a[v]
        if x == 0:
            continue
        positions = _outer_positions(dag, fs, v, incoming=x > 0)
        if not positions:
            raise InternalInvariantViolated(f"no outer corner at {v}")
        p = positions[0] if placement is Placement.BELOW else positions[-1]
        block = []
        for j in range(1, abs(x) + 1):
            u = _fresh(f"{v}.{j}", taken)
            e = _fresh(f"{v}.{j}:e", taken)
            mapping.append(((v, j), u))
            new_edges.add(e)
            block.append(e)
            if x > 0:
                edges.append(Edge(e, u, v))
                new_vertices.append(Vertex(u, (), (e,)))
            else:
                edges.append(Edge(e, v, u))
                new_vertices.append(Vertex(u, (e,), ()))
        target = ins if x > 0 else outs
        target[v][p:p] = block

    vertices = tuple(Vertex(v, tuple(ins[v]), tuple(outs[v])) for v in order) + tuple(new_vertices)
    provisional = EmbeddedDag(
        vertices,
        tuple(edges),
        tuple(w.id for w in vertices if not w.in_edges),
        tuple(w.id for w in vertices if not w.out_edges),
    )
    # every component keeps an original source, which now carries new sources
    first_new = {}
    for (v, j), u in mapping:
        if j == 1 and v in dag.source_index:
            first_new[dag.source_index[v]] = u
    comp_of = trace_faces(provisional).component_of
    hint: dict[int, str] = {}
    seen_components = set()
    for key, u in sorted(first_new.items()):
        c = comp_of[u]
        if c not in seen_components:
            seen_components.add(c)
            hint[key] = u
    sources, sinks = terminal_order(provisional, hint)
    reduced = EmbeddedDag(vertices, tuple(edges), tuple(sources), tuple(sinks))
    if not is_balanced(reduced):
        raise InternalInvariantViolated(
            f"decontraction broke strong planarity: {validate_strong_planarity(reduced).violations}"
        )
    return ReductionMap(
        dag, tuple((v, a[v]) for v in dag.vertex_ids), reduced, tuple(mapping), frozenset(new_edges)
    )


def _check_flow(dag: EmbeddedDag, f: Mapping[str, object], a: Mapping[str, object]) -> FlowVector:
    if set(f) != set(dag.edge_ids):
        raise InvalidInput("flow must be defined on exactly the edge set")
    flow = {e: Fraction(x) for e, x in f.items()}
    if any(x < 0 for x in flow.values()):
        raise InvalidInput("flow has a negative entry")
    for vert in dag.vertices:
        net = sum(flow[e] for e in vert.out_edges) - sum(flow[e] for e in vert.in_edges)
        if net != Fraction(a.get(vert.id, 0)):
            raise InvalidInput(f"flow violates conservation at {vert.id}")
    return flow


def restrict_flow(rmap: ReductionMap, f: Mapping[str, object]) -> FlowVector:
    """Unit flow on the reduced dag -> a-flow on the original."""
    _check_flow(rmap.reduced, f, unit_netflow(rmap.reduced))
    return {e: Fraction(f[e]) for e in rmap.original.edge_ids}


def lift_flow(rmap: ReductionMap, f: Mapping[str, object]) -> FlowVector:
    """a-flow on the original -> unit flow on the reduced dag."""
    flow = _check_flow(rmap.original, f, rmap.a)
    out = dict(flow)
    for e in rmap.decontracted_edges:
        out[e] = Fraction(1)
    return {e: out[e] for e in rmap.reduced.edge_ids}


def two_point_extend(dag: EmbeddedDag) -> TwoPointExtension:
    """Add a common source below-left of everything and a common sink.

    Cached on the dag, since layering code calls it repeatedly.
    """
    hit = dag.memo.get("two_point")
    if hit is not None:
        return hit
    if not is_balanced(dag):
        raise InvalidInput("two-point extension needs a strongly planar balanced dag")
    taken = set(dag.vertex_ids) | set(dag.edge_ids)
    zero, one = _fresh("0^", taken), _fresh("1^", taken)
    src_edges = tuple(_fresh(f"0^>{s}", taken) for s in dag.sources)
    snk_edges = tuple(_fresh(f"{t}>1^", taken) for t in dag.sinks)
    in_new = dict(zip(dag.sources, src_edges))
    out_new = dict(zip(dag.sinks, snk_edges))
    vertices = [Vertex(zero, (), src_edges)]
    for v in dag.vertices:
        ins = (in_new[v.id],) if v.id in in_new else v.in_edges
        outs = (out_new[v.id],) if v.id in out_new else v.out_edges
        vertices.append(Vertex(v.id, ins, outs))
    vertices.append(Vertex(one, snk_edges, ()))
    edges = (
        tuple(Edge(e, zero, s) for e, s in zip(src_edges, dag.sources))
        + dag.edges
        + tuple(Edge(e, t, one) for e, t in zip(snk_edges, dag.sinks))
    )
    ext = EmbeddedDag(tuple(vertices), edges, (zero,), (one,))
    report = validate_strong_planarity(ext)
    if not report.ok:
        raise InternalInvariantViolated(f"two-point extension is not strongly planar: {report.violations}")
    result = TwoPointExtension(dag, ext, zero, one, src_edges, snk_edges)
    dag.memo["two_point"] = result
    return result


def flow_strength(dag: EmbeddedDag, f: Mapping[str, object]) -> Fraction:
    """Strength S of a flow with netflow S times the unit netflow (checked)."""
    flow = {e: Fraction(x) for e, x in f.items()}
    if set(flow) != set(dag.edge_ids):
        raise InvalidInput("flow must be defined on exactly the edge set")
    if any(x < 0 for x in flow.values()):
        raise InvalidInput("flow has a negative entry")
    strength = None
    for vert in dag.vertices:
        net = sum(flow[e] for e in vert.out_edges) - sum(flow[e] for e in vert.in_edges)
        if not vert.in_edges:
            want = net
        elif not vert.out_edges:
            want = -net
        else:
            if net != 0:
                raise InvalidInput(f"flow violates conservation at {vert.id}")
            continue
        if strength is None:
            strength = want
        elif want != strength:
            raise InvalidInput("flow is not a multiple of the unit netflow")
    return strength if strength is not None else Fraction(0)


def hat_flow(ext: TwoPointExtension, f: Mapping[str, object]) -> FlowVector:
    strength = flow_strength(ext.base, f)
    out = {e: Fraction(f[e]) for e in ext.base.edge_ids}
    for e in ext.source_edges + ext.sink_edges:
        out[e] = strength
    return {e: out[e] for e in ext.extended.edge_ids}


def unhat_flow(ext: TwoPointExtension, f: Mapping[str, object]) -> FlowVector:
    values = {Fraction(f[e]) for e in ext.source_edges + ext.sink_edges}
    if len(values) > 1:
        raise InvalidInput("flow is not layered: extension edges disagree")
    return {e: Fraction(f[e]) for e in ext.base.edge_ids}


def hat_route(ext: TwoPointExtension, p: Sequence[str]) -> Route:
    if not is_route(ext.base, p):
        raise InvalidInput(f"{tuple(p)} is not a route")
    base = ext.base
    i = base.source_index[base.edge[p[0]].tail]
    j = base.sink_index[base.edge[p[-1]].head]
    return (ext.source_edges[i],) + tuple(p) + (ext.sink_edges[j],)


def unhat_route(ext: TwoPointExtension, p: Sequence[str]) -> Route:
    if not is_route(ext.extended, p) or len(p) < 3:
        raise InvalidInput(f"{tuple(p)} is not a route of the extension")
    return tuple(p[1:-1])
