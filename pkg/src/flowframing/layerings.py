"""Layerings, their bijection with integer unit flows, and layering-cliques.

A layering is a tuple of routes whose i-th entry runs from the i-th
source to the i-th sink (0-based).  Flows are dicts edge id -> value.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import lcm
from typing import Iterator, Mapping, Sequence

import networkx as nx

from .embedded_dag import EmbeddedDag, is_balanced
from .errors import InternalInvariantViolated, InvalidInput, LimitExceeded
from .lattice import rank
from .reduction import flow_strength, hat_flow, two_point_extend, unhat_route
from .routes import DEFAULT_LIMIT, Route, are_compatible, cmp_post, dkk_decompose

Layering = tuple[Route, ...]


class Relation(enum.Enum):
    BELOW = "below"
    EQUAL = "equal"
    ABOVE = "above"
    INCOMPATIBLE = "incompatible"


@dataclass(frozen=True)
class LayeringClique:
    """Layerings in increasing chain order."""

    layerings: tuple[Layering, ...]

    def __len__(self) -> int:
        return len(self.layerings)

    def __iter__(self):
        return iter(self.layerings)

    def routes(self) -> set[Route]:
        return {r for p in self.layerings for r in p}


@dataclass(frozen=True)
class LayeringDecomposition:
    terms: tuple[tuple[Layering, Fraction], ...]

    @property
    def layerings(self) -> tuple[Layering, ...]:
        return tuple(p for p, _ in self.terms)

    def flow(self, dag: EmbeddedDag) -> dict[str, Fraction]:
        out = {e: Fraction(0) for e in dag.edge_ids}
        for p, c in self.terms:
            for r in p:
                for e in r:
                    out[e] += c
        return out


def J(layering: Layering, dag: EmbeddedDag) -> dict[str, int]:
    out = dict.fromkeys(dag.edge_ids, 0)
    for r in layering:
        for e in r:
            out[e] += 1
    return out


def J_vector(layering: Layering, dag: EmbeddedDag) -> tuple[int, ...]:
    f = J(layering, dag)
    return tuple(f[e] for e in dag.edge_ids)


def is_layering(dag: EmbeddedDag, p: Sequence[Route]) -> bool:
    from .routes import horizontal_index, is_route

    if len(p) != dag.m:
        return False
    for i, r in enumerate(p):
        if not is_route(dag, r) or horizontal_index(dag, r) != i:
            return False
    return all(are_compatible(dag, a, b) for i, a in enumerate(p) for b in p[i + 1:])


def integer_unit_flows(dag: EmbeddedDag, strength: int = 1) -> Iterator[dict[str, int]]:
    """Integer flows of the given strength, by DFS over vertices in topological order."""
    vertex = dag.vertex
    src, snk = set(dag.sources), set(dag.sinks)
    order = dag.topological_order
    flow: dict[str, int] = {}

    def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
        if parts == 1:
            yield (total,)
            return
        for x in range(total + 1):
            for rest in compositions(total - x, parts - 1):
                yield (x,) + rest

    def rec(k: int) -> Iterator[dict[str, int]]:
        if k == len(order):
            yield dict(flow)
            return
        v = order[k]
        vert = vertex[v]
        inflow = sum(flow[e] for e in vert.in_edges) + (strength if v in src else 0)
        if v in snk:
            if inflow == strength:
                yield from rec(k + 1)
            return
        for comp in compositions(inflow, len(vert.out_edges)):
            for e, x in zip(vert.out_edges, comp):
                flow[e] = x
            yield from rec(k + 1)
        for e in vert.out_edges:
            flow.pop(e, None)

    yield from rec(0)


def J_inverse(dag: EmbeddedDag, f: Mapping[str, object]) -> Layering:
    """The unique layering whose indicator is the integer unit flow ``f``."""
    if flow_strength(dag, f) != 1 or any(Fraction(x).denominator != 1 for x in f.values()):
        raise InvalidInput("not an integer unit flow")
    ext = two_point_extend(dag)
    dec = dkk_decompose(ext.extended, hat_flow(ext, f))
    routes: list[Route | None] = [None] * dag.m
    for r, c in dec.terms:
        base = unhat_route(ext, r)
        i = dag.source_index[dag.edge[base[0]].tail]
        if c != 1 or routes[i] is not None or dag.sink_index[dag.edge[base[-1]].head] != i:
            raise InternalInvariantViolated("layered flow decomposed into non-horizontal routes")
        routes[i] = base
    if any(r is None for r in routes):
        raise InternalInvariantViolated("layered flow missed a source")
    return tuple(routes)  # type: ignore[arg-type]


def enumerate_layerings(dag: EmbeddedDag, limit: int = DEFAULT_LIMIT) -> list[Layering]:
    """All layerings, ascending in the post-source order."""
    key = ("layerings", limit)
    if key in dag.memo:
        return dag.memo[key]
    if not is_balanced(dag):
        raise InvalidInput("layerings need a strongly planar balanced dag")
    out = []
    for f in integer_unit_flows(dag):
        if len(out) >= limit:
            raise LimitExceeded(f"more than {limit} layerings")
        out.append(J_inverse(dag, f))
    out.sort(key=cmp_to_key(lambda p, q: cmp_post_source(dag, p, q)))
    dag.memo[key] = out
    return out


def route_compatible(dag: EmbeddedDag, p: Layering, q: Layering) -> bool:
    return all(are_compatible(dag, a, b) for a in p for b in q)


def cmp_layerings(dag: EmbeddedDag, p: Layering, q: Layering) -> Relation:
    if p == q:
        return Relation.EQUAL
    if not route_compatible(dag, p, q):
        return Relation.INCOMPATIBLE
    signs = {cmp_post(dag, dag.sources[i], a, b) for i, (a, b) in enumerate(zip(p, q))}
    if 1 not in signs:
        return Relation.BELOW
    if -1 not in signs:
        return Relation.ABOVE
    return Relation.INCOMPATIBLE


def layerings_compatible(dag: EmbeddedDag, p: Layering, q: Layering) -> bool:
    return cmp_layerings(dag, p, q) is not Relation.INCOMPATIBLE


def cmp_post_source(dag: EmbeddedDag, p: Layering, q: Layering) -> int:
    """Total order on layerings, decided at the largest differing source index."""
    for i in reversed(range(len(p))):
        if p[i] != q[i]:
            return cmp_post(dag, dag.sources[i], p[i], q[i])
    return 0


def cmp_post_source_cliques(dag: EmbeddedDag, K: LayeringClique, L: LayeringClique) -> int:
    if len(K) != len(L):
        raise InvalidInput("cliques of different sizes are not compared")
    for p, q in zip(reversed(K.layerings), reversed(L.layerings)):
        if p != q:
            return cmp_post_source(dag, p, q)
    return 0


def chain_sorted(dag: EmbeddedDag, layerings: Sequence[Layering]) -> tuple[Layering, ...]:
    """Sort pairwise compatible layerings by the layering order."""
    def cmp(p: Layering, q: Layering) -> int:
        rel = cmp_layerings(dag, p, q)
        if rel is Relation.INCOMPATIBLE:
            raise InvalidInput("layerings are not pairwise compatible")
        return {Relation.BELOW: -1, Relation.EQUAL: 0, Relation.ABOVE: 1}[rel]

    return tuple(sorted(layerings, key=cmp_to_key(cmp)))


def polytope_dimension(dag: EmbeddedDag, limit: int = DEFAULT_LIMIT) -> int:
    layerings = enumerate_layerings(dag, limit)
    vecs = [J_vector(p, dag) for p in layerings]
    return rank([[a - b for a, b in zip(v, vecs[0])] for v in vecs[1:]])


def compatibility_graph(dag: EmbeddedDag, layerings: Sequence[Layering]) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(len(layerings)))
    for i, p in enumerate(layerings):
        for j in range(i + 1, len(layerings)):
            if layerings_compatible(dag, p, layerings[j]):
                g.add_edge(i, j)
    return g


def enumerate_maximal_layering_cliques(dag: EmbeddedDag, limit: int = DEFAULT_LIMIT) -> list[LayeringClique]:
    """Maximal cliques of the layering-compatibility graph, ascending in post-source order."""
    key = ("cliques", limit)
    if key in dag.memo:
        return dag.memo[key]
    layerings = enumerate_layerings(dag, limit)
    d = polytope_dimension(dag, limit)
    g = compatibility_graph(dag, layerings)
    cliques = []
    for members in nx.find_cliques(g):
        if len(cliques) >= limit:
            raise LimitExceeded(f"more than {limit} maximal cliques")
        if len(members) != d + 1:
            raise InternalInvariantViolated(
                f"maximal layering-clique of size {len(members)} in dimension {d}"
            )
        cliques.append(LayeringClique(chain_sorted(dag, [layerings[i] for i in members])))
    cliques.sort(key=cmp_to_key(lambda K, L: cmp_post_source_cliques(dag, K, L)))
    dag.memo[key] = cliques
    return cliques


def decompose_flow(dag: EmbeddedDag, f: Mapping[str, object]) -> LayeringDecomposition:
    """Unique positive layering-clique combination of a nonnegative rational flow."""
    try:
        flow = {e: Fraction(x) for e, x in f.items()}
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"flow values must be rational: {exc}") from None
    strength = flow_strength(dag, flow)
    if strength == 0:
        return LayeringDecomposition(())
    scale = lcm(*(x.denominator for x in flow.values()))
    scaled = {e: int(x * scale) for e, x in flow.items()}
    s_int = int(strength * scale)
    ext = two_point_extend(dag)
    dec = dkk_decompose(ext.extended, hat_flow(ext, scaled))

    by_source: list[list[Route]] = [[] for _ in range(dag.m)]
    for r, c in dec.terms:
        base = unhat_route(ext, r)
        i = dag.source_index[dag.edge[base[0]].tail]
        if dag.sink_index[dag.edge[base[-1]].head] != i:
            raise InternalInvariantViolated("layered flow decomposed into non-horizontal routes")
        by_source[i].extend([base] * int(c))
    for i, rs in enumerate(by_source):
        if len(rs) != s_int:
            raise InternalInvariantViolated(f"source {i} carries {len(rs)} units, expected {s_int}")
        rs.sort(key=cmp_to_key(lambda a, b, i=i: cmp_post(dag, dag.sources[i], a, b)))
    chain = [tuple(by_source[i][j] for i in range(dag.m)) for j in range(s_int)]
    counts = Counter(chain)
    ordered = list(dict.fromkeys(chain))
    for k, a in enumerate(ordered):
        if any(cmp_layerings(dag, a, b) is not Relation.BELOW for b in ordered[k + 1:]):
            raise InternalInvariantViolated("decomposition is not a layering chain")
    return LayeringDecomposition(tuple((p, Fraction(counts[p], scale)) for p in ordered))
