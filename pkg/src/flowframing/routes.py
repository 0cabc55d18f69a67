"""Routes, the post-v and pre-v orders, compatibility and DKK decomposition.

A route (or any directed path) is a tuple of edge ids.  Orders compare
paths at their first divergence using the bottom-to-top positions of the
embedding, and return -1, 0 or 1 so they plug into ``cmp_to_key``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Mapping, Optional, Sequence

from .embedded_dag import EmbeddedDag
from .errors import InternalInvariantViolated, InvalidInput, LimitExceeded

Route = tuple[str, ...]

DEFAULT_LIMIT = 10**6


@dataclass(frozen=True)
class RouteDecomposition:
    """Positive clique combination; routes ascend in the post order at the source."""

    terms: tuple[tuple[Route, Fraction], ...]

    @property
    def routes(self) -> tuple[Route, ...]:
        return tuple(r for r, _ in self.terms)

    def flow(self, dag: EmbeddedDag) -> dict[str, Fraction]:
        out = {e: Fraction(0) for e in dag.edge_ids}
        for r, c in self.terms:
            for e in r:
                out[e] += c
        return out


def path_vertices(dag: EmbeddedDag, path: Sequence[str]) -> tuple[str, ...]:
    if not path:
        return ()
    edge = dag.edge
    return (edge[path[0]].tail,) + tuple(edge[e].head for e in path)


def is_route(dag: EmbeddedDag, path: Sequence[str]) -> bool:
    edge = dag.edge
    if not path or any(e not in edge for e in path):
        return False
    for a, b in zip(path, path[1:]):
        if edge[a].head != edge[b].tail:
            return False
    return edge[path[0]].tail in dag.source_index and edge[path[-1]].head in dag.sink_index


def _require_route(dag: EmbeddedDag, path: Sequence[str]) -> None:
    if not is_route(dag, path):
        raise InvalidInput(f"{tuple(path)} is not a route")


def enumerate_routes(dag: EmbeddedDag, limit: int = DEFAULT_LIMIT) -> list[Route]:
    """All routes: sources bottom-to-top, then out-edges bottom-to-top (DFS)."""
    out: list[Route] = []
    edge = dag.edge
    vertex = dag.vertex

    def walk(v: str, prefix: list[str]) -> None:
        outs = vertex[v].out_edges
        if not outs:
            if len(out) >= limit:
                raise LimitExceeded(f"more than {limit} routes")
            out.append(tuple(prefix))
            return
        for e in outs:
            prefix.append(e)
            walk(edge[e].head, prefix)
            prefix.pop()

    for s in dag.sources:
        walk(s, [])
    return out


def indicator(route: Sequence[str], dag: EmbeddedDag) -> tuple[int, ...]:
    used = set(route)
    return tuple(1 if e in used else 0 for e in dag.edge_ids)


def horizontal_index(dag: EmbeddedDag, route: Sequence[str]) -> Optional[int]:
    """0-based ``i`` when the route runs from the i-th source to the i-th sink."""
    i = dag.source_index.get(dag.edge[route[0]].tail)
    j = dag.sink_index.get(dag.edge[route[-1]].head)
    return i if i is not None and i == j else None


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def cmp_post(dag: EmbeddedDag, v: str, p: Sequence[str], q: Sequence[str]) -> int:
    """Compare two paths leaving ``v`` at their first divergent out-edge."""
    edge = dag.edge
    for path in (p, q):
        if path and edge[path[0]].tail != v:
            raise InvalidInput(f"path {tuple(path)} does not start at {v}")
    pos = dag.out_pos
    for a, b in zip(p, q):
        if a != b:
            return _sign(pos[a] - pos[b])
    return _sign(len(p) - len(q))


def cmp_pre(dag: EmbeddedDag, v: str, p: Sequence[str], q: Sequence[str]) -> int:
    """Compare two paths entering ``v`` at the last divergent in-edge."""
    edge = dag.edge
    for path in (p, q):
        if path and edge[path[-1]].head != v:
            raise InvalidInput(f"path {tuple(path)} does not end at {v}")
    pos = dag.in_pos
    for a, b in zip(reversed(p), reversed(q)):
        if a != b:
            return _sign(pos[a] - pos[b])
    return _sign(len(p) - len(q))


def _split_at(dag: EmbeddedDag, route: Sequence[str]) -> dict[str, int]:
    """Vertex -> index k such that route[:k] enters it and route[k:] leaves it."""
    verts = path_vertices(dag, route)
    return {x: k for k, x in enumerate(verts)}


def incompatibility_witness(dag: EmbeddedDag, p: Sequence[str], q: Sequence[str]) -> Optional[str]:
    """A shared vertex where ``p`` and ``q`` are oppositely ordered, or None."""
    if p == q:
        return None
    sp, sq = _split_at(dag, p), _split_at(dag, q)
    for v, i in sp.items():
        j = sq.get(v)
        if j is None:
            continue
        pre = cmp_pre(dag, v, p[:i], q[:j])
        if pre == 0:
            continue
        post = cmp_post(dag, v, p[i:], q[j:])
        if pre * post < 0:
            return v
    return None


def are_compatible(dag: EmbeddedDag, p: Sequence[str], q: Sequence[str]) -> bool:
    key = (p, q) if p <= q else (q, p)
    cache = dag.memo.setdefault("route_compat", {})
    hit = cache.get(key)
    if hit is None:
        hit = cache[key] = incompatibility_witness(dag, p, q) is None
    return hit


def is_clique(dag: EmbeddedDag, routes: Sequence[Route]) -> bool:
    rs = list(dict.fromkeys(routes))
    return all(are_compatible(dag, a, b) for i, a in enumerate(rs) for b in rs[i + 1:])


def source_order_key(dag: EmbeddedDag):
    """Sort key for routes sharing a start vertex, ascending in the post order."""
    def cmp(p: Route, q: Route) -> int:
        return cmp_post(dag, dag.edge[p[0]].tail, p, q)

    return cmp_to_key(cmp)


def _check_integer_flow(dag: EmbeddedDag, f: Mapping[str, object]) -> dict[str, int]:
    if set(f) != set(dag.edge_ids):
        raise InvalidInput("flow must be defined on exactly the edge set")
    out: dict[str, int] = {}
    for e, x in f.items():
        fx = Fraction(x)
        if fx.denominator != 1 or fx < 0:
            raise InvalidInput(f"flow on {e} is {x}, not a nonnegative integer")
        out[e] = int(fx)
    return out


def dkk_decompose(dag: EmbeddedDag, f: Mapping[str, object]) -> RouteDecomposition:
    """Unique positive clique combination of an integer flow.

    ``dag`` must have one source and one sink.  Flow units are pushed
    through the vertices in topological order; at each vertex the arriving
    units are sorted by the pre-v order of the paths they travelled and
    handed to the out-edge slots bottom-to-top.
    """
    if len(dag.sources) != 1 or len(dag.sinks) != 1:
        raise InvalidInput("DKK decomposition needs exactly one source and one sink")
    flow = _check_integer_flow(dag, f)
    vertex, edge = dag.vertex, dag.edge
    src, snk = dag.sources[0], dag.sinks[0]
    strength = sum(flow[e] for e in vertex[src].out_edges)
    for v in dag.vertex_ids:
        net = sum(flow[e] for e in vertex[v].out_edges) - sum(flow[e] for e in vertex[v].in_edges)
        want = strength if v == src else -strength if v == snk else 0
        if net != want:
            raise InvalidInput(f"flow is not conserved at {v}")

    arriving: dict[str, list[list[str]]] = {v: [] for v in dag.vertex_ids}
    arriving[src] = [[] for _ in range(strength)]
    finished: list[Route] = []
    for v in dag.topological_order:
        units = arriving[v]
        if v == snk:
            finished.extend(tuple(u) for u in units)
            continue
        if len(units) > 1:
            units.sort(key=cmp_to_key(lambda a, b, v=v: cmp_pre(dag, v, a, b)))
        k = 0
        for e in vertex[v].out_edges:
            h = edge[e].head
            for _ in range(flow[e]):
                arriving[h].append(units[k] + [e])
                k += 1

    counts = Counter(finished)
    routes = sorted(counts, key=source_order_key(dag))
    if not is_clique(dag, routes):
        raise InternalInvariantViolated("DKK unit matching produced incompatible routes")
    return RouteDecomposition(tuple((r, Fraction(counts[r])) for r in routes))
