"""Mutations between adjacent maximal layering-cliques and the framing poset.

Positions inside a clique and source indices are 0-based throughout, so
the first layering of a clique has position 0 and the bottom source has
index 0.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from .embedded_dag import EmbeddedDag
from .errors import InternalInvariantViolated, InvalidInput
from .layerings import (
    Layering,
    LayeringClique,
    chain_sorted,
    cmp_post_source,
    cmp_post_source_cliques,
    enumerate_layerings,
    enumerate_maximal_layering_cliques,
    layerings_compatible,
)
from .routes import DEFAULT_LIMIT, Route, are_compatible, cmp_post

__all__ = [
    "Direction",
    "FramingPoset",
    "Kind",
    "MutationKind",
    "UpDownIndex",
    "adjacent",
    "build_framing_poset",
    "classify_mutation",
    "cmp_post_source",
    "cmp_post_source_cliques",
    "mutate",
    "up_down_indices",
]


class Kind(enum.Enum):
    SHUFFLE = "shuffle"
    ROTATION = "rotation"
    REALIGNMENT = "realignment"


class Direction(enum.Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class MutationKind:
    kind: Kind
    direction: Direction

    def __str__(self) -> str:
        return f"{self.direction.value}-{self.kind.value}"


@dataclass(frozen=True)
class UpDownIndex:
    up: Optional[int]
    down: Optional[int]
    updown: Optional[int]


@dataclass(frozen=True)
class FramingPoset:
    """Maximal cliques with down-mutation edges ``(i, j)``: ``nodes[j]`` is below ``nodes[i]``."""

    nodes: tuple[LayeringClique, ...]
    down_edges: frozenset[tuple[int, int]]
    kinds: dict[tuple[int, int], MutationKind] = field(hash=False, compare=False)
    reduction: frozenset[tuple[int, int]]

    @property
    def non_cover_edges(self) -> frozenset[tuple[int, int]]:
        """Mutation edges that are not covers of the transitive closure."""
        return self.down_edges - self.reduction

    def maximal(self) -> list[int]:
        has_up = {j for _, j in self.down_edges}
        return [i for i in range(len(self.nodes)) if i not in has_up]

    def minimal(self) -> list[int]:
        has_down = {i for i, _ in self.down_edges}
        return [i for i in range(len(self.nodes)) if i not in has_down]


def _diff_index(p: Layering, q: Layering) -> int:
    idx = [i for i, (a, b) in enumerate(zip(p, q)) if a != b]
    if len(idx) != 1:
        raise InternalInvariantViolated(
            f"covering layerings differ at {len(idx)} sources, expected exactly one"
        )
    return idx[0]


def _require_maximal(dag: EmbeddedDag, K: LayeringClique, limit: int) -> None:
    key = ("clique_set", limit)
    if key not in dag.memo:
        dag.memo[key] = frozenset(enumerate_maximal_layering_cliques(dag, limit))
    if K not in dag.memo[key]:
        raise InvalidInput("not a maximal layering-clique")


def up_down_indices(dag: EmbeddedDag, K: LayeringClique, j: int, limit: int = DEFAULT_LIMIT) -> UpDownIndex:
    _require_maximal(dag, K, limit)
    S = len(K)
    if S < 2:
        raise InvalidInput("up/down indices need a clique of at least two layerings")
    if not 0 <= j < S:
        raise InvalidInput(f"position {j} is outside the clique")
    ls = K.layerings
    up = _diff_index(ls[j], ls[j + 1]) if j + 1 < S else None
    down = _diff_index(ls[j], ls[j - 1]) if j > 0 else None
    if up is None:
        updown = down
    elif down is None or up == down:
        updown = up
    else:
        updown = None
    return UpDownIndex(up, down, updown)


def _other_routes(K: LayeringClique, j: int) -> set[Route]:
    return {r for k, p in enumerate(K.layerings) if k != j for r in p}


def adjacent(K: LayeringClique, L: LayeringClique) -> bool:
    a, b = set(K.layerings), set(L.layerings)
    return len(a - b) == 1 and len(b - a) == 1


def classify_mutation(dag: EmbeddedDag, K: LayeringClique, L: LayeringClique, limit: int = DEFAULT_LIMIT) -> MutationKind:
    """Kind and direction of the move from ``K`` to the adjacent clique ``L``."""
    if not adjacent(K, L):
        raise InvalidInput("cliques are not adjacent")
    (p,) = set(K.layerings) - set(L.layerings)
    (q,) = set(L.layerings) - set(K.layerings)
    i, j = K.layerings.index(p), L.layerings.index(q)
    S = len(K)
    idx_k = up_down_indices(dag, K, i, limit)

    if all(r in _other_routes(K, i) for r in p):
        if not 0 < i < S - 1 or idx_k.up == idx_k.down:
            raise InternalInvariantViolated("shuffle layering is not a middle position with distinct up/down")
        r = list(p)
        r[idx_k.up] = K.layerings[i + 1][idx_k.up]
        r[idx_k.down] = K.layerings[i - 1][idx_k.down]
        if tuple(r) != q or j != i:
            raise InternalInvariantViolated("adjacent clique differs from the shuffle formula")
        direction = Direction.DOWN if idx_k.up < idx_k.down else Direction.UP
        return MutationKind(Kind.SHUFFLE, direction)

    u = idx_k.updown
    if u is None:
        raise InternalInvariantViolated("a layering with a private route has no up/down index")
    others = _other_routes(K, i)
    if [r for r in p if r not in others] != [p[u]]:
        raise InternalInvariantViolated("private route of the removed layering is not unique")
    v = up_down_indices(dag, L, j, limit).updown
    if v is None or q[v] in _other_routes(L, j):
        raise InternalInvariantViolated("replacement layering has no private route")
    if K.routes() - {p[u]} | {q[v]} != L.routes() or are_compatible(dag, p[u], q[v]):
        raise InternalInvariantViolated("exchanged routes do not match an incompatible pair")

    if 0 < i < S - 1:
        if j != i or u != v:
            raise InternalInvariantViolated("rotation does not keep its position and source index")
        c = cmp_post(dag, dag.sources[u], p[u], q[u])
        return MutationKind(Kind.ROTATION, Direction.DOWN if c > 0 else Direction.UP)
    if i == S - 1:
        if j != 0 or v != u + 1:
            raise InternalInvariantViolated("down-realignment index relations fail")
        return MutationKind(Kind.REALIGNMENT, Direction.DOWN)
    if j != S - 1 or u != v + 1:
        raise InternalInvariantViolated("up-realignment index relations fail")
    return MutationKind(Kind.REALIGNMENT, Direction.UP)


def mutate(dag: EmbeddedDag, K: LayeringClique, p: Layering, limit: int = DEFAULT_LIMIT) -> Optional[LayeringClique]:
    """The maximal clique across the facet of ``K`` opposite ``p``, if any."""
    if p not in K.layerings:
        raise InvalidInput("layering is not in the clique")
    _require_maximal(dag, K, limit)
    if len(K) < 2:
        return None
    i = K.layerings.index(p)
    rest = [x for x in K.layerings if x != p]
    if all(r in _other_routes(K, i) for r in p):
        idx = up_down_indices(dag, K, i, limit)
        r = list(p)
        r[idx.up] = K.layerings[i + 1][idx.up]
        r[idx.down] = K.layerings[i - 1][idx.down]
        L = LayeringClique(chain_sorted(dag, rest + [tuple(r)]))
        try:
            _require_maximal(dag, L, limit)
        except InvalidInput:
            raise InternalInvariantViolated("shuffle formula did not produce a maximal clique")
        return L
    found = [
        r
        for r in enumerate_layerings(dag, limit)
        if r not in K.layerings and all(layerings_compatible(dag, r, x) for x in rest)
    ]
    if len(found) > 1:
        raise InternalInvariantViolated("facet lies in more than two cells")
    if not found:
        return None
    return LayeringClique(chain_sorted(dag, rest + found))


def adjacent_pairs(cliques: list[LayeringClique]) -> list[tuple[int, int]]:
    by_facet: dict[frozenset, list[int]] = defaultdict(list)
    for n, K in enumerate(cliques):
        for p in K.layerings:
            by_facet[frozenset(K.layerings) - {p}].append(n)
    pairs = set()
    for members in by_facet.values():
        if len(members) > 2:
            raise InternalInvariantViolated("facet lies in more than two cells")
        if len(members) == 2:
            pairs.add(tuple(sorted(members)))
    return sorted(pairs)


def build_framing_poset(dag: EmbeddedDag, limit: int = DEFAULT_LIMIT) -> FramingPoset:
    nodes = enumerate_maximal_layering_cliques(dag, limit)
    down: set[tuple[int, int]] = set()
    kinds: dict[tuple[int, int], MutationKind] = {}
    for a, b in adjacent_pairs(nodes):
        k_ab = classify_mutation(dag, nodes[a], nodes[b], limit)
        k_ba = classify_mutation(dag, nodes[b], nodes[a], limit)
        if k_ab.kind != k_ba.kind or k_ab.direction == k_ba.direction:
            raise InternalInvariantViolated(f"mutation {k_ab} is not inverse to {k_ba}")
        hi, lo = (a, b) if k_ab.direction is Direction.DOWN else (b, a)
        if cmp_post_source_cliques(dag, nodes[lo], nodes[hi]) >= 0:
            raise InternalInvariantViolated("down-mutation does not decrease the post-source order")
        down.add((hi, lo))
        kinds[(hi, lo)] = k_ab if hi == a else k_ba
    g = nx.DiGraph()
    g.add_nodes_from(range(len(nodes)))
    g.add_edges_from(down)
    if not nx.is_directed_acyclic_graph(g):
        raise InternalInvariantViolated("down-mutations form a cycle")
    reduction = frozenset(nx.transitive_reduction(g).edges())
    return FramingPoset(tuple(nodes), frozenset(down), kinds, reduction)
