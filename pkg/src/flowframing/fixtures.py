"""Small named instances used by tests, scripts and the CLI docs.

``square``, ``k33``, ``shuffles`` and ``blowup`` are fully determined by
their descriptions.  ``small_example``, ``zigzag``, ``three_mutations`` and
``transitive`` are drawings reconstructed to reproduce the stated counts;
they are the smallest matches found by ``scripts/search_fixtures.py``.
``three_sources`` is a hand-made stand-in for a three-source drawing.
"""

from __future__ import annotations

from itertools import permutations

from .embedded_dag import Edge, EmbeddedDag, Vertex


def single_edge() -> EmbeddedDag:
    return EmbeddedDag.build([("e", "s", "t")], ["s"], ["t"])


def square() -> EmbeddedDag:
    """One internal vertex v; a1 below a2 enter it, b1 below b2 leave it."""
    return EmbeddedDag.build(
        [("a1", "s", "v"), ("a2", "s", "v"), ("b1", "v", "t"), ("b2", "v", "t")],
        ["s"],
        ["t"],
    )


def parallel_edges(k: int = 2) -> EmbeddedDag:
    return EmbeddedDag.build([(f"e{i}", "s", "t") for i in range(1, k + 1)], ["s"], ["t"])


def x_dag() -> EmbeddedDag:
    return EmbeddedDag.build(
        [("a1", "s1", "v"), ("a2", "s2", "v"), ("b1", "v", "t1"), ("b2", "v", "t2")],
        ["s1", "s2"],
        ["t1", "t2"],
    )


def x_dag_plus_parallel() -> EmbeddedDag:
    """X-dag with a second edge s2 -> v: a segment with two lattice points."""
    return EmbeddedDag.build(
        [
            ("a1", "s1", "v"),
            ("a2", "s2", "v"),
            ("a3", "s2", "v"),
            ("b1", "v", "t1"),
            ("b2", "v", "t2"),
        ],
        ["s1", "s2"],
        ["t1", "t2"],
    )


_K33_EDGES = tuple(Edge(f"g{i}{j}", f"s{i}", f"t{j}") for i in range(1, 4) for j in range(1, 4))


_K33_SOURCES = {
    (i, order): Vertex(f"s{i}", (), tuple(f"g{i}{j}" for j in order))
    for i in range(1, 4)
    for order in permutations((1, 2, 3))
}
_K33_SINKS = {
    (j, order): Vertex(f"t{j}", tuple(f"g{i}{j}" for i in order), ())
    for j in range(1, 4)
    for order in permutations((1, 2, 3))
}


def k33(source_orders=None, sink_orders=None) -> EmbeddedDag:
    """Complete bipartite s_i -> t_j with edge g{i}{j}; orders are arbitrary."""
    source_orders = source_orders or {}
    sink_orders = sink_orders or {}
    vertices = tuple(_K33_SOURCES[i, tuple(source_orders.get(i, (1, 2, 3)))] for i in range(1, 4)) + tuple(
        _K33_SINKS[j, tuple(sink_orders.get(j, (1, 2, 3)))] for j in range(1, 4)
    )
    return EmbeddedDag(vertices, _K33_EDGES, ("s1", "s2", "s3"), ("t1", "t2", "t3"))


def k33_orderings():
    """Every combination of per-vertex edge orders of K_{3,3} (6**6 of them)."""
    perms = list(permutations((1, 2, 3)))
    from itertools import product

    for choice in product(perms, repeat=6):
        yield (
            {i + 1: choice[i] for i in range(3)},
            {j + 1: choice[3 + j] for j in range(3)},
        )


def shuffles() -> EmbeddedDag:
    """Three stacked components, each a pair of parallel edges."""
    edges = []
    for i in (1, 2, 3):
        edges += [(f"e{i}a", f"s{i}", f"t{i}"), (f"e{i}b", f"s{i}", f"t{i}")]
    return EmbeddedDag.build(edges, ["s1", "s2", "s3"], ["t1", "t2", "t3"])


def blowup() -> tuple[EmbeddedDag, dict[str, int]]:
    """Two parallel edges with netflow (2, -2)."""
    return parallel_edges(2), {"s": 2, "t": -2}


def small_example() -> EmbeddedDag:
    """Two sources, three internal vertices: 9 layerings, 8 maximal cliques."""
    return EmbeddedDag.build(
        [
            ("s1u", "s1", "u"),
            ("s1v", "s1", "v"),
            ("s2v", "s2", "v"),
            ("vu", "v", "u"),
            ("uw", "u", "w"),
            ("vw", "v", "w"),
            ("ut1", "u", "t1"),
            ("wt1", "w", "t1"),
            ("wt2", "w", "t2"),
        ],
        ["s1", "s2"],
        ["t1", "t2"],
        in_orders={"u": ["s1u", "vu"], "v": ["s1v", "s2v"], "w": ["uw", "vw"], "t1": ["ut1", "wt1"]},
        out_orders={"s1": ["s1u", "s1v"], "u": ["ut1", "uw"], "v": ["vu", "vw"], "w": ["wt1", "wt2"]},
    )


def zigzag() -> EmbeddedDag:
    """Four maximal cliques whose poset has two maximal and two minimal elements."""
    return EmbeddedDag.build(
        [
            ("a", "s1", "u"),
            ("b1", "s2", "u"),
            ("b2", "s2", "u"),
            ("c1", "u", "w"),
            ("c2", "u", "w"),
            ("d1", "w", "t1"),
            ("d2", "w", "t2"),
        ],
        ["s1", "s2"],
        ["t1", "t2"],
        in_orders={"u": ["a", "b1", "b2"]},
    )


def three_mutations() -> EmbeddedDag:
    """A clique with a down-shuffle, a down-rotation and a down-realignment below it."""
    return EmbeddedDag.build(
        [
            ("a", "s1", "u"),
            ("b1", "s2", "u"),
            ("b2", "s2", "u"),
            ("c1", "u", "w"),
            ("c2", "u", "w"),
            ("d", "w", "t1"),
            ("f1", "w", "t2"),
            ("f2", "w", "t2"),
        ],
        ["s1", "s2"],
        ["t1", "t2"],
        in_orders={"u": ["a", "b1", "b2"]},
        out_orders={"w": ["d", "f1", "f2"]},
    )


def transitive() -> EmbeddedDag:
    """Both sources share a two-edge diamond u => w; the layering order is not transitive here."""
    return EmbeddedDag.build(
        [
            ("a1", "s1", "u"),
            ("a2", "s2", "u"),
            ("c1", "u", "w"),
            ("c2", "u", "w"),
            ("d1", "w", "t1"),
            ("d2", "w", "t2"),
        ],
        ["s1", "s2"],
        ["t1", "t2"],
    )


def three_sources() -> EmbeddedDag:
    """A connected balanced dag with three sources and sinks."""
    return EmbeddedDag.build(
        [
            ("a1", "s1", "u"),
            ("a2", "s2", "u"),
            ("b1", "u", "t1"),
            ("b2", "u", "w"),
            ("b3", "u", "w"),
            ("a3", "s3", "w"),
            ("c2", "w", "t2"),
            ("c3", "w", "t3"),
        ],
        ["s1", "s2", "s3"],
        ["t1", "t2", "t3"],
    )


FIXTURES = {
    "single_edge": single_edge,
    "square": square,
    "x_dag": x_dag,
    "x_dag_plus_parallel": x_dag_plus_parallel,
    "shuffles": shuffles,
    "small_example": small_example,
    "zigzag": zigzag,
    "three_mutations": three_mutations,
    "transitive": transitive,
    "three_sources": three_sources,
}
