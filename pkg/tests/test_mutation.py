from collections import Counter
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from conftest import instances
from flowframing import fixtures
from flowframing.errors import InvalidInput
from flowframing.layerings import (
    LayeringClique,
    cmp_post_source,
    cmp_post_source_cliques,
    enumerate_maximal_layering_cliques,
)
from flowframing.mutation import (
    Direction,
    Kind,
    MutationKind,
    adjacent,
    adjacent_pairs,
    build_framing_poset,
    classify_mutation,
    mutate,
    up_down_indices,
)
from flowframing.oracle import random_instance

one_source = st.builds(
    random_instance, seed=st.integers(0, 10**6), max_edges=st.integers(3, 10), max_sources=st.just(1)
)

A1B1, A1B2, A2B1, A2B2 = (("a1", "b1"),), (("a1", "b2"),), (("a2", "b1"),), (("a2", "b2"),)
K1 = LayeringClique((A1B1, A1B2, A2B2))
K2 = LayeringClique((A1B1, A2B1, A2B2))


def test_square_cliques_are_stored_in_chain_order():
    assert set(enumerate_maximal_layering_cliques(fixtures.square())) == {K1, K2}


def test_square_up_down_indices():
    square = fixtures.square()
    idx = up_down_indices(square, K1, 1)
    assert (idx.up, idx.down, idx.updown) == (0, 0, 0)
    assert up_down_indices(square, K1, 2).up is None
    assert up_down_indices(square, K1, 0).down is None


def test_up_down_rejects_non_maximal_and_singletons():
    with pytest.raises(InvalidInput):
        up_down_indices(fixtures.square(), LayeringClique((A1B1, A2B2)), 0)
    K = enumerate_maximal_layering_cliques(fixtures.single_edge())[0]
    with pytest.raises(InvalidInput):
        up_down_indices(fixtures.single_edge(), K, 0)


def test_square_adjacency_and_rotation():
    square = fixtures.square()
    assert adjacent(K1, K2)
    assert not adjacent(K1, K1)
    assert classify_mutation(square, K2, K1) == MutationKind(Kind.ROTATION, Direction.DOWN)
    assert classify_mutation(square, K1, K2) == MutationKind(Kind.ROTATION, Direction.UP)


def test_classify_rejects_non_adjacent():
    dag = fixtures.small_example()
    cliques = enumerate_maximal_layering_cliques(dag)
    far = next((K, L) for K, L in combinations(cliques, 2) if not adjacent(K, L))
    with pytest.raises(InvalidInput):
        classify_mutation(dag, *far)


def test_shuffles_form_a_hexagon():
    poset = build_framing_poset(fixtures.shuffles())
    assert len(poset.nodes) == 6
    assert {k.kind for k in poset.kinds.values()} == {Kind.SHUFFLE}
    g = nx.Graph(list(poset.down_edges))
    assert g.number_of_nodes() == 6 and nx.is_connected(g)
    assert all(deg == 2 for _, deg in g.degree())
    assert len(poset.maximal()) == len(poset.minimal()) == 1


def test_three_mutations_neighbours():
    dag = fixtures.three_mutations()
    poset = build_framing_poset(dag)
    witness = None
    for n in range(len(poset.nodes)):
        kinds = {poset.kinds[e].kind for e in poset.down_edges if e[0] == n}
        if kinds == {Kind.SHUFFLE, Kind.ROTATION, Kind.REALIGNMENT}:
            witness = n
    assert witness is not None
    K = poset.nodes[witness]
    shuffled = [e for e in poset.down_edges if e[0] == witness and poset.kinds[e].kind is Kind.SHUFFLE]
    L = poset.nodes[shuffled[0][1]]
    (p,) = set(K.layerings) - set(L.layerings)
    idx = up_down_indices(dag, K, K.layerings.index(p))
    assert idx.up is not None and idx.down is not None and idx.up != idx.down
    assert idx.updown is None


def test_mutate_shuffle_is_an_involution():
    dag = fixtures.shuffles()
    for K in enumerate_maximal_layering_cliques(dag):
        for p in K.layerings:
            L = mutate(dag, K, p)
            if L is None:
                continue
            (q,) = set(L.layerings) - set(K.layerings)
            assert mutate(dag, L, q) == K


def test_single_clique_has_no_mutations():
    dag = fixtures.x_dag_plus_parallel()
    (K,) = enumerate_maximal_layering_cliques(dag)
    assert len(K) == 2
    for p in K.layerings:
        assert mutate(dag, K, p) is None
    poset = build_framing_poset(dag)
    assert len(poset.nodes) == 1 and not poset.down_edges


def test_mutate_rejects_foreign_layering():
    with pytest.raises(InvalidInput):
        mutate(fixtures.square(), K1, A2B1)


def test_post_source_orders():
    dag = fixtures.small_example()
    cliques = enumerate_maximal_layering_cliques(dag)
    for K in cliques:
        assert cmp_post_source_cliques(dag, K, K) == 0
    for K, L in combinations(cliques, 2):
        assert cmp_post_source_cliques(dag, K, L) == -cmp_post_source_cliques(dag, L, K) != 0
    # stored ascending
    for K, L in zip(cliques, cliques[1:]):
        assert cmp_post_source_cliques(dag, K, L) == -1


def test_small_example_poset():
    poset = build_framing_poset(fixtures.small_example())
    assert len(poset.nodes) == 8
    assert len(poset.maximal()) == len(poset.minimal()) == 1
    kinds = Counter(poset.kinds[e].kind for e in poset.reduction)
    assert len(poset.reduction) == 9
    assert set(kinds) == {Kind.SHUFFLE, Kind.ROTATION, Kind.REALIGNMENT}


def test_zigzag_poset_is_not_a_lattice():
    poset = build_framing_poset(fixtures.zigzag())
    assert len(poset.nodes) == 4
    assert len(poset.maximal()) >= 2 and len(poset.minimal()) >= 2


def _covering_diffs(K):
    return [[i for i, (a, b) in enumerate(zip(p, q)) if a != b] for p, q in zip(K.layerings, K.layerings[1:])]


@given(instances)
def test_covering_layerings_differ_at_one_source(dag):
    for K in enumerate_maximal_layering_cliques(dag):
        assert all(len(d) == 1 for d in _covering_diffs(K))


@given(instances)
def test_up_down_equivalences(dag):
    cliques = enumerate_maximal_layering_cliques(dag)
    if len(cliques[0]) < 2:
        return
    for K in cliques:
        for j, p in enumerate(K.layerings):
            others = {r for k, q in enumerate(K.layerings) if k != j for r in q}
            lonely = [r for r in p if r not in others]
            idx = up_down_indices(dag, K, j)
            assert (idx.up is None) == (j == len(K) - 1)
            assert (idx.down is None) == (j == 0)
            assert (idx.updown is not None) == bool(lonely)
            if idx.updown is not None:
                assert lonely == [p[idx.updown]]


@given(instances)
def test_mutation_is_an_involution_and_matches_adjacency(dag):
    cliques = enumerate_maximal_layering_cliques(dag)
    pairs = set(adjacent_pairs(cliques))
    found = set()
    for a, K in enumerate(cliques):
        for p in K.layerings:
            L = mutate(dag, K, p)
            if L is None:
                continue
            b = cliques.index(L)
            found.add(tuple(sorted((a, b))))
            (q,) = set(L.layerings) - set(K.layerings)
            assert mutate(dag, L, q) == K
    assert found == pairs


@given(instances)
def test_poset_structure(dag):
    poset = build_framing_poset(dag)
    pairs = adjacent_pairs(list(poset.nodes))
    assert len(poset.down_edges) == len(pairs)
    assert {tuple(sorted(e)) for e in poset.down_edges} == set(pairs)
    for hi, lo in poset.down_edges:
        K, L = poset.nodes[hi], poset.nodes[lo]
        assert classify_mutation(dag, K, L).direction is Direction.DOWN
        assert classify_mutation(dag, L, K) == MutationKind(poset.kinds[(hi, lo)].kind, Direction.UP)
        assert cmp_post_source_cliques(dag, L, K) == -1
    g = nx.DiGraph(list(poset.down_edges))
    g.add_nodes_from(range(len(poset.nodes)))
    assert nx.is_directed_acyclic_graph(g)
    assert set(nx.transitive_reduction(g).edges()) == poset.reduction


@given(one_source)
def test_one_source_has_only_rotations(dag):
    poset = build_framing_poset(dag)
    assert all(k.kind is Kind.ROTATION for k in poset.kinds.values())


@given(instances)
def test_rotation_direction_follows_the_exchanged_routes(dag):
    poset = build_framing_poset(dag)
    for (hi, lo), kind in poset.kinds.items():
        if kind.kind is not Kind.ROTATION:
            continue
        K, L = poset.nodes[hi], poset.nodes[lo]
        (p,) = set(K.layerings) - set(L.layerings)
        (q,) = set(L.layerings) - set(K.layerings)
        assert cmp_post_source(dag, p, q) == 1
