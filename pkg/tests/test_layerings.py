import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import instances
from flowframing import fixtures
from flowframing.embedded_dag import unit_netflow
from flowframing.errors import InvalidInput
from flowframing.layerings import (
    J,
    J_inverse,
    J_vector,
    LayeringClique,
    Relation,
    cmp_layerings,
    cmp_post_source,
    decompose_flow,
    enumerate_layerings,
    enumerate_maximal_layering_cliques,
    is_layering,
    polytope_dimension,
)
from flowframing.routes import are_compatible, enumerate_routes, horizontal_index, indicator

SQUARE_P = [(("a1", "b1"),), (("a1", "b2"),), (("a2", "b1"),), (("a2", "b2"),)]


def test_layering_counts():
    assert len(enumerate_layerings(fixtures.small_example())) == 9
    assert len(enumerate_layerings(fixtures.x_dag())) == 1
    assert sorted(enumerate_layerings(fixtures.square())) == SQUARE_P
    assert enumerate_layerings(fixtures.single_edge()) == [(("e",),)]


def test_three_source_layering_flow():
    dag = fixtures.three_sources()
    ps = enumerate_layerings(dag)
    assert len(ps) == 2
    for p in ps:
        f = J(p, dag)
        assert set(f.values()) <= {0, 1}
        assert [horizontal_index(dag, r) for r in p] == [0, 1, 2]
        assert J_inverse(dag, f) == p


def test_one_source_J_is_route_indicator():
    dag = fixtures.square()
    for p in enumerate_layerings(dag):
        assert J_vector(p, dag) == indicator(p[0], dag)


def test_J_inverse_rejects_non_unit_flow():
    with pytest.raises(InvalidInput):
        J_inverse(fixtures.square(), {"a1": 1, "a2": 1, "b1": 1, "b2": 1})


def test_is_layering():
    x = fixtures.x_dag()
    assert is_layering(x, (("a1", "b1"), ("a2", "b2")))
    assert not is_layering(x, (("a1", "b2"), ("a2", "b1")))


def test_transitive_witness():
    dag = fixtures.transitive()
    blue = (("a1", "c1", "d1"), ("a2", "c1", "d2"))
    magenta = (("a1", "c1", "d1"), ("a2", "c2", "d2"))
    green = (("a1", "c2", "d1"), ("a2", "c2", "d2"))
    assert cmp_layerings(dag, blue, magenta) is Relation.BELOW
    assert cmp_layerings(dag, magenta, green) is Relation.BELOW
    assert cmp_layerings(dag, blue, green) is Relation.INCOMPATIBLE
    # the post-source order still decides the pair
    assert cmp_post_source(dag, blue, green) == -1
    assert cmp_post_source(dag, green, blue) == 1


def test_square_layering_relations():
    square = fixtures.square()
    p, q = (("a1", "b2"),), (("a2", "b1"),)
    assert cmp_layerings(square, p, q) is Relation.INCOMPATIBLE
    assert cmp_layerings(square, p, p) is Relation.EQUAL
    assert cmp_layerings(square, (("a1", "b1"),), p) is Relation.BELOW


def test_clique_counts():
    cliques = enumerate_maximal_layering_cliques(fixtures.small_example())
    assert len(cliques) == 8
    assert {len(K) for K in cliques} == {4}
    assert len(enumerate_maximal_layering_cliques(fixtures.zigzag())) == 4
    single = enumerate_maximal_layering_cliques(fixtures.single_edge())
    assert [len(K) for K in single] == [1]


def test_square_cliques():
    cliques = enumerate_maximal_layering_cliques(fixtures.square())
    assert {frozenset(K.layerings) for K in cliques} == {
        frozenset([(("a1", "b1"),), (("a1", "b2"),), (("a2", "b2"),)]),
        frozenset([(("a1", "b1"),), (("a2", "b1"),), (("a2", "b2"),)]),
    }


def test_polytope_dimension_examples():
    assert polytope_dimension(fixtures.small_example()) == 3
    assert polytope_dimension(fixtures.single_edge()) == 0
    assert polytope_dimension(fixtures.square()) == 2


def test_decompose_examples():
    square = fixtures.square()
    p = (("a2", "b1"),)
    assert decompose_flow(square, J(p, square)).terms == ((p, 1),)
    half = Fraction(1, 2)
    dec = decompose_flow(square, dict.fromkeys(square.edge_ids, half))
    assert dec.terms == (((("a1", "b1"),), half), ((("a2", "b2"),), half))
    assert decompose_flow(square, dict.fromkeys(square.edge_ids, 0)).terms == ()


def test_decompose_rejects_non_flow():
    with pytest.raises(InvalidInput):
        decompose_flow(fixtures.square(), {"a1": 1, "a2": 0, "b1": 0, "b2": 0})


def test_fixture_layering_properties(fixture_dag):
    dag = fixture_dag
    ps = enumerate_layerings(dag)
    images = [J_vector(p, dag) for p in ps]
    assert len(set(images)) == len(ps)
    for p in ps:
        assert J_inverse(dag, J(p, dag)) == p
    # every pair is exactly one of equal, below, above, incompatible and the post-source order is total
    for p, q in combinations(ps, 2):
        rel, rev = cmp_layerings(dag, p, q), cmp_layerings(dag, q, p)
        flip = {Relation.BELOW: Relation.ABOVE, Relation.ABOVE: Relation.BELOW}
        assert rev is flip.get(rel, rel)
        assert cmp_post_source(dag, p, q) == -cmp_post_source(dag, q, p) != 0


def test_fixture_horizontal_routes_maximal(fixture_dag):
    dag = fixture_dag
    horizontal = [r for r in enumerate_routes(dag) if horizontal_index(dag, r) is not None]
    for K in enumerate_maximal_layering_cliques(dag):
        rs = K.routes()
        for h in horizontal:
            if all(are_compatible(dag, h, r) for r in rs):
                assert h in rs


@given(instances)
def test_layerings_match_brute_force(dag):
    assert set(enumerate_layerings(dag)) == oracles.layerings(dag)


@given(instances)
def test_J_is_a_bijection_onto_unit_flows(dag):
    flows = oracles.integer_flows(dag, unit_netflow(dag))
    images = {J_vector(p, dag) for p in enumerate_layerings(dag)}
    assert images == {tuple(f[e] for e in dag.edge_ids) for f in flows}
    assert len(images) == len(flows)


@given(instances)
def test_layering_compatibility_matches_definition(dag):
    ps = enumerate_layerings(dag)
    for p, q in combinations(ps, 2):
        assert (cmp_layerings(dag, p, q) is not Relation.INCOMPATIBLE) == oracles.layering_compatible(dag, p, q)


@given(instances)
def test_maximal_cliques_match_brute_force(dag):
    ps = enumerate_layerings(dag)
    cliques = enumerate_maximal_layering_cliques(dag)
    naive = oracles.maximal_cliques(ps, lambda p, q: oracles.layering_compatible(dag, p, q))
    assert {frozenset(K.layerings) for K in cliques} == set(naive)
    d = oracles.rank([[a - b for a, b in zip(J_vector(p, dag), J_vector(ps[0], dag))] for p in ps])
    assert all(len(K) == d + 1 for K in cliques)
    for K in cliques:
        # stored in increasing chain order
        for p, q in zip(K.layerings, K.layerings[1:]):
            assert cmp_layerings(dag, p, q) is Relation.BELOW


@given(instances, st.integers(0, 1000))
def test_decomposition_is_the_barycentric_solution(dag, seed):
    rng = random.Random(seed)
    cliques = enumerate_maximal_layering_cliques(dag)
    K = rng.choice(cliques)
    subset = [p for p in K.layerings if rng.random() < 0.7] or [K.layerings[0]]
    weights = [Fraction(rng.randint(1, 9)) for _ in subset]
    total = sum(weights)
    coeffs = [w / total for w in weights]
    f = {e: sum(c * J(p, dag)[e] for p, c in zip(subset, coeffs)) for e in dag.edge_ids}
    dec = decompose_flow(dag, f)
    assert dict(dec.terms) == dict(zip(subset, coeffs))
    # independent solve against the clique's vertices
    rows = [[J(p, dag)[e] for p in K.layerings] for e in dag.edge_ids] + [[1] * len(K)]
    sol = oracles.solve(rows, [f[e] for e in dag.edge_ids] + [1])
    assert sol is not None
    assert {p: c for p, c in zip(K.layerings, sol) if c} == dict(dec.terms)


@given(instances)
def test_barycenter_gets_uniform_coefficients(dag):
    K = enumerate_maximal_layering_cliques(dag)[0]
    n = len(K)
    f = {e: Fraction(sum(J(p, dag)[e] for p in K.layerings), n) for e in dag.edge_ids}
    dec = decompose_flow(dag, f)
    assert sorted(dec.layerings) == sorted(K.layerings)
    assert {c for _, c in dec.terms} == {Fraction(1, n)}


def test_clique_type_iterates_in_order():
    K = LayeringClique(tuple(SQUARE_P[:2]))
    assert list(K) == SQUARE_P[:2]
    assert len(K) == 2
