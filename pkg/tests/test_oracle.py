from fractions import Fraction

from hypothesis import given, strategies as st

import oracles
from conftest import instances
from flowframing import fixtures
from flowframing.embedded_dag import unit_netflow, validate_strong_planarity
from flowframing.layerings import enumerate_layerings
from flowframing.oracle import (
    count_lattice_points,
    ehrhart_normalized_volume,
    ehrhart_samples,
    k33_obstruction_check,
    lattice_points,
    random_instance,
    verify_triangulation,
)
from flowframing.triangulation import Simplex, Triangulation, build_triangulation, simplex_of


def test_counts_at_zero_and_one():
    assert count_lattice_points(fixtures.small_example(), 0) == 1
    assert count_lattice_points(fixtures.small_example(), 1) == 9
    assert count_lattice_points(fixtures.k33(), 1) == 6


def test_square_counts_are_squares():
    samples = ehrhart_samples(fixtures.square(), [0, 1, 2, 3])
    assert [s.lattice_count for s in samples] == [1, 4, 9, 16]


def test_ehrhart_volumes():
    assert ehrhart_normalized_volume(fixtures.single_edge()) == 1
    assert ehrhart_normalized_volume(fixtures.square()) == 2
    assert ehrhart_normalized_volume(fixtures.small_example()) == 8


def test_verify_square_and_small_example():
    for dag in (fixtures.square(), fixtures.small_example()):
        report = verify_triangulation(dag, build_triangulation(dag))
        assert report.overall, report.failed()
    report = verify_triangulation(fixtures.small_example(), build_triangulation(fixtures.small_example()))
    assert dict((c, msg) for c, _, msg in report.checks)["V"] == "sum of cell volumes 8, Ehrhart volume 8"


def _corrupt(dag, tri, cell, old, new):
    K, _ = tri.cells[cell]
    layerings = tuple(new if p == old else p for p in K.layerings)
    bad = type(K)(layerings)
    cells = list(tri.cells)
    cells[cell] = (bad, simplex_of(dag, bad))
    return Triangulation(tuple(cells), tri.lattice, tri.edge_ids)


def test_corrupted_cell_is_caught():
    dag = fixtures.square()
    tri = build_triangulation(dag)
    K = tri.cells[0][0]
    (outsider,) = set(enumerate_layerings(dag)) - set(K.layerings)
    # swap the cell's top layering for the one it is incompatible with
    bad = _corrupt(dag, tri, 0, K.layerings[-1], outsider)
    report = verify_triangulation(dag, bad)
    assert not report.overall
    assert "F" in report.failed()


def test_missing_cell_is_caught():
    dag = fixtures.small_example()
    tri = build_triangulation(dag)
    short = Triangulation(tri.cells[1:], tri.lattice, tri.edge_ids)
    assert "V" in verify_triangulation(dag, short).failed()


def test_oversized_cell_is_caught():
    dag = fixtures.square()
    tri = build_triangulation(dag)
    pts = tuple(oracles.indicator(dag, p) for p in enumerate_layerings(dag))
    fat = Triangulation(((tri.cells[0][0], Simplex(pts)),) + tri.cells[1:], tri.lattice, tri.edge_ids)
    failed = verify_triangulation(dag, fat).failed()
    assert "P" in failed and "V" in failed


def test_k33_check():
    report = k33_obstruction_check()
    assert report.overall
    assert dict((c, ok) for c, ok, _ in report.checks) == {"a": True, "b": True, "c": True, "conclusion": True}


def test_zero_moves_gives_disjoint_edges():
    for seed in range(10):
        dag = random_instance(seed, moves=0)
        assert len(dag.vertices) == 2 * len(dag.edges)
        assert len(enumerate_layerings(dag)) == 1
        assert count_lattice_points(dag, 1) == 1


def test_generator_is_deterministic_and_bounded():
    for seed in range(30):
        a, b = random_instance(seed, 9, 2), random_instance(seed, 9, 2)
        assert a == b
        assert len(a.edges) <= 9 and a.m <= 2
        assert validate_strong_planarity(a).ok


@given(instances, st.integers(0, 2))
def test_counts_match_brute_force(dag, t):
    a = {v: t * x for v, x in unit_netflow(dag).items()}
    flows = oracles.integer_flows(dag, a)
    assert count_lattice_points(dag, t) == len(flows)
    pts = list(lattice_points(dag, t))
    assert len(pts) == len(set(pts)) == len(flows)
    assert set(pts) == {tuple(f[e] for e in dag.edge_ids) for f in flows}


@given(instances.filter(lambda d: len(enumerate_layerings(d)) <= 12))
def test_lattice_counts_are_polynomial(dag):
    # fit a degree-d polynomial through t = 0..d and predict t = d + 1
    d = ehrhart_d(dag)
    ts = list(range(d + 2))
    counts = [s.lattice_count for s in ehrhart_samples(dag, ts)]
    predicted = sum(
        Fraction(counts[i]) * _basis(ts[:-1], i, ts[-1]) for i in range(d + 1)
    )
    assert predicted == counts[-1]


def ehrhart_d(dag):
    pts = [oracles.indicator(dag, p) for p in enumerate_layerings(dag)]
    return oracles.rank([[a - b for a, b in zip(v, pts[0])] for v in pts])


def _basis(xs, i, x):
    out = Fraction(1)
    for j, xj in enumerate(xs):
        if j != i:
            out *= Fraction(x - xj, xs[i] - xj)
    return out


@given(instances)
def test_verify_passes_on_random_instances(dag):
    report = verify_triangulation(dag, build_triangulation(dag), face_check_dim_cutoff=4, samples=10)
    assert report.overall, report.failed()
