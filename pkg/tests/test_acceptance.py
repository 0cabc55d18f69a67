"""Acceptance criteria, one test each.

Under pytest the terminal summary lists PASS/FAIL per criterion.  Run the
file directly (``python3 tests/test_acceptance.py``) to get the same lines
without pytest.  Runtimes are process CPU seconds.
"""

import random
import sys
import time
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import networkx as nx

sys.path.insert(0, str(Path(__file__).resolve().parent))

import oracles  # noqa: E402
from flowframing import fixtures  # noqa: E402
from flowframing.embedded_dag import unit_netflow, validate_strong_planarity  # noqa: E402
from flowframing.layerings import (  # noqa: E402
    J,
    J_vector,
    cmp_post_source_cliques,
    decompose_flow,
    enumerate_layerings,
    enumerate_maximal_layering_cliques,
)
from flowframing.mutation import (  # noqa: E402
    Direction,
    Kind,
    adjacent_pairs,
    build_framing_poset,
    classify_mutation,
)
from flowframing.oracle import (  # noqa: E402
    count_lattice_points,
    ehrhart_normalized_volume,
    k33_obstruction_check,
    lattice_points,
    random_instance,
    verify_triangulation,
)
from flowframing.reduction import decontract  # noqa: E402
from flowframing.triangulation import (  # noqa: E402
    Triangulation,
    build_triangulation,
    simplex_normalized_volume,
    simplex_of,
)

SEEDS = range(200)
MAX_EDGES = 12
INTERIOR_SAMPLES = 50


@lru_cache(maxsize=None)
def instance(seed):
    return random_instance(seed, MAX_EDGES, 1 + seed % 3)


def _report(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())


# ---------------------------------------------------------------- 1


def test_criterion_1_square():
    start = time.process_time()
    dag = fixtures.square()
    assert len(oracles.routes(dag)) == 4
    cliques = enumerate_maximal_layering_cliques(dag)
    routes = {frozenset(p[0] for p in K.layerings) for K in cliques}
    assert routes == {
        frozenset([("a1", "b1"), ("a1", "b2"), ("a2", "b2")]),
        frozenset([("a1", "b1"), ("a2", "b1"), ("a2", "b2")]),
    }
    tri = build_triangulation(dag)
    assert tri.d == 2
    assert ehrhart_normalized_volume(dag) == 2
    assert len(tri.cells) == 2
    assert all(simplex_normalized_volume(s, tri.lattice) == 1 for _, s in tri.cells)
    K, L = cliques
    assert adjacent_pairs(cliques) == [(0, 1)]
    kinds = {classify_mutation(dag, K, L), classify_mutation(dag, L, K)}
    assert {k.kind for k in kinds} == {Kind.ROTATION}
    assert {k.direction for k in kinds} == {Direction.UP, Direction.DOWN}
    elapsed = time.process_time() - start
    assert elapsed < 1, f"took {elapsed:.2f}s"
    _report("criterion 1 square", True, f"{elapsed:.2f}s")


# ---------------------------------------------------------------- 2


def test_criterion_2_k33():
    start = time.process_time()
    accepted = 0
    total = 0
    for sources, sinks in fixtures.k33_orderings():
        total += 1
        accepted += validate_strong_planarity(fixtures.k33(sources, sinks)).ok
    assert total == 6**6 and accepted == 0
    assert count_lattice_points(fixtures.k33(), 1) == 6
    report = k33_obstruction_check()
    checks = {name: (ok, detail) for name, ok, detail in report.checks}
    assert checks["a"][0] and checks["b"][0] and checks["c"][0] and report.overall
    assert checks["c"][1].startswith("15 of 15")
    # the identity itself, recomputed here: even and odd permutation matchings sum to the all-ones vector
    even, odd = [0] * 9, [0] * 9
    from itertools import permutations

    for perm in permutations(range(3)):
        sign = sum(perm[i] > perm[j] for i in range(3) for j in range(i + 1, 3)) % 2
        for i, j in enumerate(perm):
            (odd if sign else even)[3 * i + j] += 1
    assert even == odd == [1] * 9
    elapsed = time.process_time() - start
    assert elapsed < 5, f"took {elapsed:.2f}s"
    _report("criterion 2 K33 obstruction", True, f"{total} orderings rejected, {elapsed:.2f}s")


# ---------------------------------------------------------------- 3


def test_criterion_3_figure_fixtures():
    small = fixtures.small_example()
    assert len(enumerate_layerings(small)) == 9
    cliques = enumerate_maximal_layering_cliques(small)
    assert len(cliques) == 8 and {len(K) for K in cliques} == {4}
    assert build_triangulation(small).d == 3
    assert ehrhart_normalized_volume(small) == 8
    poset = build_framing_poset(small)
    hasse = nx.DiGraph(list(poset.reduction))
    assert hasse.number_of_nodes() == 8 and nx.is_weakly_connected(hasse)

    zig = build_framing_poset(fixtures.zigzag())
    assert len(zig.nodes) == 4
    assert len(zig.maximal()) >= 2 and len(zig.minimal()) >= 2

    hexagon = build_framing_poset(fixtures.shuffles())
    g = nx.Graph(list(hexagon.down_edges))
    assert len(hexagon.nodes) == 6 and g.number_of_nodes() == 6
    assert nx.is_connected(g) and all(deg == 2 for _, deg in g.degree())
    assert {k.kind for k in hexagon.kinds.values()} == {Kind.SHUFFLE}

    dag, a = fixtures.blowup()
    reduced = decontract(dag, a).reduced
    assert len(enumerate_maximal_layering_cliques(reduced)) == 2
    original_points = len(oracles.integer_flows(dag, a))
    reduced_points = count_lattice_points(reduced, 1)
    assert original_points == reduced_points == 3
    _report("criterion 3 figure fixtures", True)


# ---------------------------------------------------------------- 4


def _interior_points(dag, tri, rng):
    """Strictly positive combinations of all lattice points, and of single cells."""
    points = list(lattice_points(dag, 1))
    out = []
    for k in range(INTERIOR_SAMPLES):
        if k % 2 == 0:
            chosen, cell = points, None
        else:
            cell = rng.randrange(len(tri.cells))
            chosen = list(tri.cells[cell][1].vertices)
        weights = [rng.randint(1, 9) for _ in chosen]
        total = sum(weights)
        vec = tuple(
            sum((Fraction(w, total) * p[i] for w, p in zip(weights, chosen)), Fraction(0))
            for i in range(len(dag.edges))
        )
        out.append((vec, cell, dict(zip(map(tuple, chosen), (Fraction(w, total) for w in weights)))))
    return points, out


def _route_clique_triangulation(dag):
    rs = sorted(oracles.routes(dag))
    return {frozenset(K) for K in oracles.maximal_cliques(rs, lambda p, q: oracles.compatible(dag, p, q))}


def check_instance(seed):
    """Properties (a)-(g) for one generated instance; returns a list of failures."""
    dag = instance(seed)
    failures = []
    cliques = enumerate_maximal_layering_cliques(dag)
    tri = build_triangulation(dag)
    d = tri.d
    # (a)
    if len(cliques) != ehrhart_normalized_volume(dag):
        failures.append("a")
    # (b)
    if any(len(K) != d + 1 for K in cliques):
        failures.append("b")
    # (c)
    if any(simplex_normalized_volume(s, tri.lattice) != 1 for _, s in tri.cells):
        failures.append("c")
    # (d)
    cell_sets = [frozenset(s.vertices) for _, s in tri.cells]
    rng = random.Random(seed)
    points, interior = _interior_points(dag, tri, rng)
    samples = [(tuple(Fraction(x) for x in p), None, None) for p in points] + interior
    for vec, cell, weights in samples:
        flow = dict(zip(dag.edge_ids, vec))
        dec = decompose_flow(dag, flow)
        back = dec.flow(dag)
        support = frozenset(J_vector(p, dag) for p in dec.layerings)
        ok = all(back[e] == flow[e] for e in dag.edge_ids)
        ok = ok and sum(c for _, c in dec.terms) == 1 and all(c > 0 for _, c in dec.terms)
        ok = ok and any(support <= cs for cs in cell_sets)
        if cell is not None:
            got = {J_vector(p, dag): c for p, c in dec.terms}
            ok = ok and got == weights
        if not ok:
            failures.append("d")
            break
    # (e) and (f)
    for a, b in adjacent_pairs(cliques):
        K, L = cliques[a], cliques[b]
        kl, lk = classify_mutation(dag, K, L), classify_mutation(dag, L, K)
        if kl.kind != lk.kind or kl.direction == lk.direction:
            failures.append("e")
            break
        hi, lo = (K, L) if kl.direction is Direction.DOWN else (L, K)
        if cmp_post_source_cliques(dag, lo, hi) != -1:
            failures.append("f")
            break
    poset = build_framing_poset(dag)
    g = nx.DiGraph(list(poset.down_edges))
    if not nx.is_directed_acyclic_graph(g):
        failures.append("f")
    # (g)
    if dag.m == 1:
        if any(k.kind is not Kind.ROTATION for k in poset.kinds.values()):
            failures.append("g")
        ours = {frozenset(p[0] for p in K.layerings) for K in cliques}
        if ours != _route_clique_triangulation(dag):
            failures.append("g")
    return failures, d, dag.m


def test_criterion_4_property_suite():
    start = time.process_time()
    failed = {}
    dims, sources = [], []
    for seed in SEEDS:
        failures, d, m = check_instance(seed)
        dims.append(d)
        sources.append(m)
        if failures:
            failed[seed] = failures
    elapsed = time.process_time() - start
    detail = (
        f"{len(SEEDS)} instances, d in [{min(dims)}, {max(dims)}], "
        f"{sources.count(1)} one-source, {elapsed:.1f}s"
    )
    assert not failed, f"failures by seed: {failed}"
    assert elapsed < 300, f"took {elapsed:.1f}s"
    _report("criterion 4 property suite", True, detail)


# ---------------------------------------------------------------- 5


def _face_check(dag, tri):
    report = verify_triangulation(dag, tri, face_check_dim_cutoff=4, samples=0)
    return dict((n, ok) for n, ok, _ in report.checks)["F"]


def test_criterion_5_face_to_face():
    checked = 0
    for make in fixtures.FIXTURES.values():
        dag = make()
        tri = build_triangulation(dag)
        if tri.d <= 4:
            assert _face_check(dag, tri), make.__name__
            checked += 1
    for seed in SEEDS:
        dag = instance(seed)
        tri = build_triangulation(dag)
        if tri.d <= 4:
            assert _face_check(dag, tri), f"seed {seed}"
            checked += 1

    # negative control: swap a cell's vertex for a layering outside its clique
    dag = fixtures.small_example()
    tri = build_triangulation(dag)
    K = tri.cells[0][0]
    outsider = next(p for p in enumerate_layerings(dag) if p not in K.layerings)
    bad = type(K)(K.layerings[:-1] + (outsider,))
    cells = ((bad, simplex_of(dag, bad)),) + tri.cells[1:]
    report = verify_triangulation(dag, Triangulation(cells, tri.lattice, tri.edge_ids))
    failed = report.failed()
    assert "F" in failed or "V" in failed
    _report("criterion 5 face-to-face", True, f"{checked} triangulations, corrupted control fails {failed}")


CRITERIA = [
    test_criterion_1_square,
    test_criterion_2_k33,
    test_criterion_3_figure_fixtures,
    test_criterion_4_property_suite,
    test_criterion_5_face_to_face,
]


def main() -> int:
    bad = 0
    for test in CRITERIA:
        try:
            test()
        except AssertionError as exc:
            bad += 1
            _report(test.__name__.removeprefix("test_").replace("_", " "), False, str(exc)[:200])
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
