"""Independent checks: Ehrhart volumes, geometric triangulation axioms,
the K_{3,3} obstruction, and a random instance generator.

Nothing here reuses the layering or route machinery to compute the
quantity it is checking.  Lattice points are counted and enumerated by a
separate topological-order search, and face-to-face intersection is done
by exact vertex enumeration in lattice coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial
from typing import Iterator, Optional, Sequence

from .embedded_dag import Edge, EmbeddedDag, Vertex, is_balanced, validate_strong_planarity
from .errors import InternalInvariantViolated, InvalidInput
from .lattice import rank, solve_rational
from .layerings import J_vector, decompose_flow
from .triangulation import Triangulation, simplex_normalized_volume

__all__ = [
    "EhrhartSample",
    "VerificationReport",
    "count_lattice_points",
    "ehrhart_normalized_volume",
    "ehrhart_samples",
    "k33_obstruction_check",
    "lattice_points",
    "random_instance",
    "verify_triangulation",
]


@dataclass(frozen=True)
class EhrhartSample:
    t: int
    lattice_count: int


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[tuple[str, bool, str], ...]

    @property
    def overall(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failed(self) -> list[str]:
        return [name for name, ok, _ in self.checks if not ok]


# ---------------------------------------------------------------- counting


def _topo(dag: EmbeddedDag) -> list[str]:
    indeg = {v.id: len(v.in_edges) for v in dag.vertices}
    head = {e.id: e.head for e in dag.edges}
    stack = [v for v in dag.vertex_ids if indeg[v] == 0]
    out = []
    while stack:
        v = stack.pop()
        out.append(v)
        for e in dag.vertex[v].out_edges:
            w = head[e]
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    if len(out) != len(indeg):
        raise InvalidInput("graph has a directed cycle")
    return out


def _splits(total: int, parts: int, cap: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if total <= cap:
            yield (total,)
        return
    for x in range(min(total, cap) + 1):
        for rest in _splits(total - x, parts - 1, cap):
            yield (x,) + rest


def count_lattice_points(dag: EmbeddedDag, t: int) -> int:
    """Number of integer flows with netflow t times the unit netflow."""
    if t < 0:
        raise InvalidInput("dilation must be nonnegative")
    order = _topo(dag)
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    src, snk = set(dag.sources), set(dag.sinks)
    cap = len(dag.sources) * t
    outs = [[pos[dag.edge[e].head] for e in dag.vertex[v].out_edges] for v in order]

    @lru_cache(maxsize=None)
    def rec(k: int, inflow: tuple[int, ...]) -> int:
        # inflow[i] is what has arrived so far at order[k + i]
        if k == n:
            return 1
        v = order[k]
        total = inflow[0] + (t if v in src else 0)
        if v in snk:
            return int(total == t) * rec(k + 1, inflow[1:])
        heads = outs[k]
        count = 0
        for split in _splits(total, len(heads), cap):
            nxt = list(inflow[1:])
            for h, x in zip(heads, split):
                nxt[h - k - 1] += x
            count += rec(k + 1, tuple(nxt))
        return count

    return rec(0, (0,) * n)


def lattice_points(dag: EmbeddedDag, t: int = 1) -> Iterator[tuple[int, ...]]:
    """Integer flows of strength ``t`` as vectors over ``dag.edge_ids``."""
    order = _topo(dag)
    src, snk = set(dag.sources), set(dag.sinks)
    cap = len(dag.sources) * t
    idx = dag.edge_index
    flow = [0] * len(dag.edges)

    def rec(k: int) -> Iterator[tuple[int, ...]]:
        if k == len(order):
            yield tuple(flow)
            return
        vert = dag.vertex[order[k]]
        total = sum(flow[idx[e]] for e in vert.in_edges) + (t if vert.id in src else 0)
        if vert.id in snk:
            if total == t:
                yield from rec(k + 1)
            return
        for split in _splits(total, len(vert.out_edges), cap):
            for e, x in zip(vert.out_edges, split):
                flow[idx[e]] = x
            yield from rec(k + 1)
        for e in vert.out_edges:
            flow[idx[e]] = 0

    yield from rec(0)


def ehrhart_samples(dag: EmbeddedDag, ts: Sequence[int]) -> list[EhrhartSample]:
    return [EhrhartSample(t, count_lattice_points(dag, t)) for t in ts]


def _affine_dimension(points: Sequence[Sequence[int]]) -> int:
    base = points[0]
    return rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


def ehrhart_normalized_volume(dag: EmbeddedDag, d: Optional[int] = None) -> int:
    """d! times the leading coefficient of the Ehrhart polynomial.

    ``d`` defaults to the affine dimension of the lattice points, found by
    this module's own enumeration.  The polynomial is interpolated through
    t = 0..d, and d! times its leading coefficient is the d-th forward
    difference at 0.
    """
    if d is None:
        d = _affine_dimension(list(lattice_points(dag, 1)))
    values = [Fraction(s.lattice_count) for s in ehrhart_samples(dag, range(d + 1))]
    # Lagrange leading coefficient: sum_t L(t) / prod_{s != t} (t - s)
    lead = sum(
        (values[t] / _prod(t - s for s in range(d + 1) if s != t) for t in range(d + 1)),
        Fraction(0),
    )
    vol = lead * factorial(d)
    if vol.denominator != 1 or vol <= 0:
        raise InternalInvariantViolated(f"Ehrhart normalized volume {vol} is not a positive integer")
    return int(vol)


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


# ------------------------------------------------------- triangulation axioms


@dataclass
class _Cell:
    points: tuple[tuple[int, ...], ...]  # lattice coordinates
    ineqs: list[tuple[list[Fraction], Fraction]] = field(default_factory=list)

    def bary(self, x: Sequence[Fraction]) -> list[Fraction]:
        return [sum((a * xi for a, xi in zip(c, x)), b) for c, b in self.ineqs]


def _barycentric(points: Sequence[Sequence[int]]) -> Optional[list[tuple[list[Fraction], Fraction]]]:
    """Affine maps lambda_i with lambda_i(points[j]) = [i == j], or None if degenerate."""
    d = len(points) - 1
    if d == 0:
        return [([], Fraction(1))]
    a0 = points[0]
    cols = [[Fraction(p[r] - a0[r]) for p in points[1:]] for r in range(d)]
    # invert the d x d matrix M with columns p_j - a0 by solving M X = e_r
    inv_cols = []
    for r in range(d):
        sol = solve_rational(cols, [int(r == k) for k in range(d)])
        if sol is None:
            return None
        inv_cols.append(sol)
    # mu_j(x) = sum_r inv[j][r] (x_r - a0_r)
    rows = [[inv_cols[r][j] for r in range(d)] for j in range(d)]
    out = []
    for row in rows:
        out.append((row, -sum(c * a for c, a in zip(row, a0))))
    lam0 = [-sum(row[r] for row in rows) for r in range(d)]
    out.insert(0, (lam0, 1 - sum(b for _, b in out)))
    return out


def _certified_proper(c1: _Cell, c2: _Cell, shared: set) -> bool:
    """Separating affine function certificate that c1 and c2 meet in conv(shared)."""
    for a, b in ((c1, c2), (c2, c1)):
        free = [i for i, p in enumerate(a.points) if p not in shared]
        others = [p for p in b.points if p not in shared]
        values = [a.bary(p) for p in others]
        for i in free:
            if all(v[i] < 0 for v in values):
                return True
        if free and all(sum(v[i] for i in free) < 0 for v in values):
            return True
    return False


def _intersection_vertices(c1: _Cell, c2: _Cell, d: int) -> list[tuple[Fraction, ...]]:
    ineqs = c1.ineqs + c2.ineqs
    found = set()
    for subset in combinations(range(len(ineqs)), d):
        mat = [ineqs[k][0] for k in subset]
        rhs = [-ineqs[k][1] for k in subset]
        x = solve_rational(mat, rhs)
        if x is None:
            continue
        if all(sum((a * xi for a, xi in zip(c, x)), b) >= 0 for c, b in ineqs):
            found.add(tuple(x))
    return sorted(found)


def _face_to_face(c1: _Cell, c2: _Cell, d: int) -> bool:
    shared = set(c1.points) & set(c2.points)
    if _certified_proper(c1, c2, shared):
        return True
    free = [i for i, p in enumerate(c1.points) if p not in shared]
    for x in _intersection_vertices(c1, c2, d):
        lam = c1.bary(x)
        if any(lam[i] != 0 for i in free):
            return False
    if not shared:
        return not _intersection_vertices(c1, c2, d)
    return True


def verify_triangulation(
    dag: EmbeddedDag,
    tri: Triangulation,
    face_check_dim_cutoff: int = 5,
    samples: int = 50,
    seed: int = 0,
) -> VerificationReport:
    checks: list[tuple[str, bool, str]] = []
    d = tri.d
    points = list(lattice_points(dag, 1))
    point_set = set(points)

    expected = ehrhart_normalized_volume(dag)
    volumes = []
    for _, s in tri.cells:
        try:
            volumes.append(simplex_normalized_volume(s, tri.lattice))
        except InvalidInput:
            volumes.append(None)
    total = sum(v for v in volumes if v is not None)
    ok_v = None not in volumes and total == expected
    checks.append(("V", ok_v, f"sum of cell volumes {total}, Ehrhart volume {expected}"))

    bad_u = [k for k, v in enumerate(volumes) if v != 1]
    checks.append(("U", not bad_u, f"non-unimodular cells {bad_u}" if bad_u else "all cells unimodular"))

    bad_p = [
        k
        for k, (_, s) in enumerate(tri.cells)
        if len(s.vertices) != d + 1 or len(set(s.vertices)) != d + 1 or not set(s.vertices) <= point_set
    ]
    checks.append(("P", not bad_p, f"impure cells {bad_p}" if bad_p else f"every cell has {d + 1} lattice-point vertices"))

    checks.append(_coverage(dag, tri, points, samples, seed))

    if d <= face_check_dim_cutoff:
        checks.append(_face_check(tri))
    else:
        checks.append(("F", True, f"skipped: dimension {d} above cutoff {face_check_dim_cutoff}"))
    return VerificationReport(tuple(checks))


def _coverage(dag, tri, points, samples, seed) -> tuple[str, bool, str]:
    cell_sets = [frozenset(s.vertices) for _, s in tri.cells]
    containing: dict[tuple[int, ...], set[int]] = {}
    for k, cs in enumerate(cell_sets):
        for v in cs:
            containing.setdefault(v, set()).add(k)
    eids = dag.edge_ids

    def check(vec: Sequence[Fraction]) -> Optional[str]:
        flow = dict(zip(eids, vec))
        try:
            dec = decompose_flow(dag, flow)
        except (InvalidInput, InternalInvariantViolated) as exc:
            return f"decompose_flow failed: {exc}"
        back = dec.flow(dag)
        if any(back[e] != Fraction(flow[e]) for e in eids):
            return "decomposition does not sum back to the flow"
        if sum(c for _, c in dec.terms) != 1 or any(c <= 0 for _, c in dec.terms):
            return "coefficients are not a convex combination"
        support = [J_vector(p, dag) for p in dec.layerings]
        cells = None
        for v in support:
            hit = containing.get(v, set())
            cells = set(hit) if cells is None else cells & hit
        if not cells:
            return f"support of size {len(support)} lies in no single cell"
        return None

    for p in points:
        err = check([Fraction(x) for x in p])
        if err:
            return ("C", False, f"lattice point {p}: {err}")
    rng = random.Random(seed)
    for _ in range(samples):
        k = rng.randint(1, len(points))
        chosen = rng.sample(points, k)
        weights = [rng.randint(1, 9) for _ in chosen]
        total = sum(weights)
        vec = [sum((Fraction(w, total) * p[i] for w, p in zip(weights, chosen)), Fraction(0)) for i in range(len(eids))]
        err = check(vec)
        if err:
            return ("C", False, f"random point: {err}")
    return ("C", True, f"{len(points)} lattice points and {samples} random points decompose inside one cell")


def _face_check(tri: Triangulation) -> tuple[str, bool, str]:
    d = tri.d
    cells = []
    for k, (_, s) in enumerate(tri.cells):
        try:
            pts = tuple(tuple(tri.lattice.coordinates(v)) for v in s.vertices)
        except InvalidInput:
            return ("F", False, f"cell {k} has a vertex off the lattice")
        if len(pts) != d + 1:
            return ("F", False, f"cell {k} is not a {d}-simplex")
        ineqs = _barycentric(pts)
        if ineqs is None:
            return ("F", False, f"cell {k} is degenerate")
        cells.append(_Cell(pts, ineqs))
    if d == 0:
        ok = len(cells) == 1
        return ("F", ok, "single point" if ok else f"{len(cells)} cells on a point")
    for a, b in combinations(range(len(cells)), 2):
        if not _face_to_face(cells[a], cells[b], d):
            return ("F", False, f"cells {a} and {b} overlap beyond a common face")
    return ("F", True, f"{len(cells) * (len(cells) - 1) // 2} cell pairs meet face-to-face")


# ---------------------------------------------------------------- K_{3,3}


def _k33_dag() -> EmbeddedDag:
    from .fixtures import k33

    return k33()


def _sign(perm: Sequence[int]) -> int:
    inv = sum(1 for i, j in combinations(range(len(perm)), 2) if perm[i] > perm[j])
    return -1 if inv % 2 else 1


def k33_obstruction_check() -> VerificationReport:
    dag = _k33_dag()
    eids = dag.edge_ids
    perms = list(permutations(range(1, 4)))
    matching = {}
    for perm in perms:
        edges = {f"g{i}{perm[i - 1]}" for i in range(1, 4)}
        matching[perm] = tuple(int(e in edges) for e in eids)
    checks = []

    pts = set(lattice_points(dag, 1))
    count = count_lattice_points(dag, 1)
    ok_a = pts == set(matching.values()) and count == 6
    checks.append(("a", ok_a, f"{count} lattice points; equal to the 6 matching indicators: {pts == set(matching.values())}"))

    even = [matching[p] for p in perms if _sign(p) == 1]
    odd = [matching[p] for p in perms if _sign(p) == -1]
    sum_even = tuple(map(sum, zip(*even)))
    sum_odd = tuple(map(sum, zip(*odd)))
    ok_b = sum_even == sum_odd == (1,) * len(eids)
    checks.append(("b", ok_b, f"even sum {sum_even}, odd sum {sum_odd}"))

    bad = []
    pairs = list(combinations(perms, 2))
    for A, B in pairs:
        union = [x or y for x, y in zip(matching[A], matching[B])]
        inside = {p for p in perms if all(u >= x for u, x in zip(union, matching[p]))}
        if inside != {A, B}:
            bad.append((A, B))
    checks.append(("c", not bad and len(pairs) == 15, f"{len(pairs) - len(bad)} of {len(pairs)} pairs contain only their own matchings"))

    dim = _affine_dimension(list(matching.values()))
    ok_d = not bad and dim == 4
    checks.append((
        "conclusion",
        ok_d,
        f"all pairs compatible, so a triangulation would be one simplex on 6 points, but their affine dimension is {dim}",
    ))
    return VerificationReport(tuple(checks))


# --------------------------------------------------------- random instances


class _Builder:
    """Mutable embedded dag with components stacked bottom to top."""

    def __init__(self) -> None:
        self.ins: dict[str, list[str]] = {}
        self.outs: dict[str, list[str]] = {}
        self.ends: dict[str, tuple[str, str]] = {}
        self.comps: list[tuple[list[str], list[str]]] = []  # (sources, sinks) bottom-to-top
        self._nv = self._ne = 0

    def vertex(self) -> str:
        v = f"v{self._nv}"
        self._nv += 1
        self.ins[v], self.outs[v] = [], []
        return v

    def edge(self, tail: str, head: str) -> str:
        e = f"e{self._ne}"
        self._ne += 1
        self.ends[e] = (tail, head)
        return e

    @property
    def n_edges(self) -> int:
        return len(self.ends)

    @property
    def n_sources(self) -> int:
        return sum(len(s) for s, _ in self.comps)

    def stack(self) -> None:
        s, t = self.vertex(), self.vertex()
        e = self.edge(s, t)
        self.outs[s].append(e)
        self.ins[t].append(e)
        self.comps.append(([s], [t]))

    def subdivide(self, e: str) -> None:
        u, w = self.ends[e]
        x = self.vertex()
        f = self.edge(x, w)
        self.ends[e] = (u, x)
        self.ins[w][self.ins[w].index(e)] = f
        self.ins[x].append(e)
        self.outs[x].append(f)

    def chain_from(self, e: str) -> list[str]:
        """Edges of the maximal path starting with e through in=out=1 vertices."""
        path = [e]
        while True:
            x = self.ends[path[-1]][1]
            if len(self.ins[x]) == 1 and len(self.outs[x]) == 1:
                path.append(self.outs[x][0])
            else:
                return path

    def duplicate_path(self, path: list[str]) -> None:
        """Parallel copy drawn just above the path (an edge is a path of length 1)."""
        u, w = self.ends[path[0]][0], self.ends[path[-1]][1]
        prev = u
        new = []
        for k in range(len(path) - 1):
            x = self.vertex()
            f = self.edge(prev, x)
            new.append(f)
            if prev != u:
                self.outs[prev].append(f)
            self.ins[x].append(f)
            prev = x
        f = self.edge(prev, w)
        if prev != u:
            self.outs[prev].append(f)
        new.append(f)
        self.outs[u].insert(self.outs[u].index(path[0]) + 1, new[0])
        self.ins[w].insert(self.ins[w].index(path[-1]) + 1, new[-1])

    def side(self, comp: int, top: bool) -> list[str]:
        """Vertices of the top (or bottom) boundary path of a component."""
        sources, _ = self.comps[comp]
        v = sources[-1] if top else sources[0]
        out = [v]
        while self.outs[v]:
            e = self.outs[v][-1] if top else self.outs[v][0]
            v = self.ends[e][1]
            out.append(v)
        return out

    def bridge(self, comp: int, u: str, w: str) -> None:
        """Edge from u on the top of ``comp`` to w on the bottom of the next component."""
        e = self.edge(u, w)
        self.outs[u].append(e)
        self.ins[w].insert(0, e)
        (s1, t1), (s2, t2) = self.comps[comp], self.comps[comp + 1]
        self.comps[comp : comp + 2] = [(s1 + s2, t1 + t2)]

    def attach(self, comp: int, x: str, y: str, top: bool) -> None:
        """New source feeding x and new sink fed by y, both on one side of ``comp``."""
        s, t = self.vertex(), self.vertex()
        a, b = self.edge(s, x), self.edge(y, t)
        self.outs[s].append(a)
        self.ins[t].append(b)
        sources, sinks = self.comps[comp]
        if top:
            self.ins[x].append(a)
            self.outs[y].append(b)
            self.comps[comp] = (sources + [s], sinks + [t])
        else:
            self.ins[x].insert(0, a)
            self.outs[y].insert(0, b)
            self.comps[comp] = ([s] + sources, [t] + sinks)

    def inner_faces(self) -> list[tuple[list[str], list[str]]]:
        """Inner faces as (lower, upper) edge paths from their source- to sink-switch.

        Each inner face has one source-switch, a vertex with the face
        between two consecutive out-edges; both boundary paths are traced
        from there and must meet again.
        """
        faces = []
        for v, outs in self.outs.items():
            for lo, hi in zip(outs, outs[1:]):
                lower, upper = self._boundary(lo, True), self._boundary(hi, False)
                if self.ends[lower[-1]][1] == self.ends[upper[-1]][1]:
                    faces.append((lower, upper))
        return faces

    def _boundary(self, e: str, face_above: bool) -> list[str]:
        path = [e]
        while True:
            x = self.ends[path[-1]][1]
            ins, outs = self.ins[x], self.outs[x]
            edge_is_extreme = ins[-1] == path[-1] if face_above else ins[0] == path[-1]
            if not outs or not edge_is_extreme:
                return path
            path.append(outs[-1] if face_above else outs[0])

    def reaches(self, a: str, b: str) -> bool:
        stack, seen = [a], {a}
        while stack:
            v = stack.pop()
            if v == b:
                return True
            for e in self.outs[v]:
                w = self.ends[e][1]
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    def chord(self, e_out: str, e_in: str, from_lower: bool) -> None:
        """Edge across an inner face, leaving the tail of ``e_out`` and entering the head of ``e_in``.

        ``e_out`` lies on the boundary path the chord starts from and ``e_in``
        on the other one; the chord sits just inside the face at both ends.
        """
        u, w = self.ends[e_out][0], self.ends[e_in][1]
        c = self.edge(u, w)
        i, j = self.outs[u].index(e_out), self.ins[w].index(e_in)
        if from_lower:
            self.outs[u].insert(i + 1, c)
            self.ins[w].insert(j, c)
        else:
            self.outs[u].insert(i, c)
            self.ins[w].insert(j + 1, c)

    def build(self) -> EmbeddedDag:
        vertices = tuple(Vertex(v, tuple(self.ins[v]), tuple(self.outs[v])) for v in self.ins)
        edges = tuple(Edge(e, t, h) for e, (t, h) in self.ends.items())
        sources = tuple(s for ss, _ in self.comps for s in ss)
        sinks = tuple(t for _, ts in self.comps for t in ts)
        return EmbeddedDag(vertices, edges, sources, sinks)


def random_instance(
    seed: int, max_edges: int = 12, max_sources: int = 3, moves: Optional[int] = None
) -> EmbeddedDag:
    """Seeded strongly planar balanced dag grown by embedding-preserving moves.

    Starts from a stack of disjoint single edges and applies random moves:
    subdivide an edge, duplicate an edge or an interior chain just above
    itself, stack a new single edge on top, bridge the top side of one
    component to the bottom side of the next, attach a new source/sink
    pair along the top or bottom side of a component, or draw a chord
    across an inner face.  ``moves=0`` returns
    the starting stack.
    """
    if max_edges < 1 or max_sources < 1:
        raise InvalidInput("bounds must be positive")
    rng = random.Random(seed)
    b = _Builder()
    for _ in range(rng.randint(1, min(max_sources, max_edges))):
        b.stack()
    if moves is None:
        moves = rng.randint(max_edges // 2, 3 * max_edges)
    for _ in range(moves):
        options = _moves(b, max_edges, max_sources)
        if not options:
            break
        names = sorted(options)
        move = rng.choices(names, weights=[_WEIGHTS[n] for n in names])[0]
        options[move](rng)
    dag = b.build()
    report = validate_strong_planarity(dag)
    if not report.ok or not is_balanced(dag):
        raise InternalInvariantViolated(f"generator produced an invalid instance: {report.violations}")
    return dag


_WEIGHTS = {"subdivide": 4, "duplicate": 3, "chord": 1, "bridge": 4, "stack": 1, "attach": 1}


def _moves(b: _Builder, max_edges: int, max_sources: int) -> dict:
    room = max_edges - b.n_edges
    options = {}
    if room >= 1:
        options["subdivide"] = lambda rng: b.subdivide(rng.choice(sorted(b.ends)))

        def dup(rng):
            # any run of edges through in=out=1 vertices can be copied
            path = b.chain_from(rng.choice(sorted(b.ends)))
            b.duplicate_path(path[: rng.randint(1, min(len(path), room))])

        options["duplicate"] = dup
        if len(b.comps) >= 2:

            def bridge(rng):
                c = rng.randrange(len(b.comps) - 1)
                lower = b.side(c, top=True)[:-1]
                upper = b.side(c + 1, top=False)[1:]
                b.bridge(c, rng.choice(lower), rng.choice(upper))

            options["bridge"] = bridge
        chords = []
        for lower, upper in b.inner_faces():
            for start, end, from_lower in ((lower, upper, True), (upper, lower, False)):
                for e_out in start:
                    for e_in in end:
                        u, w = b.ends[e_out][0], b.ends[e_in][1]
                        if not b.reaches(w, u):
                            chords.append((e_out, e_in, from_lower))
        if chords:
            options["chord"] = lambda rng: b.chord(*rng.choice(chords))
    if room >= 1 and b.n_sources < max_sources:
        options["stack"] = lambda rng: b.stack()
    if room >= 2 and b.n_sources < max_sources:
        candidates = []
        for c in range(len(b.comps)):
            for top in (False, True):
                inner = b.side(c, top)[1:-1]
                if inner:
                    candidates.append((c, top, inner))
        if candidates:

            def attach(rng):
                c, top, inner = rng.choice(candidates)
                i = rng.randrange(len(inner))
                j = rng.randrange(i, len(inner))
                b.attach(c, inner[i], inner[j], top)

            options["attach"] = attach
    return options
