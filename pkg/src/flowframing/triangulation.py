"""Simplices of maximal layering-cliques and their normalized volumes.

Volumes are measured in the saturated lattice of the affine hull of the
integer unit flows, so a simplex is unimodular iff its edge vectors form
a basis of that lattice.
"""

from __future__ import annotations

from dataclasses import dataclass

from .embedded_dag import EmbeddedDag
from .errors import InternalInvariantViolated, InvalidInput
from .lattice import coordinates, determinant, rank, saturated_basis
from .layerings import (
    J_vector,
    LayeringClique,
    enumerate_layerings,
    enumerate_maximal_layering_cliques,
    polytope_dimension,
)
from .routes import DEFAULT_LIMIT

__all__ = [
    "AffineLatticeBasis",
    "Simplex",
    "Triangulation",
    "affine_lattice_basis",
    "build_triangulation",
    "polytope_dimension",
    "simplex_normalized_volume",
]


@dataclass(frozen=True)
class Simplex:
    vertices: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class AffineLatticeBasis:
    origin: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]

    @property
    def d(self) -> int:
        return len(self.basis)

    def coordinates(self, point) -> list[int]:
        return coordinates(self.basis, [a - b for a, b in zip(point, self.origin)])


@dataclass(frozen=True)
class Triangulation:
    cells: tuple[tuple[LayeringClique, Simplex], ...]
    lattice: AffineLatticeBasis
    edge_ids: tuple[str, ...]

    @property
    def d(self) -> int:
        return self.lattice.d


def simplex_of(dag: EmbeddedDag, K: LayeringClique) -> Simplex:
    return Simplex(tuple(J_vector(p, dag) for p in K.layerings))


def affine_lattice_basis(dag: EmbeddedDag, limit: int = DEFAULT_LIMIT) -> AffineLatticeBasis:
    pts = [J_vector(p, dag) for p in enumerate_layerings(dag, limit)]
    origin = pts[0]
    diffs = [[a - b for a, b in zip(v, origin)] for v in pts[1:]]
    basis = saturated_basis(diffs, len(origin))
    return AffineLatticeBasis(origin, tuple(tuple(r) for r in basis))


def simplex_normalized_volume(s: Simplex, b: AffineLatticeBasis) -> int:
    if len(s.vertices) != b.d + 1:
        raise InvalidInput(f"a simplex in dimension {b.d} needs {b.d + 1} vertices, got {len(s.vertices)}")
    coords = [b.coordinates(v) for v in s.vertices]
    base = coords[0]
    mat = [[x - y for x, y in zip(c, base)] for c in coords[1:]]
    return abs(determinant(mat))


def build_triangulation(dag: EmbeddedDag, limit: int = DEFAULT_LIMIT) -> Triangulation:
    cliques = enumerate_maximal_layering_cliques(dag, limit)
    lattice = affine_lattice_basis(dag, limit)
    d = polytope_dimension(dag, limit)
    if lattice.d != d:
        raise InternalInvariantViolated(f"lattice rank {lattice.d} differs from dimension {d}")
    cells = []
    for K in cliques:
        s = simplex_of(dag, K)
        diffs = [[a - b for a, b in zip(v, s.vertices[0])] for v in s.vertices[1:]]
        if len(s.vertices) != d + 1 or rank(diffs) != d:
            raise InternalInvariantViolated("cell is not a full-dimensional simplex")
        vol = simplex_normalized_volume(s, lattice)
        if vol != 1:
            raise InternalInvariantViolated(f"cell has normalized volume {vol}")
        cells.append((K, s))
    return Triangulation(tuple(cells), lattice, dag.edge_ids)
