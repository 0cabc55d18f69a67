"""Exact integer linear algebra: rank, saturated lattice bases, determinants."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import InvalidInput

IntVector = tuple[int, ...]


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals (fraction-free elimination)."""
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return 0
    n = len(mat[0])
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        pr = mat[r]
        for i in range(r + 1, len(mat)):
            x = mat[i][c]
            if x:
                mat[i] = [pr[c] * a - x * b for a, b in zip(mat[i], pr)]
        r += 1
        if r == len(mat):
            break
    return r


def hermite_rows(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by ``rows``; zero rows dropped."""
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return []
    n = len(mat[0])
    r = 0
    for c in range(n):
        if r == len(mat):
            break
        if not any(mat[i][c] for i in range(r, len(mat))):
            continue
        while True:
            b = min((i for i in range(r, len(mat)) if mat[i][c]), key=lambda i: abs(mat[i][c]))
            mat[r], mat[b] = mat[b], mat[r]
            for i in range(r + 1, len(mat)):
                q = mat[i][c] // mat[r][c]
                if q:
                    mat[i] = [x - q * y for x, y in zip(mat[i], mat[r])]
            if not any(mat[i][c] for i in range(r + 1, len(mat))):
                break
        if mat[r][c] < 0:
            mat[r] = [-x for x in mat[r]]
        for i in range(r):
            q = mat[i][c] // mat[r][c]
            if q:
                mat[i] = [x - q * y for x, y in zip(mat[i], mat[r])]
        r += 1
    return mat[:r]


def saturated_basis(rows: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """HNF basis of Z^n intersected with the rational span of ``rows``.

    Unimodular column operations bring the generator matrix to column
    echelon form ``A U = [H | 0]``; the first ``rank`` rows of ``U^-1``
    then form a primitive basis of the saturated lattice.
    """
    mat = [list(r) for r in rows if any(r)]
    inv = [[int(i == j) for j in range(n)] for i in range(n)]
    piv = 0
    for row in mat:
        if piv == n:
            break
        while True:
            nz = [c for c in range(piv, n) if row[c]]
            if len(nz) <= 1:
                break
            b = min(nz, key=lambda c: abs(row[c]))
            for a in nz:
                if a == b:
                    continue
                q = row[a] // row[b]
                # column a -= q * column b; row b of U^-1 += q * row a
                for r2 in mat:
                    r2[a] -= q * r2[b]
                inv[b] = [x + q * y for x, y in zip(inv[b], inv[a])]
        nz = [c for c in range(piv, n) if row[c]]
        if not nz:
            continue
        c = nz[0]
        if c != piv:
            for r2 in mat:
                r2[c], r2[piv] = r2[piv], r2[c]
            inv[c], inv[piv] = inv[piv], inv[c]
        piv += 1
    return hermite_rows(inv[:piv])


def coordinates(basis: Sequence[Sequence[int]], vector: Sequence[int]) -> list[int]:
    """Integer coordinates of ``vector`` in an HNF basis; InvalidInput if none."""
    rest = list(vector)
    out = []
    for row in basis:
        c = next(i for i, x in enumerate(row) if x)
        q, r = divmod(rest[c], row[c])
        if r:
            raise InvalidInput("vector is not in the lattice")
        out.append(q)
        if q:
            rest = [x - q * y for x, y in zip(rest, row)]
    if any(rest):
        raise InvalidInput("vector is not in the lattice")
    return out


def determinant(mat: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    m = [list(r) for r in mat]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve_rational(mat: Sequence[Sequence[object]], rhs: Sequence[object]) -> list[Fraction] | None:
    """Unique solution of a consistent full-column-rank system, else None."""
    rows = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(mat, rhs)]
    if not rows:
        return []
    ncol = len(rows[0]) - 1
    r = 0
    where = []
    for c in range(ncol):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            return None
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        where.append(r)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    return [rows[i][-1] for i in where]
