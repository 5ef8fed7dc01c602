"""Exact linear algebra over the rationals (dense, small matrices)."""

from __future__ import annotations

from fractions import Fraction


def _echelon(rows: list[list[Fraction]]):
    """In-place row echelon form; returns the list of pivot columns."""
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(matrix) -> int:
    rows = [[Fraction(x) for x in row] for row in matrix]
    return len(_echelon(rows))


def kernel(matrix) -> list[list[Fraction]]:
    """Basis of the right kernel {v : matrix @ v = 0}."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = _echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def solve(matrix, rhs) -> list[Fraction] | None:
    """One solution of ``matrix @ v = rhs`` or None if inconsistent."""
    rows = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    ncols = len(matrix[0]) if matrix else 0
    pivots = _echelon(rows)
    if ncols in pivots:
        return None
    v = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        v[pc] = rows[r][ncols]
    return v


def invert(matrix) -> list[list[Fraction]] | None:
    """Inverse of a square rational matrix, or None if singular."""
    m = len(matrix)
    rows = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(m)]
        for i, row in enumerate(matrix)
    ]
    pivots = _echelon(rows)
    if pivots != list(range(m)):
        return None
    return [row[m:] for row in rows]


def mat_vec(matrix, vec):
    return [sum(a * b for a, b in zip(row, vec)) for row in matrix]


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]
