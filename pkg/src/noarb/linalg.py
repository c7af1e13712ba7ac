"""Exact dense linear algebra over rationals.

Gaussian elimination utilities used by the geometry and symmetry layers:
rank, one solution of A z = b, and a nontrivial kernel vector. Matrices here
are tiny (bounded by the market dimension plus one), so asymptotics are
irrelevant and exactness is everything.
"""

from __future__ import annotations

from fractions import Fraction


def _copy(matrix):
    return [[Fraction(x) for x in row] for row in matrix]


def _forward_eliminate(mat):
    """Row-reduce in place; returns the list of pivot columns."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def rank(matrix) -> int:
    if not matrix:
        return 0
    mat = _copy(matrix)
    return len(_forward_eliminate(mat))


def solve(matrix, rhs):
    """One exact solution of matrix . z = rhs, or None if inconsistent.

    Free variables are set to zero, so the result is deterministic.
    """
    m = len(matrix)
    if m == 0:
        return []
    n = len(matrix[0])
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    pivots = _forward_eliminate(aug)
    if n in pivots:
        return None
    sol = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        sol[c] = aug[r][n]
    # rows below the pivot rows are all-zero on the left; check their rhs
    for i in range(len(pivots), m):
        if aug[i][n] != 0:
            return None
    return sol


def kernel_vector(matrix):
    """A nontrivial exact solution of matrix . z = 0, or None if only z = 0."""
    if not matrix:
        return None
    n = len(matrix[0])
    mat = _copy(matrix)
    pivots = _forward_eliminate(mat)
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    f = free[0]
    z = [Fraction(0)] * n
    z[f] = Fraction(1)
    for r, c in enumerate(pivots):
        z[c] = -mat[r][f]
    return z


def mat_vec(matrix, x):
    return tuple(sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in matrix)


def mat_mul(a, b):
    rows = len(a)
    inner = len(b)
    cols = len(b[0])
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(inner)), Fraction(0)) for j in range(cols))
        for i in range(rows)
    )
