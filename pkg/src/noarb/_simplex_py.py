"""Dense exact simplex over rationals: the pure-Python reference kernel.

Solves

    maximize  c . z    subject to    A z = b,  z >= 0

by the two-phase tableau method with Bland's smallest-index anti-cycling
rule. Every entry is a ``fractions.Fraction`` and every comparison is exact,
so the solver terminates on all inputs and is fully deterministic: a fixed
input yields a fixed pivot sequence and a fixed optimal basic solution.

Phase 1 appends one artificial variable per row (after flipping rows to make
the right-hand side nonnegative) and maximizes minus their sum; the problem
is feasible iff that optimum is exactly zero. Artificials still basic at the
end are pivoted out, and rows that cannot be pivoted out are redundant and
dropped. Phase 2 then maximizes the real objective over the original
variables only.

Pivot rule (identical in the compiled kernel, which must reproduce this
pivot sequence bit for bit):
  entering: the smallest column index with strictly positive reduced cost;
  leaving:  the row minimizing rhs/pivot over strictly positive pivot
            entries, ties broken by the smallest basis variable index.
"""

from __future__ import annotations

from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _pivot(tableau, red, basis, r, c):
    row = tableau[r]
    piv = row[c]
    if piv != _ONE:
        inv = _ONE / piv
        row = [x * inv for x in row]
        tableau[r] = row
    # only the pivot row's nonzero columns change anything; rational
    # multiply-subtract is costly enough that skipping zeros pays off
    nz = [j for j, b in enumerate(row) if b != 0]
    for i, other in enumerate(tableau):
        if i == r:
            continue
        f = other[c]
        if f != 0:
            other = other[:]
            for j in nz:
                other[j] -= f * row[j]
            tableau[i] = other
    f = red[c]
    if f != 0:
        for j in nz:
            red[j] -= f * row[j]
    basis[r] = c


def _optimize(tableau, red, basis, allowed):
    """Run simplex iterations until optimal (True) or unbounded (False)."""
    while True:
        enter = -1
        for j in range(allowed):
            if red[j] > 0:
                enter = j
                break
        if enter < 0:
            return True
        leave = -1
        best_num = best_den = None
        for i, row in enumerate(tableau):
            a = row[enter]
            if a > 0:
                rhs = row[-1]
                if leave < 0:
                    leave, best_num, best_den = i, rhs, a
                else:
                    lhs = rhs * best_den
                    rhsc = best_num * a
                    if lhs < rhsc or (lhs == rhsc and basis[i] < basis[leave]):
                        leave, best_num, best_den = i, rhs, a
        if leave < 0:
            return False
        _pivot(tableau, red, basis, leave, enter)


def solve(objective, rows, rhs):
    """Return (status, solution, value) for the standard-form LP.

    status is "optimal", "infeasible" or "unbounded"; solution is the
    optimal basic solution as a list of Fractions (length len(objective))
    and value the exact optimum, both None unless optimal.
    """
    m = len(rows)
    n = len(objective)
    if len(rhs) != m:
        raise ValueError("rhs length does not match row count")
    objective = [Fraction(x) for x in objective]
    width = n + m + 1
    tableau = []
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError("row length does not match objective length")
        b = Fraction(rhs[i])
        if b < 0:
            ext = [-Fraction(x) for x in row]
            b = -b
        else:
            ext = [Fraction(x) for x in row]
        ext.extend([_ZERO] * m)
        ext[n + i] = _ONE
        ext.append(b)
        tableau.append(ext)
    basis = list(range(n, n + m))

    # phase 1: maximize minus the sum of artificials; with the artificial
    # basis the reduced cost of column j is the column sum (zero on the
    # artificial columns themselves)
    red = [sum((tableau[i][j] for i in range(m)), _ZERO) for j in range(width)]
    for i in range(m):
        red[n + i] = _ZERO
    _optimize(tableau, red, basis, n + m)
    if red[-1] != 0:
        return INFEASIBLE, None, None

    # pivot leftover artificials out; rows with no real pivot are redundant
    for i in range(m):
        if basis[i] >= n:
            c = next((j for j in range(n) if tableau[i][j] != 0), None)
            if c is not None:
                _pivot(tableau, red, basis, i, c)
    keep = [i for i in range(len(tableau)) if basis[i] < n]
    tableau = [tableau[i] for i in keep]
    basis = [basis[i] for i in keep]

    # phase 2: real objective, entering restricted to the real variables
    red = []
    for j in range(width):
        s = objective[j] if j < n else _ZERO
        for i, row in enumerate(tableau):
            s -= objective[basis[i]] * row[j]
        red.append(s)
    if not _optimize(tableau, red, basis, n):
        return UNBOUNDED, None, None
    solution = [_ZERO] * n
    for i, row in enumerate(tableau):
        solution[basis[i]] = row[-1]
    return OPTIMAL, solution, -red[-1]
