# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
"""Compiled exact simplex kernel.

Same contract, same pivot rule, and the same pivot sequence as
``_simplex_py.solve``, so the two kernels return identical results on every
input. The representation differs: each tableau row is a list of Python
integer numerators with a single positive integer denominator, and pivoting
uses multiply-subtract updates followed by a gcd sweep per row (fraction-free
style). Ratio-test and reduced-cost comparisons reduce to integer sign and
cross-multiplication tests, which is where the speedup over per-entry
Fraction arithmetic comes from; Cython removes the loop overhead.

Values are arbitrary-precision Python ints throughout, so there is no
overflow and exactness is preserved.
"""

from fractions import Fraction
from math import gcd

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


cdef _reduce_row(list nums, object den):
    """Divide a numerator row and its denominator by their common gcd."""
    cdef Py_ssize_t j, w
    g = den
    w = len(nums)
    for j in range(w):
        v = nums[j]
        if v:
            g = gcd(g, v)
            if g == 1:
                return den
    if g > 1:
        for j in range(w):
            nums[j] = nums[j] // g
        den = den // g
    return den


cdef _pivot(list nums, list dens, list rednum, object redden, list basis,
            Py_ssize_t r, Py_ssize_t c):
    """Pivot on (r, c); returns the updated red-row denominator."""
    cdef Py_ssize_t i, j, m, w
    cdef list prow, row
    m = len(nums)
    prow = nums[r]
    w = len(prow)
    p = prow[c]
    if p < 0:
        for j in range(w):
            prow[j] = -prow[j]
        p = -p
    dens[r] = p
    dens[r] = _reduce_row(prow, dens[r])
    dr = dens[r]
    for i in range(m):
        if i == r:
            continue
        row = nums[i]
        f = row[c]
        if f:
            for j in range(w):
                pj = prow[j]
                if pj:
                    row[j] = row[j] * dr - f * pj
                else:
                    row[j] = row[j] * dr
            dens[i] = dens[i] * dr
            dens[i] = _reduce_row(row, dens[i])
    f = rednum[c]
    if f:
        for j in range(w):
            pj = prow[j]
            if pj:
                rednum[j] = rednum[j] * dr - f * pj
            else:
                rednum[j] = rednum[j] * dr
        redden = redden * dr
        redden = _reduce_row(rednum, redden)
    basis[r] = c
    return redden


cdef _optimize(list nums, list dens, list rednum, object redden, list basis,
               Py_ssize_t allowed):
    """Iterate to optimality; returns (ok, redden), ok False iff unbounded."""
    cdef Py_ssize_t i, j, m, enter, leave
    cdef list row
    m = len(nums)
    while True:
        enter = -1
        for j in range(allowed):
            if rednum[j] > 0:
                enter = j
                break
        if enter < 0:
            return True, redden
        leave = -1
        best_num = None
        best_den = None
        for i in range(m):
            row = nums[i]
            a = row[enter]
            if a > 0:
                rhs = row[len(row) - 1]
                if leave < 0:
                    leave = i
                    best_num = rhs
                    best_den = a
                else:
                    lhs = rhs * best_den
                    rhsc = best_num * a
                    if lhs < rhsc or (lhs == rhsc and basis[i] < basis[leave]):
                        leave = i
                        best_num = rhs
                        best_den = a
        if leave < 0:
            return False, redden
        redden = _pivot(nums, dens, rednum, redden, basis, leave, enter)


cdef _integerize(list fracs):
    cdef Py_ssize_t j
    den = 1
    for f in fracs:
        d = f.denominator
        den = den // gcd(den, d) * d
    nums = [f.numerator * (den // f.denominator) for f in fracs]
    return nums, den


def solve(objective, rows, rhs):
    """Return (status, solution, value); see _simplex_py.solve."""
    cdef Py_ssize_t i, j, m, n, width
    cdef list nums, dens, basis, rednum
    m = len(rows)
    n = len(objective)
    if len(rhs) != m:
        raise ValueError("rhs length does not match row count")
    obj = [Fraction(x) for x in objective]
    width = n + m + 1
    nums = []
    dens = []
    for i in range(m):
        row = rows[i]
        if len(row) != n:
            raise ValueError("row length does not match objective length")
        b = Fraction(rhs[i])
        if b < 0:
            vals = [-Fraction(x) for x in row]
            b = -b
        else:
            vals = [Fraction(x) for x in row]
        rnums, rden = _integerize(vals + [b])
        # splice in the artificial identity column before the rhs slot
        rhs_num = rnums.pop()
        for j in range(m):
            rnums.append(0)
        rnums[n + i] = rden
        rnums.append(rhs_num)
        nums.append(rnums)
        dens.append(rden)
    basis = list(range(n, n + m))

    zero = Fraction(0)
    redf = []
    for j in range(width):
        s = zero
        for i in range(m):
            s += Fraction((<list>nums[i])[j], dens[i])
        redf.append(s)
    for i in range(m):
        redf[n + i] = zero
    rednum, redden = _integerize(redf)
    ok, redden = _optimize(nums, dens, rednum, redden, basis, n + m)
    if rednum[width - 1] != 0:
        return INFEASIBLE, None, None

    for i in range(m):
        if basis[i] >= n:
            row = nums[i]
            c = -1
            for j in range(n):
                if row[j] != 0:
                    c = j
                    break
            if c >= 0:
                redden = _pivot(nums, dens, rednum, redden, basis, i, c)
    keep = [i for i in range(len(nums)) if basis[i] < n]
    nums = [nums[i] for i in keep]
    dens = [dens[i] for i in keep]
    basis = [basis[i] for i in keep]

    redf = []
    for j in range(width):
        s = obj[j] if j < n else zero
        for i in range(len(nums)):
            s -= obj[basis[i]] * Fraction((<list>nums[i])[j], dens[i])
        redf.append(s)
    rednum, redden = _integerize(redf)
    ok, redden = _optimize(nums, dens, rednum, redden, basis, n)
    if not ok:
        return UNBOUNDED, None, None
    solution = [zero] * n
    for i in range(len(nums)):
        solution[basis[i]] = Fraction((<list>nums[i])[width - 1], dens[i])
    value = -Fraction(rednum[width - 1], redden)
    return OPTIMAL, solution, value
