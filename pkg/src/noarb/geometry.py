"""Exact convex geometry of finite rational point sets, with certificates.

Everything here decides membership questions about co(E) and ri(co(E)) for a
finite set E of rational points, returning certificates that an independent
checker can re-validate with plain rational arithmetic (see
``noarb.certcheck``):

  * hull_membership:              x in co(E), convex-combination weights;
  * relative_interior_membership: x in ri(co(E)), strictly positive weights
                                  on every point;
  * is_disperse:                  every direction h either annihilates E or
                                  attains strictly positive and strictly
                                  negative products; refutations carry a
                                  weak witness h with h.y >= 0 for all y and
                                  h.y > 0 somewhere;
  * is_zero_neutral_set:          0 in co(E), else a strict separator h with
                                  h.y > 0 for all y;
  * caratheodory_reduce:          shrink a membership certificate to at most
                                  d+1 support points;
  * open_segment_member:          x in the open segment (a, b).

For finite E the convex hull is closed, so closed-hull questions reduce to
plain hull membership.

The relative-interior test uses the fact that for finite E, a point x lies
in ri(co(E)) iff x is a convex combination of all points of E with strictly
positive weights. One direction is immediate (such a combination exhibits a
neighborhood of x inside co(E) within the affine hull). Conversely, if
x in ri(co(E)), write the barycenter bc = (1/n) sum(E), which has an
all-positive representation by construction; x, being in the relative
interior, can be prolonged past itself through bc: z = x + t(x - bc) stays
in co(E) for a small rational t > 0, and then x = (z + t.bc)/(1 + t) mixes
z's representation with the all-positive one, making every weight strictly
positive. The decision is implemented as one exact LP:

    maximize t   s.t.   sum(lam_i y_i) = x,  sum(lam_i) = 1,  lam_i >= t

over the deduplicated points, with membership iff the optimum is strictly
positive; the weight of a duplicated point is then split evenly over its
duplicates so that every index of the original set carries positive weight.

All operations are pure functions on immutable values and are safe to call
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg, simplex
from .rational import dot, vec, vsub, zero_vec

WEAK_ARBITRAGE_WITNESS = "weak_arbitrage_witness"
STRICT_SEPARATOR = "strict_separator"

_ZERO = Fraction(0)
_ONE = Fraction(1)


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class PointSet:
    """A nonempty finite list of rational d-vectors; duplicates permitted."""

    dim: int
    points: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise GeometryError(f"dimension must be >= 1, got {self.dim}")
        if not self.points:
            raise GeometryError("point set must be nonempty")
        pts = tuple(vec(p) for p in self.points)
        for p in pts:
            if len(p) != self.dim:
                raise GeometryError(f"point of dimension {len(p)} in a set of dimension {self.dim}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_points(cls, points):
        pts = [vec(p) for p in points]
        if not pts:
            raise GeometryError("point set must be nonempty")
        return cls(len(pts[0]), tuple(pts))


@dataclass(frozen=True)
class HullCertificate:
    """Convex-combination weights over point indices of a PointSet."""

    indices: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        object.__setattr__(self, "weights", vec(self.weights))
        if len(self.indices) != len(self.weights):
            raise GeometryError("certificate indices and weights differ in length")

    def combination(self, E: PointSet):
        out = list(zero_vec(E.dim))
        for i, w in zip(self.indices, self.weights):
            p = E.points[i]
            for c in range(E.dim):
                out[c] += w * p[c]
        return tuple(out)


@dataclass(frozen=True)
class SeparationCertificate:
    """A direction h; kind states which sign conditions it witnesses."""

    h: tuple
    kind: str

    def __post_init__(self):
        object.__setattr__(self, "h", vec(self.h))
        if self.kind not in (WEAK_ARBITRAGE_WITNESS, STRICT_SEPARATOR):
            raise GeometryError(f"unknown separation kind {self.kind!r}")


@dataclass(frozen=True)
class DispersionVerdict:
    disperse: bool
    witness: "SeparationCertificate | None"


@dataclass(frozen=True)
class ZeroNeutralVerdict:
    zero_neutral: bool
    certificate: "HullCertificate | None"
    separator: "SeparationCertificate | None"


def _require_dim(E: PointSet, x):
    x = vec(x)
    if len(x) != E.dim:
        raise GeometryError(f"target of dimension {len(x)} against set of dimension {E.dim}")
    return x


def _dedupe(E: PointSet):
    """Unique points in first-occurrence order plus index groups."""
    uniques = []
    groups = []
    seen = {}
    for i, p in enumerate(E.points):
        j = seen.get(p)
        if j is None:
            seen[p] = len(uniques)
            uniques.append(p)
            groups.append([i])
        else:
            groups[j].append(i)
    return uniques, groups


def hull_membership(E: PointSet, x) -> "HullCertificate | None":
    """Certificate with x = sum(lam_i y_i), lam >= 0, sum = 1, or None.

    Exact LP feasibility; the certificate lists the support indices only.
    """
    x = _require_dim(E, x)
    n = len(E.points)
    rows = []
    rhs = []
    for c in range(E.dim):
        rows.append([E.points[i][c] for i in range(n)])
        rhs.append(x[c])
    rows.append([_ONE] * n)
    rhs.append(_ONE)
    status, sol, _ = simplex.solve([_ZERO] * n, rows, rhs)
    if status != simplex.OPTIMAL:
        return None
    idx = [i for i in range(n) if sol[i] != 0]
    return HullCertificate(tuple(idx), tuple(sol[i] for i in idx))


def relative_interior_membership(E: PointSet, x) -> "HullCertificate | None":
    """All-positive-weight certificate over every point of E, or None.

    Solves max t s.t. sum(lam_i y_i) = x, sum(lam_i) = 1, lam_i >= t >= 0
    over deduplicated points (lam_i = t + mu_i); x in ri(co(E)) iff the
    optimum is strictly positive. Restricting t to t >= 0 keeps the decision
    intact: any t <= 0 optimum means x is outside the relative interior.
    """
    x = _require_dim(E, x)
    uniques, groups = _dedupe(E)
    k = len(uniques)
    # variables: t, mu_1..mu_k
    rows = []
    rhs = []
    for c in range(E.dim):
        total = sum((u[c] for u in uniques), _ZERO)
        rows.append([total] + [u[c] for u in uniques])
        rhs.append(x[c])
    rows.append([Fraction(k)] + [_ONE] * k)
    rhs.append(_ONE)
    objective = [_ONE] + [_ZERO] * k
    status, sol, value = simplex.solve(objective, rows, rhs)
    if status != simplex.OPTIMAL or value <= 0:
        return None
    t = sol[0]
    weights = [_ZERO] * len(E.points)
    for j in range(k):
        lam = t + sol[1 + j]
        share = lam / len(groups[j])
        for i in groups[j]:
            weights[i] = share
    return HullCertificate(tuple(range(len(E.points))), tuple(weights))


def _box_direction_lp(E: PointSet, with_margin: bool):
    """Shared LP body for is_disperse and the strict separator.

    Variables are u_c (h_c = u_c - 1, boxed into [-1, 1]) plus one slack per
    box row and per point row, and optionally a margin variable delta:

        for every y:  h . y - [delta] - s_y = 0,   s_y >= 0
        for every c:  u_c + w_c = 2,               u_c, w_c >= 0

    Returns (status, h, delta_or_None).
    """
    uniques, _ = _dedupe(E)
    npts = len(uniques)
    d = E.dim
    nvars = d + d + npts + (1 if with_margin else 0)
    # variable layout: u_0..u_{d-1}, w_0..w_{d-1}, s_0..s_{npts-1}, [delta]
    rows = []
    rhs = []
    for i, y in enumerate(uniques):
        row = [_ZERO] * nvars
        for c in range(d):
            row[c] = y[c]
        row[2 * d + i] = -_ONE
        if with_margin:
            row[-1] = -_ONE
        rows.append(row)
        rhs.append(sum(y, _ZERO))
    for c in range(d):
        row = [_ZERO] * nvars
        row[c] = _ONE
        row[d + c] = _ONE
        rows.append(row)
        rhs.append(Fraction(2))
    objective = [_ZERO] * nvars
    if with_margin:
        objective[-1] = _ONE
    else:
        for c in range(d):
            objective[c] = sum((y[c] for y in uniques), _ZERO)
    status, sol, _ = simplex.solve(objective, rows, rhs)
    if status != simplex.OPTIMAL:
        return status, None, None
    h = tuple(sol[c] - _ONE for c in range(d))
    delta = sol[-1] if with_margin else None
    return status, h, delta


def is_disperse(E: PointSet) -> DispersionVerdict:
    """Disperse iff 0 lies in ri(co(E)); refutations carry a weak witness.

    The witness search maximizes sum over y of h.y subject to h.y >= 0 for
    every y and -1 <= h_c <= 1; the set fails to be disperse exactly when
    the optimum is strictly positive, and the optimal h is then a direction
    with h.y >= 0 everywhere and h.y > 0 somewhere.
    """
    uniques, _ = _dedupe(E)
    if len(uniques) == 1:
        # a singleton {y} is disperse iff y = 0: every product is then zero
        y = uniques[0]
        if all(c == 0 for c in y):
            return DispersionVerdict(True, None)
        peak = max(abs(c) for c in y)
        h = tuple(c / peak for c in y)
        return DispersionVerdict(False, SeparationCertificate(h, WEAK_ARBITRAGE_WITNESS))
    status, h, _ = _box_direction_lp(E, with_margin=False)
    if status != simplex.OPTIMAL:
        raise GeometryError("direction LP must be feasible and bounded")
    total = sum((dot(h, y) for y in uniques), _ZERO)
    if total == 0:
        return DispersionVerdict(True, None)
    return DispersionVerdict(False, SeparationCertificate(h, WEAK_ARBITRAGE_WITNESS))


def _strict_separator(E: PointSet) -> SeparationCertificate:
    """Strict separator for a set with 0 outside co(E); caller guarantees."""
    status, h, delta = _box_direction_lp(E, with_margin=True)
    if status != simplex.OPTIMAL or delta <= 0:
        raise GeometryError("strict separation requires 0 outside the hull")
    return SeparationCertificate(h, STRICT_SEPARATOR)


def is_zero_neutral_set(E: PointSet) -> ZeroNeutralVerdict:
    """0 in co(E) with certificate, else a strict separator.

    For finite E the closed convex hull is co(E) itself, so zero-neutrality
    is plain hull membership of the origin.
    """
    cert = hull_membership(E, zero_vec(E.dim))
    if cert is not None:
        return ZeroNeutralVerdict(True, cert, None)
    return ZeroNeutralVerdict(False, None, _strict_separator(E))


def caratheodory_reduce(E: PointSet, cert: HullCertificate) -> HullCertificate:
    """Equivalent certificate for the same target on at most d+1 points.

    Repeatedly removes an affine dependency from the support: with
    sum(gam_i y_i) = 0 and sum(gam_i) = 0, gam nonzero, the weights
    lam - t.gam stay nonnegative for t = min over gam_i > 0 of lam_i/gam_i
    and zero out at least one point, while the combination and weight sum
    are unchanged. Certificates already on at most d+1 points are returned
    unchanged.
    """
    n = len(E.points)
    seen = set()
    for i in cert.indices:
        if not 0 <= i < n:
            raise GeometryError(f"certificate index {i} out of range")
        if i in seen:
            raise GeometryError(f"certificate repeats index {i}")
        seen.add(i)
    if any(w < 0 for w in cert.weights):
        raise GeometryError("certificate weights must be nonnegative")
    if sum(cert.weights, _ZERO) != 1:
        raise GeometryError("certificate weights must sum to one")
    if len(cert.indices) <= E.dim + 1:
        return cert
    idx = [i for i, w in zip(cert.indices, cert.weights) if w != 0]
    lam = [w for w in cert.weights if w != 0]
    while len(idx) > E.dim + 1:
        # affine dependency: rows are the point coordinates plus an all-ones row
        matrix = [[E.points[i][c] for i in idx] for c in range(E.dim)]
        matrix.append([_ONE] * len(idx))
        gam = linalg.kernel_vector(matrix)
        if gam is None:
            raise GeometryError("affinely independent support larger than d+1 is impossible")
        if all(g <= 0 for g in gam):
            gam = [-g for g in gam]
        t = min(lam[i] / gam[i] for i in range(len(idx)) if gam[i] > 0)
        lam = [lam[i] - t * gam[i] for i in range(len(idx))]
        keep = [i for i in range(len(idx)) if lam[i] != 0]
        idx = [idx[i] for i in keep]
        lam = [lam[i] for i in keep]
    return HullCertificate(tuple(idx), tuple(lam))


def open_segment_member(x, a, b) -> bool:
    """True iff x = t.a + (1-t).b for some rational 0 < t < 1, exactly.

    The degenerate segment (a, a) is the singleton {a} under this formula,
    so x is a member iff x = a.
    """
    x = vec(x)
    a = vec(a)
    b = vec(b)
    if len(x) != len(a) or len(a) != len(b):
        raise GeometryError("open segment test requires equal dimensions")
    if a == b:
        return x == a
    diff = vsub(a, b)
    c = next(i for i in range(len(diff)) if diff[i] != 0)
    t = (x[c] - b[c]) / diff[c]
    if not 0 < t < 1:
        return False
    return all(x[i] == t * a[i] + (1 - t) * b[i] for i in range(len(x)))
