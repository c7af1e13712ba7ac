"""Independent certificate validation by plain rational arithmetic.

Nothing here calls the LP kernel. Each check recomputes the claimed sums
and sign conditions exactly, so a certificate emitted by ``noarb.geometry``
(or read back from a JSON report) can be validated without trusting the
solver that produced it:

  * a hull certificate proves its target lies in co(E) by exhibiting the
    convex combination;
  * a full-support certificate with every weight strictly positive proves
    the target lies in ri(co(E));
  * a weak witness h (h.y >= 0 for all y, > 0 somewhere) proves 0 is not in
    ri(co(E)): no representation of 0 can put positive weight on a point
    with h.y > 0;
  * a strict separator h (h.y > 0 for all y) proves 0 is not in co(E).
"""

from __future__ import annotations

from fractions import Fraction

from .geometry import (
    STRICT_SEPARATOR,
    WEAK_ARBITRAGE_WITNESS,
    HullCertificate,
    PointSet,
    SeparationCertificate,
)
from .rational import dot, vec

_ZERO = Fraction(0)


def check_hull_certificate(E: PointSet, x, cert: HullCertificate, require_interior: bool = False) -> bool:
    """True iff cert proves x in co(E); with require_interior, x in ri(co(E)).

    Interior mode demands full support: every index of E present exactly
    once with a strictly positive weight.
    """
    x = vec(x)
    if len(x) != E.dim:
        return False
    n = len(E.points)
    seen = set()
    for i in cert.indices:
        if not 0 <= i < n or i in seen:
            return False
        seen.add(i)
    if require_interior:
        if len(seen) != n:
            return False
        if any(w <= 0 for w in cert.weights):
            return False
    elif any(w < 0 for w in cert.weights):
        return False
    if sum(cert.weights, _ZERO) != 1:
        return False
    return cert.combination(E) == x


def check_weak_witness(E: PointSet, cert: SeparationCertificate) -> bool:
    """True iff h.y >= 0 for every y in E with strict inequality somewhere."""
    if cert.kind != WEAK_ARBITRAGE_WITNESS or len(cert.h) != E.dim:
        return False
    strict = False
    for y in E.points:
        v = dot(cert.h, y)
        if v < 0:
            return False
        if v > 0:
            strict = True
    return strict


def check_strict_separator(E: PointSet, cert: SeparationCertificate) -> bool:
    """True iff h.y > 0 for every y in E."""
    if cert.kind != STRICT_SEPARATOR or len(cert.h) != E.dim:
        return False
    return all(dot(cert.h, y) > 0 for y in E.points)


def check_separation(E: PointSet, cert: SeparationCertificate) -> bool:
    if cert.kind == WEAK_ARBITRAGE_WITNESS:
        return check_weak_witness(E, cert)
    return check_strict_separator(E, cert)
