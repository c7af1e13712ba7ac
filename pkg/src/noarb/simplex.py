"""Kernel selection for the exact LP engine.

Two interchangeable kernels solve the same standard-form problem with the
same deterministic pivot sequence:

  * ``noarb._simplex_cy``: compiled (Cython) integer-tableau kernel;
  * ``noarb._simplex_py``: pure-Python Fraction tableau, always available.

The compiled kernel is preferred when importable. Set ``NOARB_KERNEL`` to
``python`` or ``compiled`` to force one (forcing ``compiled`` raises if the
extension is missing); the choice only affects speed, never results.
"""

from __future__ import annotations

import os

from . import _simplex_py

OPTIMAL = _simplex_py.OPTIMAL
INFEASIBLE = _simplex_py.INFEASIBLE
UNBOUNDED = _simplex_py.UNBOUNDED

_requested = os.environ.get("NOARB_KERNEL", "").strip().lower()
if _requested not in ("", "python", "compiled"):
    raise RuntimeError(f"NOARB_KERNEL must be 'python' or 'compiled', got {_requested!r}")

if _requested == "python":
    _impl = _simplex_py
    KERNEL = "python"
else:
    try:
        from . import _simplex_cy as _impl  # type: ignore[attr-defined]

        KERNEL = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise RuntimeError("NOARB_KERNEL=compiled but the compiled kernel is not built")
        _impl = _simplex_py
        KERNEL = "python"

solve = _impl.solve


def available_kernels():
    """All importable kernel modules, for cross-checking and benchmarks."""
    kernels = {"python": _simplex_py}
    try:
        from . import _simplex_cy  # type: ignore[attr-defined]

        kernels["compiled"] = _simplex_cy
    except ImportError:
        pass
    return kernels
