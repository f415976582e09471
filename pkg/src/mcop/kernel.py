"""Backend selection for the lattice point enumeration kernel.

The compiled extension is used when it was built and ``MCOP_PURE_PYTHON``
is unset; otherwise the pure-Python twin runs. Systems whose magnitudes could
overflow 64-bit arithmetic always take the Python path.
"""

from __future__ import annotations

import os
from array import array

from . import _kernel_py

try:
    if os.environ.get("MCOP_PURE_PYTHON"):
        raise ImportError("pure Python backend requested")
    from . import _kernel as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_LIMIT = 1 << 62


def pack_levels(n: int, levels: list[list[tuple[tuple[int, ...], int]]]):
    """Flatten per-level ``(coefs, rhs)`` rows into the kernel layout."""
    coefs: list[int] = []
    rhs: list[int] = []
    offsets = [0]
    for rows in levels:
        for a, b in rows:
            coefs.extend(a)
            coefs.extend([0] * (n - len(a)))
            rhs.append(b)
        offsets.append(len(rhs))
    return coefs, rhs, offsets


def fits_int64(n: int, coefs: list[int], rhs: list[int], offsets: list[int]) -> bool:
    """Conservative check that no partial sum in the DFS can overflow."""
    bound = [0] * n
    for k in range(n):
        worst = 0
        for r in range(offsets[k], offsets[k + 1]):
            base = r * n
            s = abs(rhs[r]) + sum(abs(coefs[base + j]) * bound[j] for j in range(k))
            if s >= _LIMIT:
                return False
            worst = max(worst, s)
        bound[k] = worst
    return True


def enumerate_levels(n, levels, count_only=False, backend=None):
    """Run the kernel on leveled rows; ``backend`` forces "python" or "cython"."""
    coefs, rhs, offsets = pack_levels(n, levels)
    use = backend or BACKEND
    if use == "cython" and _compiled is None:
        raise RuntimeError("compiled kernel is not available")
    if use == "cython" and fits_int64(n, coefs, rhs, offsets):
        return _compiled.enumerate_levels(
            n, array("q", coefs), array("q", rhs), array("q", offsets), count_only
        )
    return _kernel_py.enumerate_levels(n, coefs, rhs, offsets, count_only)
