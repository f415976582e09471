"""Pure-Python lattice point enumeration kernel.

Reference twin of ``_kernel.pyx``; both take the same flat layout:

* ``n`` coordinates, levels ``0 .. n-1``;
* level ``k`` owns rows ``offsets[k] .. offsets[k+1]-1``;
* row ``r`` has integer coefficients ``coefs[r*n : r*n + n]`` (only the
  first ``k+1`` are read, and entry ``k`` is nonzero) and integer bound
  ``rhs[r]`` meaning ``Σ coefs·x <= rhs``.

Every level must have at least one row bounding its coordinate from each
side. Points come out in lexicographic order.
"""

from __future__ import annotations


def _bounds(k, n, x, coefs, rhs, start, stop):
    lo = None
    hi = None
    for r in range(start, stop):
        base = r * n
        s = 0
        for j in range(k):
            c = coefs[base + j]
            if c:
                s += c * x[j]
        a = coefs[base + k]
        t = rhs[r] - s
        if a > 0:
            v = t // a
            if hi is None or v < hi:
                hi = v
        else:
            v = -(t // -a)
            if lo is None or v > lo:
                lo = v
    return lo, hi


def enumerate_levels(n, coefs, rhs, offsets, count_only=False):
    """Lattice points of the leveled system, or their number."""
    if n == 0:
        return 1 if count_only else [()]
    x = [0] * n
    hi = [0] * n
    out = []
    count = 0
    k = 0
    lo_k, hi[0] = _bounds(0, n, x, coefs, rhs, offsets[0], offsets[1])
    x[0] = lo_k
    while True:
        if x[k] > hi[k]:
            k -= 1
            if k < 0:
                break
            x[k] += 1
            continue
        if k == n - 1:
            if count_only:
                count += hi[k] - x[k] + 1
                x[k] = hi[k] + 1
            else:
                out.append(tuple(x))
                x[k] += 1
            continue
        k += 1
        lo_k, hi[k] = _bounds(k, n, x, coefs, rhs, offsets[k], offsets[k + 1])
        x[k] = lo_k
    return count if count_only else out
