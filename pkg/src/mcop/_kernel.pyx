# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice point enumeration kernel (see ``_kernel_py`` for the layout).

Callers guarantee that all partial sums fit in a signed 64-bit integer.
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


cdef inline int64_t floor_div(int64_t t, int64_t a) nogil:
    # a > 0
    cdef int64_t q = t // a
    if (t % a != 0) and (t < 0):
        q -= 1
    return q


cdef inline int bounds(int k, int n, int64_t* x, const int64_t[:] coefs,
                       const int64_t[:] rhs, Py_ssize_t start, Py_ssize_t stop,
                       int64_t* lo, int64_t* hi) nogil:
    cdef Py_ssize_t r, base
    cdef int j
    cdef int64_t s, a, t, v
    cdef int have_lo = 0
    cdef int have_hi = 0
    for r in range(start, stop):
        base = r * n
        s = 0
        for j in range(k):
            s += coefs[base + j] * x[j]
        a = coefs[base + k]
        t = rhs[r] - s
        if a > 0:
            v = floor_div(t, a)
            if not have_hi or v < hi[0]:
                hi[0] = v
                have_hi = 1
        else:
            v = -floor_div(t, -a)
            if not have_lo or v > lo[0]:
                lo[0] = v
                have_lo = 1
    return have_lo and have_hi


def enumerate_levels(int n, const int64_t[:] coefs, const int64_t[:] rhs,
                     const int64_t[:] offsets, bint count_only=False):
    """Lattice points of the leveled system, or their number."""
    if n == 0:
        return 1 if count_only else [()]
    cdef int64_t* x = <int64_t*> malloc(n * sizeof(int64_t))
    cdef int64_t* hi = <int64_t*> malloc(n * sizeof(int64_t))
    cdef int64_t lo_k = 0
    cdef int64_t count = 0
    cdef int k = 0
    cdef int j
    out = []
    try:
        bounds(0, n, x, coefs, rhs, offsets[0], offsets[1], &lo_k, &hi[0])
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
                    out.append(tuple([x[j] for j in range(n)]))
                    x[k] += 1
                continue
            k += 1
            bounds(k, n, x, coefs, rhs, offsets[k], offsets[k + 1], &lo_k, &hi[k])
            x[k] = lo_k
    finally:
        free(x)
        free(hi)
    return count if count_only else out
