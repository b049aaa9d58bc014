# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled inner loops for witness testing."""
import numpy as np


def product_mask(const int[:, ::1] xs, const int[:, ::1] kpow,
                 const long[::1] exps, bint x_first):
    """mask[r] is 1 iff the product over t of (x, k^exps[t]) is the identity.

    Each factor pair is ``x k^e`` when ``x_first`` else ``k^e x``; rows of
    ``kpow`` hold the powers ``k^0, k^1, ...``.  Points are followed one at a
    time so a row is rejected at its first moved point.
    """
    cdef Py_ssize_t m = xs.shape[0]
    cdef Py_ssize_t deg = xs.shape[1]
    cdef Py_ssize_t n = exps.shape[0]
    out = np.ones(m, dtype=np.uint8)
    cdef unsigned char[::1] mv = out
    cdef Py_ssize_t r, i, t
    cdef int j
    with nogil:
        for r in range(m):
            for i in range(deg):
                j = <int>i
                if x_first:
                    for t in range(n):
                        j = xs[r, j]
                        j = kpow[exps[t], j]
                else:
                    for t in range(n):
                        j = kpow[exps[t], j]
                        j = xs[r, j]
                if j != i:
                    mv[r] = 0
                    break
    return out


def product_rows(const int[:, ::1] xs, const int[:, ::1] kpow,
                 const long[::1] exps, bint x_first):
    """Image rows of the same products, for callers that need the elements."""
    cdef Py_ssize_t m = xs.shape[0]
    cdef Py_ssize_t deg = xs.shape[1]
    cdef Py_ssize_t n = exps.shape[0]
    out = np.empty((m, deg), dtype=np.int32)
    cdef int[:, ::1] ov = out
    cdef Py_ssize_t r, i, t
    cdef int j
    with nogil:
        for r in range(m):
            for i in range(deg):
                j = <int>i
                if x_first:
                    for t in range(n):
                        j = xs[r, j]
                        j = kpow[exps[t], j]
                else:
                    for t in range(n):
                        j = kpow[exps[t], j]
                        j = xs[r, j]
                ov[r, i] = j
    return out


def table_product_ids(const int[:, ::1] table, const long[::1] xs, const long[::1] kids,
                      const long[::1] exps, bint x_first):
    """Ids of the products computed through a Cayley table; ``kids[e]`` is k^e."""
    cdef Py_ssize_t m = xs.shape[0]
    cdef Py_ssize_t n = exps.shape[0]
    out = np.empty(m, dtype=np.int64)
    cdef long[::1] ov = out
    cdef Py_ssize_t r, t
    cdef long acc, x
    with nogil:
        for r in range(m):
            x = xs[r]
            acc = 0
            if x_first:
                for t in range(n):
                    acc = table[acc, x]
                    acc = table[acc, kids[exps[t]]]
            else:
                for t in range(n):
                    acc = table[acc, kids[exps[t]]]
                    acc = table[acc, x]
            ov[r] = acc
    return out
