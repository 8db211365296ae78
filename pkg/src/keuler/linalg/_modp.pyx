# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Gaussian elimination over a prime field (p < 2**26).

Products of two residues stay below 2**52, so the quotient by p can be
taken through a double reciprocal and corrected by one step.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef inline int64_t _mulred(int64_t x, double pinv, int64_t p):
    cdef int64_t q = <int64_t>(<double>x * pinv)
    x -= q * p
    if x < 0:
        x += p
    elif x >= p:
        x -= p
    return x


cdef inline int64_t _inv_mod(int64_t a, int64_t p):
    cdef int64_t t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def echelon_mod_p(int64_t[:, ::1] a, int64_t p, bint reduced=False):
    """Row-reduce ``a`` in place modulo ``p``; return the pivot columns.

    Entries must already lie in [0, p) and p must be below 2**26.  With
    ``reduced`` the result is the reduced echelon form (pivot rows on top,
    pivots normalized to 1).
    """
    cdef Py_ssize_t nr = a.shape[0], nc = a.shape[1]
    cdef Py_ssize_t row = 0, col, r, c, piv, t, nnz, start
    cdef int64_t inv, f, tmp
    cdef double pinv = 1.0 / <double>p
    cdef cnp.ndarray[cnp.intp_t, ndim=1] cols_arr = np.empty(max(nc, 1), dtype=np.intp)
    cdef cnp.intp_t[::1] cols = cols_arr
    pivots = []
    for col in range(nc):
        if row >= nr:
            break
        piv = -1
        for r in range(row, nr):
            if a[r, col] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != row:
            for c in range(col, nc):
                tmp = a[row, c]
                a[row, c] = a[piv, c]
                a[piv, c] = tmp
        inv = _inv_mod(a[row, col], p)
        nnz = 0
        for c in range(col, nc):
            if a[row, c] != 0:
                a[row, c] = _mulred(a[row, c] * inv, pinv, p)
                cols[nnz] = c
                nnz += 1
        start = 0 if reduced else row + 1
        for r in range(start, nr):
            if r == row:
                continue
            f = a[r, col]
            if f == 0:
                continue
            f = p - f
            for t in range(nnz):
                c = cols[t]
                a[r, c] = _mulred(a[r, c] + f * a[row, c], pinv, p)
        pivots.append(col)
        row += 1
    return pivots
