# cython: language_level=3
"""Compiled kernels for the 2**N vertex loops.

``powers`` is always the table ``q**k`` for ``k = -N..N`` stored at offset
``N``; the pure-Python twin in ``_kernels_py`` consumes the same table, so
both produce bit-identical output.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


def inversion_numbers(int N):
    cdef Py_ssize_t dim = 1 << N
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(dim, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    cdef Py_ssize_t x
    cdef int k, ones, inv
    with nogil:
        for x in range(dim):
            ones = 0
            inv = 0
            for k in range(N - 1, -1, -1):
                if (x >> k) & 1:
                    ones += 1
                else:
                    inv += ones
            o[x] = inv
    return out


def aq_csr(int N, const double[::1] powers):
    """CSR arrays of the weighted q-adjacency, columns sorted within rows."""
    cdef Py_ssize_t dim = 1 << N
    cdef Py_ssize_t nnz = dim * N
    indptr = np.arange(0, nnz + 1, N, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] indices = np.empty(nnz, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] data = np.empty(nnz, dtype=np.float64)
    cdef cnp.int64_t[::1] ind = indices
    cdef double[::1] dat = data
    cdef Py_ssize_t x, pos
    cdef long long bit, mask
    cdef int b, s
    with nogil:
        for x in range(dim):
            pos = x * N
            # neighbours below x: clear a set bit, highest bit first
            for b in range(N - 1, -1, -1):
                bit = 1LL << b
                if x & bit:
                    mask = bit - 1
                    s = __builtin_popcountll(x & mask)
                    ind[pos] = x ^ bit
                    dat[pos] = powers[N - b + 2 * s]
                    pos += 1
            # neighbours above x: set a clear bit, lowest bit first
            for b in range(N):
                bit = 1LL << b
                if not (x & bit):
                    mask = bit - 1
                    s = __builtin_popcountll(x & mask)
                    ind[pos] = x ^ bit
                    dat[pos] = powers[N - b + 2 * s]
                    pos += 1
    return indptr, indices, data


def aq_matvec(int N, const double[::1] powers, const double[::1] v):
    """Matrix-free product of the weighted q-adjacency with ``v``."""
    cdef Py_ssize_t dim = 1 << N
    if v.shape[0] != dim:
        raise ValueError(f"vector length {v.shape[0]} != {dim}")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(dim, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t x
    cdef long long bit
    cdef int b, s
    cdef double acc
    with nogil:
        for x in range(dim):
            acc = 0.0
            for b in range(N):
                bit = 1LL << b
                s = __builtin_popcountll(x & (bit - 1))
                acc = acc + powers[N - b + 2 * s] * v[x ^ bit]
            o[x] = acc
    return out
