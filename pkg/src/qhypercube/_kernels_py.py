"""Pure numpy implementations of the compiled kernels in ``_kernels.pyx``.

Same signatures, same ``powers`` table convention, same summation order.
"""

import numpy as np


def _trailing_popcounts(N, idx):
    # counts[b][x] = number of set bits of x strictly below bit b
    counts = np.zeros((N + 1, idx.size), dtype=np.int64)
    for b in range(N):
        counts[b + 1] = counts[b] + ((idx >> b) & 1)
    return counts


def inversion_numbers(N):
    dim = 1 << N
    idx = np.arange(dim, dtype=np.int64)
    ones = np.zeros(dim, dtype=np.int64)
    inv = np.zeros(dim, dtype=np.int64)
    for k in range(N - 1, -1, -1):
        bit = (idx >> k) & 1
        inv += (1 - bit) * ones
        ones += bit
    return inv


def aq_csr(N, powers):
    powers = np.asarray(powers, dtype=np.float64)
    dim = 1 << N
    idx = np.arange(dim, dtype=np.int64)
    counts = _trailing_popcounts(N, idx)
    cols = np.empty((dim, N), dtype=np.int64)
    vals = np.empty((dim, N), dtype=np.float64)
    for b in range(N):
        cols[:, b] = idx ^ (1 << b)
        vals[:, b] = powers[N - b + 2 * counts[b]]
    order = np.argsort(cols, axis=1, kind="stable")
    indices = np.take_along_axis(cols, order, axis=1).ravel()
    data = np.take_along_axis(vals, order, axis=1).ravel()
    indptr = np.arange(0, dim * N + 1, N, dtype=np.int64)
    return indptr, indices, data


def aq_matvec(N, powers, v):
    powers = np.asarray(powers, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    dim = 1 << N
    if v.shape[0] != dim:
        raise ValueError(f"vector length {v.shape[0]} != {dim}")
    idx = np.arange(dim, dtype=np.int64)
    out = np.zeros(dim, dtype=np.float64)
    trailing = np.zeros(dim, dtype=np.int64)
    for b in range(N):
        out += powers[N - b + 2 * trailing] * v[idx ^ (1 << b)]
        trailing += (idx >> b) & 1
    return out
