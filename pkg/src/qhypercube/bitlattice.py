"""Bit strings of the N-cube: Hamming distance, weights and inversion numbers.

Convention used throughout the package: a string ``x = (x_1, ..., x_N)``
is stored as the integer ``sum_i x_i * 2**(N - i)``, so ``x_1`` is the most
significant bit and the leftmost tensor factor. This matches
``numpy.kron`` ordering of the basis ``|0> = (1, 0)``, ``|1> = (0, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from . import _backend
from .qnum import as_q

__all__ = [
    "MAX_SITES",
    "BitString",
    "hamming_distance",
    "inversion_number",
    "enumerate_weight",
    "weight_class_indices",
    "inversion_sum",
    "inversion_step",
    "all_weights",
    "all_inversions",
]

MAX_SITES = 24


def _check_sites(N):
    N = int(N)
    if not 1 <= N <= MAX_SITES:
        raise ValueError(f"number of sites must be in [1, {MAX_SITES}], got {N}")
    return N


@dataclass(frozen=True, order=True)
class BitString:
    """A vertex of the N-cube.

    Parameters
    ----------
    length : int
        Number of sites ``N``.
    index : int
        Basis position, ``x_1`` in the most significant bit.
    """

    length: int
    index: int

    def __post_init__(self):
        _check_sites(self.length)
        if not 0 <= self.index < (1 << self.length):
            raise ValueError(f"index {self.index} out of range for {self.length} sites")

    @classmethod
    def from_str(cls, s: str) -> "BitString":
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a bit string: {s!r}")
        return cls(len(s), int(s, 2))

    @classmethod
    def from_bits(cls, bits) -> "BitString":
        return cls.from_str("".join(str(int(b)) for b in bits))

    @property
    def bits(self) -> tuple:
        N = self.length
        return tuple((self.index >> (N - 1 - k)) & 1 for k in range(N))

    @property
    def weight(self) -> int:
        return self.index.bit_count()

    @property
    def inversions(self) -> int:
        return inversion_number(self)

    def __str__(self):
        return format(self.index, f"0{self.length}b")


def hamming_distance(x: BitString, y: BitString) -> int:
    """Number of positions where ``x`` and ``y`` differ."""
    if x.length != y.length:
        raise ValueError(f"length mismatch: {x.length} vs {y.length}")
    return (x.index ^ y.index).bit_count()


def inversion_number(x: BitString) -> int:
    """Count pairs ``i < j`` with ``x_i = 1`` and ``x_j = 0``.

    This is the number of adjacent swaps needed to sort ``x`` into
    ``0...01...1``.
    """
    ones = 0
    inv = 0
    for b in x.bits:
        if b:
            ones += 1
        else:
            inv += ones
    return inv


def weight_class_indices(N: int, n: int) -> np.ndarray:
    """Indices of all weight-``n`` strings on ``N`` sites, increasing."""
    N = _check_sites(N)
    n = int(n)
    if not 0 <= n <= N:
        raise ValueError(f"weight must be in [0, {N}], got {n}")
    idx = np.flatnonzero(all_weights(N) == n)
    assert idx.size == comb(N, n)
    return idx


def enumerate_weight(N: int, n: int) -> list:
    """All ``C(N, n)`` strings of weight ``n`` in increasing index order."""
    N = _check_sites(N)
    n = int(n)
    if not 0 <= n <= N:
        raise ValueError(f"weight must be in [0, {N}], got {n}")
    out = []
    for ones in combinations(range(N), n):
        out.append(sum(1 << (N - 1 - k) for k in ones))
    return [BitString(N, i) for i in sorted(out)]


def inversion_sum(N: int, n: int, q) -> float:
    """Sum of ``q^(n(N-n) - 2 inv(x))`` over all weight-``n`` strings.

    Evaluates the left side of the generating-function identity for the
    inversion statistic by explicit enumeration; the result equals
    :func:`qhypercube.qnum.q_binomial` ``(N, n, q)``.
    """
    q = as_q(q)
    strings = enumerate_weight(N, n)
    shift = n * (N - n)
    return float(sum(q ** (shift - 2 * inversion_number(x)) for x in strings))


def inversion_step(x: BitString, y: BitString) -> int:
    """Return ``inv(x) - inv(y)`` for ``y`` obtained by setting one 0-bit of ``x``.

    Checks that the difference equals ``n + i - N`` where ``n`` is the weight
    of ``x`` and ``i`` the 1-based position where the strings differ.
    """
    if x.length != y.length:
        raise ValueError(f"length mismatch: {x.length} vs {y.length}")
    diff = x.index ^ y.index
    if diff.bit_count() != 1 or y.index & diff == 0:
        raise ValueError(f"{y} is not {x} with a single 0 flipped to 1")
    N = x.length
    i = N - diff.bit_length() + 1
    n = x.weight
    delta = inversion_number(x) - inversion_number(y)
    if delta != n + i - N:
        raise AssertionError(f"inv({x}) - inv({y}) = {delta}, expected {n + i - N}")
    return delta


def all_weights(N: int) -> np.ndarray:
    """Hamming weight of every index in ``[0, 2**N)`` as an int64 array."""
    N = _check_sites(N)
    idx = np.arange(1 << N, dtype=np.int64)
    w = np.zeros(1 << N, dtype=np.int64)
    for k in range(N):
        w += (idx >> k) & 1
    return w


def all_inversions(N: int) -> np.ndarray:
    """Inversion number of every index in ``[0, 2**N)``."""
    return _backend.inversion_numbers(_check_sites(N))
