"""Dicke and q-Dicke states on N qubits.

Two constructions are provided: the closed inversion-number form
(:func:`qdicke_direct`) and repeated application of the coproduct lowering
operator ``X^-`` to ``|0...0>`` (:func:`qdicke_lowering`). The lowering
route refuses to return a vector that disagrees with the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bitlattice import MAX_SITES, all_inversions, all_weights
from .operators import ConstructionMismatch, coproduct_power
from .qnum import as_q, q_binomial, q_factorial

__all__ = [
    "ROUTE_TOL",
    "qdicke_support",
    "qdicke_direct",
    "qdicke_lowering",
    "lowering_sequence",
    "DickeBasis",
    "dicke_basis",
    "format_state",
]

ROUTE_TOL = 1e-12


def _check(N, n):
    N, n = int(N), int(n)
    if not 1 <= N <= MAX_SITES:
        raise ValueError(f"number of sites must be in [1, {MAX_SITES}], got {N}")
    if not 0 <= n <= N:
        raise ValueError(f"weight must be in [0, {N}], got {n}")
    return N, n


def _support(N, n, q, weights=None, inversions=None):
    if weights is None:
        weights = all_weights(N)
    if inversions is None:
        inversions = all_inversions(N)
    idx = np.flatnonzero(weights == n)
    expo = n * (N - n) / 2.0 - inversions[idx]
    coeffs = q**expo / math.sqrt(q_binomial(N, n, q))
    return idx, coeffs


def qdicke_support(N, n, q):
    """Weight-class form of ``|D_q^N(n)>``: (indices, coefficients).

    Coefficient of ``|x>`` is ``q^(n(N-n)/2 - inv(x)) / sqrt([N n]_q)``.
    """
    N, n = _check(N, n)
    return _support(N, n, as_q(q))


def qdicke_direct(N, n, q) -> np.ndarray:
    """Dense ``2**N`` vector of the q-Dicke state from the inversion-number form."""
    N, n = _check(N, n)
    idx, coeffs = _support(N, n, as_q(q))
    out = np.zeros(1 << N)
    out[idx] = coeffs
    return out


def lowering_sequence(N, q):
    """Yield ``(n, |D_q^N(n)>)`` for ``n = 0..N`` by repeated ``X^-``.

    Each raw power ``(X^-)^n |0...0>`` is divided by ``[n]_q! sqrt([N n]_q)``.
    """
    N, _ = _check(N, 0)
    q = as_q(q)
    xm = coproduct_power("sigma_minus", N, q).matrix
    v = np.zeros(1 << N)
    v[0] = 1.0
    for n in range(N + 1):
        if n:
            v = xm @ v
        yield n, v / (q_factorial(n, q) * math.sqrt(q_binomial(N, n, q)))


def qdicke_lowering(N, n, q) -> np.ndarray:
    """q-Dicke state from the lowering operator, checked against the closed form."""
    N, n = _check(N, n)
    q = as_q(q)
    for k, vec in lowering_sequence(N, q):
        if k == n:
            break
    ref = qdicke_direct(N, n, q)
    err = float(np.max(np.abs(vec - ref)))
    if err > ROUTE_TOL:
        raise ConstructionMismatch(f"q-Dicke routes disagree for N={N}, n={n}, q={q}: {err:.3e}")
    return vec


@dataclass(frozen=True)
class DickeBasis:
    """The ``N + 1`` q-Dicke states stored in weight-class form."""

    n_sites: int
    q: float
    indices: tuple = field(repr=False)
    coeffs: tuple = field(repr=False)

    def __len__(self):
        return self.n_sites + 1

    @property
    def dim(self) -> int:
        return 1 << self.n_sites

    def column(self, n) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices[n]] = self.coeffs[n]
        return out

    def columns(self) -> list:
        return [self.column(n) for n in range(len(self))]

    def to_dense(self) -> np.ndarray:
        """``2**N x (N+1)`` matrix with the states as columns."""
        return np.column_stack(self.columns())

    def overlap(self, m, w) -> float:
        """``<D_q(m)|w>`` for a dense vector ``w``, touching only the support."""
        return float(np.dot(self.coeffs[m], np.asarray(w)[self.indices[m]]))

    def gram(self) -> np.ndarray:
        # distinct weights have disjoint supports, so off-diagonal entries are exactly 0
        g = np.zeros((len(self), len(self)))
        for n in range(len(self)):
            g[n, n] = float(np.dot(self.coeffs[n], self.coeffs[n]))
        return g


def dicke_basis(N, q) -> DickeBasis:
    """All q-Dicke states ``|D_q^N(0)>, ..., |D_q^N(N)>``."""
    N, _ = _check(N, 0)
    q = as_q(q)
    weights = all_weights(N)
    inversions = all_inversions(N)
    idx, coeffs = [], []
    for n in range(N + 1):
        i, c = _support(N, n, q, weights, inversions)
        idx.append(i)
        coeffs.append(c)
    return DickeBasis(N, q, tuple(idx), tuple(coeffs))


def format_state(N, indices, coeffs) -> str:
    """One ``bitstring coefficient`` line per support entry, sorted by index."""
    order = np.argsort(indices, kind="stable")
    lines = [
        f"{format(int(indices[k]), f'0{N}b')} {format(float(coeffs[k]), '.12g')}" for k in order
    ]
    return "\n".join(lines) + "\n"
