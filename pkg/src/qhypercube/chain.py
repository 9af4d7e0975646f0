"""One-excitation XX chain Hamiltonians and the projection of ``A_q`` onto them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .dicke import DickeBasis, dicke_basis
from .operators import MATERIALIZE_CAP, SiteOperator, aq_operator
from .qnum import as_q, q_number

__all__ = [
    "PROJECTION_TOL",
    "LEAKAGE_TOL",
    "VerificationError",
    "TridiagonalOperator",
    "coupling",
    "build_Hq",
    "build_H",
    "project_Aq",
    "ProjectionCheck",
    "check_projection",
    "single_excitation_restriction",
    "predicted_spectrum",
    "spectrum_error",
]

PROJECTION_TOL = 1e-10
LEAKAGE_TOL = 1e-12


class VerificationError(RuntimeError):
    """A numerical identity failed beyond its tolerance."""


@dataclass(frozen=True)
class TridiagonalOperator:
    """Zero-diagonal symmetric tridiagonal matrix of size ``len(couplings) + 1``."""

    couplings: np.ndarray
    q: float = 1.0

    @property
    def n_sites(self) -> int:
        return len(self.couplings)

    @property
    def size(self) -> int:
        return len(self.couplings) + 1

    def to_dense(self) -> np.ndarray:
        J = np.asarray(self.couplings, dtype=float)
        return np.diag(J, 1) + np.diag(J, -1)

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v)
        J = np.asarray(self.couplings)
        out = np.zeros_like(v)
        out[:-1] += J * v[1:]
        out[1:] += J * v[:-1]
        return out

    def eigenvalues(self) -> np.ndarray:
        J = np.asarray(self.couplings, dtype=float)
        if J.size == 0:
            return np.zeros(1)
        return sla.eigh_tridiagonal(np.zeros(J.size + 1), J, eigvals_only=True)

    def eigh(self):
        J = np.asarray(self.couplings, dtype=float)
        return sla.eigh_tridiagonal(np.zeros(J.size + 1), J)

    def is_mirror_symmetric(self) -> bool:
        J = np.asarray(self.couplings)
        return bool(np.array_equal(J, J[::-1]))


def coupling(N, n, q) -> float:
    """``J_n = q^(n - N/2) sqrt(q [n+1]_q [N-n]_q)``, ``0 <= n < N``."""
    N, n = int(N), int(n)
    if not 0 <= n <= N - 1:
        raise ValueError(f"coupling index must be in [0, {N - 1}], got {n}")
    q = as_q(q)
    if q == 1.0:
        return math.sqrt((n + 1) * (N - n))
    return q ** (n - N / 2) * math.sqrt(q * q_number(n + 1, q) * q_number(N - n, q))


def build_Hq(N, q) -> TridiagonalOperator:
    N = int(N)
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    q = as_q(q)
    return TridiagonalOperator(np.array([coupling(N, n, q) for n in range(N)]), q)


def build_H(N) -> TridiagonalOperator:
    """Krawtchouk chain, couplings ``sqrt((n+1)(N-n))``."""
    return build_Hq(N, 1.0)


def project_Aq(Aq, basis: DickeBasis) -> np.ndarray:
    """Matrix ``<D_q(m)| A_q |D_q(n)>`` of size ``(N+1) x (N+1)``.

    ``Aq`` is anything with a ``matvec`` (stored or matrix-free).
    """
    N = basis.n_sites
    if Aq.n_sites != N:
        raise ValueError(f"operator has {Aq.n_sites} sites, basis has {N}")
    P = np.zeros((N + 1, N + 1))
    for n in range(N + 1):
        w = Aq.matvec(basis.column(n))
        for m in range(N + 1):
            P[m, n] = basis.overlap(m, w)
    return P


@dataclass(frozen=True)
class ProjectionCheck:
    n_sites: int
    q: float
    projected: np.ndarray
    max_error: float
    leakage: float
    subspace_residual: float

    @property
    def ok(self) -> bool:
        return (
            self.max_error <= PROJECTION_TOL
            and self.leakage <= LEAKAGE_TOL
            and self.subspace_residual <= LEAKAGE_TOL
        )


def check_projection(N, q, Aq=None, basis=None, raise_on_failure=False) -> ProjectionCheck:
    """Project ``A_q`` on the q-Dicke basis and compare with ``H_q``.

    ``max_error`` is the largest absolute entry difference, ``leakage`` the
    largest entry outside the tridiagonal band, ``subspace_residual`` the
    largest component of ``A_q |D_q(n)>`` left after removing its projection
    on the q-Dicke states, relative to ``max(1, |A_q |D_q(n)>|_inf)``.
    """
    q = as_q(q)
    if Aq is None:
        Aq = aq_operator(N, q)
    if basis is None:
        basis = dicke_basis(N, q)
    H = build_Hq(N, q).to_dense()
    P = np.zeros((N + 1, N + 1))
    resid = 0.0
    for n in range(N + 1):
        w = Aq.matvec(basis.column(n))
        r = w.copy()
        for m in range(N + 1):
            P[m, n] = basis.overlap(m, w)
            r[basis.indices[m]] -= P[m, n] * basis.coeffs[m]
        resid = max(resid, float(np.max(np.abs(r))) / max(1.0, float(np.max(np.abs(w)))))
    band = np.abs(np.subtract.outer(np.arange(N + 1), np.arange(N + 1))) == 1
    leakage = float(np.max(np.abs(P[~band]))) if (~band).any() else 0.0
    err = float(np.max(np.abs(P - H)))
    out = ProjectionCheck(N, q, P, err, leakage, resid)
    if raise_on_failure and not out.ok:
        raise VerificationError(
            f"projection failed for N={N}, q={q}: error {err:.3e}, leakage {leakage:.3e}, "
            f"residual {resid:.3e}"
        )
    return out


def _xx_chain(couplings):
    """``sum_n (J_n / 2)(sx_n sx_{n+1} + sy_n sy_{n+1})`` on ``len(J) + 1`` qubits."""
    sites = len(couplings) + 1
    sx = SiteOperator("sigma_x").matrix()
    sy = SiteOperator("sigma_y").matrix()
    # sy x sy is real: the two factors of i multiply to -1
    pair = sp.csr_matrix(np.kron(sx, sx) + np.real(np.kron(sy, sy)))
    eye = sp.identity(2, format="csr")
    total = sp.csr_matrix((1 << sites, 1 << sites))
    for n, J in enumerate(couplings):
        factors = [eye] * n + [pair] + [eye] * (sites - n - 2)
        total = total + (J / 2.0) * reduce(lambda a, b: sp.kron(a, b, format="csr"), factors)
    return total.tocsr()


def single_excitation_restriction(N, q) -> TridiagonalOperator:
    """Restrict the full ``N + 1`` qubit XX chain to one-spin-up states.

    ``|n>`` has its single up spin on site ``n``; the restricted matrix must
    equal :func:`build_Hq` or :class:`VerificationError` is raised.
    """
    N = int(N)
    if not 1 <= N <= MATERIALIZE_CAP - 1:
        raise ValueError(f"N must be in [1, {MATERIALIZE_CAP - 1}], got {N}")
    q = as_q(q)
    Hq = build_Hq(N, q)
    full = _xx_chain(Hq.couplings)
    states = [1 << (N - n) for n in range(N + 1)]
    R = full[states][:, states].toarray()
    ref = Hq.to_dense()
    err = float(np.max(np.abs(R - ref)))
    if err > 1e-12 * max(1.0, float(np.max(np.abs(ref)))):
        raise VerificationError(f"single-excitation restriction differs from H_q by {err:.3e}")
    return TridiagonalOperator(np.diag(R, 1).copy(), q)


def predicted_spectrum(N, q) -> np.ndarray:
    """Sorted multiset ``{[2k - N]_q : k = 0..N}``."""
    return np.sort([q_number(2 * k - N, q) for k in range(N + 1)])


def spectrum_error(N, q) -> float:
    """Max difference between sorted eigenvalues of ``H_q`` and the prediction."""
    ev = np.sort(build_Hq(N, q).eigenvalues())
    return float(np.max(np.abs(ev - predicted_spectrum(N, as_q(q)))))
