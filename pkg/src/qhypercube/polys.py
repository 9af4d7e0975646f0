"""Krawtchouk and dual q-Krawtchouk wavefunctions of the chain Hamiltonians.

The terminating 3phi2 series behind the dual q-Krawtchouk polynomials is an
alternating sum whose terms exceed the result by many orders of magnitude
once ``N`` grows past ~8 (for ``q = 0.5`` and ``N = 10`` double precision
already loses every digit). Every series and normalization here is therefore
evaluated in exact rational arithmetic on the binary value of the float
inputs and rounded once at the end.

Normalization, with base ``Q`` and ``c < 0``::

    w(x) = (c Q^-l, Q^-l; Q)_x (1 - c Q^(2x-l)) c^-x Q^(x(2l-x))
           / ((Q, c Q; Q)_x (1 - c Q^-l))
    h(n) = (1/c; Q)_l (Q; Q)_n (c Q^-l)^n / (Q^-l; Q)_n
    Khat_n(x) = sqrt(w(x) / h(n)) K_n(lambda(x); c, l | Q)

i.e. the multi-symbol ``(c Q^-l, Q^-l; Q)_x`` carries the base after the
semicolon. With ``Q = q**2``, ``c = -1`` and ``l = N`` the matrix
``U[n, k] = Khat_n(k)`` is orthogonal and its column ``k`` is an eigenvector
of ``H_q`` with eigenvalue ``[N - 2k]_q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .chain import build_Hq, predicted_spectrum
from .qnum import as_q, q_number

__all__ = [
    "DualQKrawtchoukParams",
    "phi32_terminating",
    "normalized_dual_q_krawtchouk",
    "wavefunction_matrix",
    "column_eigenvalues",
    "krawtchouk_polynomial",
    "krawtchouk_wavefunction",
    "krawtchouk_matrix",
    "SpectralReport",
    "spectral_verify",
    "q1_limit_error",
    "format_table",
]


@dataclass(frozen=True)
class DualQKrawtchoukParams:
    """Parameters ``(c, ell, base)`` of ``K_n(lambda(x); c, ell | base)``."""

    c: float
    ell: int
    base: float

    def __post_init__(self):
        if not self.c < 0:
            raise ValueError(f"c must be negative, got {self.c}")
        if int(self.ell) != self.ell or self.ell < 0:
            raise ValueError(f"ell must be a non-negative integer, got {self.ell}")
        if not self.base > 0:
            raise ValueError(f"base must be positive, got {self.base}")
        object.__setattr__(self, "ell", int(self.ell))

    @classmethod
    def for_chain(cls, N, q) -> "DualQKrawtchoukParams":
        q = as_q(q)
        return cls(-1.0, int(N), q * q)

    def spectral_point(self, x) -> float:
        """``lambda(x) = base^-x + c base^(x - ell)``."""
        return self.base ** (-x) + self.c * self.base ** (x - self.ell)


def _poch(a: Fraction, p: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    term = a
    for _ in range(n):
        out *= 1 - term
        term *= p
    return out


def _poch_row(a: Fraction, p: Fraction, n: int) -> list:
    """``[(a; p)_0, ..., (a; p)_n]``."""
    row = [Fraction(1)]
    term = a
    for _ in range(n):
        row.append(row[-1] * (1 - term))
        term *= p
    return row


def _check_degrees(n, x, ell):
    if not (0 <= n <= ell and 0 <= x <= ell):
        raise ValueError(f"need 0 <= n, x <= {ell}, got n={n}, x={x}")


def _rising(a, j):
    out = Fraction(1)
    for i in range(j):
        out *= a + i
    return out


def _phi32_exact(n, x, c: Fraction, ell, p: Fraction) -> Fraction:
    if p == 1:
        # base -> 1 limit: 2F1(-n, -x; -ell; 1 - c)
        total = Fraction(0)
        for j in range(min(n, x) + 1):
            total += (
                _rising(-n, j) * _rising(-x, j) * (1 - c) ** j
                / (_rising(-ell, j) * math.factorial(j))
            )
        return total
    total = Fraction(0)
    for j in range(min(n, x) + 1):
        den = _poch(p, p, j) * _poch(p**-ell, p, j)
        assert den != 0, "series ran past the lattice size"
        num = _poch(p**-n, p, j) * _poch(p**-x, p, j) * _poch(c * p ** (x - ell), p, j)
        total += num / den * p**j
    return total


def phi32_terminating(n, x, params: DualQKrawtchoukParams) -> float:
    """``3phi2(Q^-n, Q^-x, c Q^(x-l); Q^-l, 0 | Q; Q)`` with ``Q = params.base``.

    Finite sum over ``j = 0..min(n, x)``; the lower parameter 0 contributes
    ``(0; Q)_j = 1``. At ``base = 1`` the classical limit
    ``2F1(-n, -x; -l; 1 - c)`` is returned.
    """
    _check_degrees(n, x, params.ell)
    return float(_phi32_exact(n, x, Fraction(params.c), params.ell, Fraction(params.base)))


@lru_cache(maxsize=64)
def _exact_wavefunctions(c: float, ell: int, base: float) -> np.ndarray:
    C, p = Fraction(c), Fraction(base)
    size = ell + 1
    out = np.empty((size, size))
    if p == 1:
        # weight C(l, x) (-1/c)^x, norm (1 - 1/c)^l (-c)^n / C(l, n)
        for n in range(size):
            for x in range(size):
                rad = Fraction(math.comb(ell, x) * math.comb(ell, n)) * (-1 / C) ** x
                rad /= (1 - 1 / C) ** ell * (-C) ** n
                s = _phi32_exact(n, x, C, ell, p)
                out[n, x] = math.copysign(math.sqrt(rad * s * s), s)
        return out

    pinv = p**-ell
    lower = _poch_row(pinv, p, ell)  # (Q^-l; Q)_j
    qq = _poch_row(p, p, ell)  # (Q; Q)_j
    neg = [_poch_row(p**-k, p, k) for k in range(size)]  # (Q^-k; Q)_j, j <= k
    den = [qq[j] * lower[j] for j in range(size)]

    series = [[Fraction(0)] * size for _ in range(size)]
    for x in range(size):
        third = _poch_row(C * p ** (x - ell), p, x)
        for n in range(size):
            total = Fraction(0)
            pj = Fraction(1)
            for j in range(min(n, x) + 1):
                total += neg[n][j] * neg[x][j] * third[j] / den[j] * pj
                pj *= p
            series[n][x] = total

    cpoch = _poch_row(C * pinv, p, ell)
    cq = _poch_row(C * p, p, ell)
    head = 1 - C * pinv
    weight = []
    for x in range(size):
        w = cpoch[x] * lower[x] * (1 - C * p ** (2 * x - ell)) * C**-x * p ** (x * (2 * ell - x))
        weight.append(w / (qq[x] * cq[x] * head))
    total_norm = _poch(1 / C, p, ell)
    norm = [total_norm * qq[n] * (C * pinv) ** n / lower[n] for n in range(size)]

    for n in range(size):
        for x in range(size):
            rad = weight[x] / norm[n]
            if rad <= 0:
                raise ArithmeticError(
                    f"nonpositive radicand {float(rad):.3e} at n={n}, x={x} (c={c}, base={base})"
                )
            s = series[n][x]
            val = math.sqrt(rad * s * s)
            if not math.isfinite(val):
                raise OverflowError(f"wavefunction entry n={n}, x={x} is not finite")
            out[n, x] = math.copysign(val, s) if s else 0.0
    return out


def normalized_dual_q_krawtchouk(n, x, params: DualQKrawtchoukParams) -> float:
    """Orthonormalized dual q-Krawtchouk function ``Khat_n(lambda(x); c, l | Q)``."""
    _check_degrees(n, x, params.ell)
    return float(_exact_wavefunctions(params.c, params.ell, params.base)[n, x])


def wavefunction_matrix(N, q) -> np.ndarray:
    """``U[n, k] = <n|omega_k>`` for the chain ``H_q`` on ``N + 1`` sites.

    Columns are signed so their first nonzero entry is positive.
    """
    params = DualQKrawtchoukParams.for_chain(N, q)
    U = _exact_wavefunctions(params.c, params.ell, params.base).copy()
    for k in range(U.shape[1]):
        nz = np.flatnonzero(U[:, k])
        if nz.size and U[nz[0], k] < 0:
            U[:, k] = -U[:, k]
    return U


def column_eigenvalues(N, q) -> np.ndarray:
    """Eigenvalue ``[N - 2k]_q`` carried by column ``k`` of :func:`wavefunction_matrix`."""
    q = as_q(q)
    return np.array([q_number(N - 2 * k, q) for k in range(N + 1)])


def krawtchouk_polynomial(n, k, N, p=0.5) -> float:
    """Classical ``K_n(k; p, N) = 2F1(-n, -k; -N; 1/p)``, exact rational sum."""
    _check_degrees(n, k, N)
    inv = 1 / Fraction(p)
    total = Fraction(0)
    for j in range(min(n, k) + 1):
        total += _rising(-n, j) * _rising(-k, j) * inv**j / (_rising(-N, j) * math.factorial(j))
    return float(total)


def krawtchouk_wavefunction(n, k, N) -> float:
    """``2^(-N/2) sqrt(C(N,n) C(N,k)) K_n(k; 1/2, N)``."""
    _check_degrees(n, k, N)
    scale = math.sqrt(math.comb(N, n) * math.comb(N, k) / 2.0**N)
    return scale * krawtchouk_polynomial(n, k, N)


def krawtchouk_matrix(N) -> np.ndarray:
    return np.array([[krawtchouk_wavefunction(n, k, N) for k in range(N + 1)] for n in range(N + 1)])


@dataclass(frozen=True)
class SpectralReport:
    n_sites: int
    q: float
    eigen_residual: float
    orthogonality: float
    spectrum: float
    recurrence: float | None
    eigenvalues: np.ndarray

    def ok(self, tol=1e-9) -> bool:
        checks = [self.eigen_residual, self.orthogonality, self.spectrum]
        if self.recurrence is not None:
            checks.append(self.recurrence)
        return all(v <= tol for v in checks)


def spectral_verify(N, q) -> SpectralReport:
    """Residuals of the eigen-system built from the wavefunction matrix.

    * ``eigen_residual``: ``max_k |H_q U[:,k] - [N-2k]_q U[:,k]|_inf``
    * ``orthogonality``: ``|U^T U - I|_max``
    * ``spectrum``: sorted eigensolver output vs ``{[2k-N]_q}``
    * ``recurrence`` (``q = 1`` only): three-term recurrence of the
      Krawtchouk wavefunctions, ``(N-2k) phi_n = J_n phi_(n+1) + J_(n-1) phi_(n-1)``
    """
    q = as_q(q)
    H = build_Hq(N, q)
    U = wavefunction_matrix(N, q)
    lam = column_eigenvalues(N, q)
    resid = float(np.max(np.abs(H.to_dense() @ U - U * lam)))
    ortho = float(np.max(np.abs(U.T @ U - np.eye(N + 1))))
    ev = np.sort(H.eigenvalues())
    spec = float(np.max(np.abs(ev - predicted_spectrum(N, q))))
    rec = None
    if q == 1.0:
        K = krawtchouk_matrix(N)
        J = np.asarray(H.couplings)
        rec = 0.0
        for k in range(N + 1):
            phi = K[:, k]
            rhs = np.zeros(N + 1)
            rhs[:-1] += J * phi[1:]
            rhs[1:] += J * phi[:-1]
            rec = max(rec, float(np.max(np.abs((N - 2 * k) * phi - rhs))))
    return SpectralReport(N, q, resid, ortho, spec, rec, ev)


def q1_limit_error(N, eps=1e-6) -> float:
    """Entrywise gap between the q-wavefunctions at ``1 + eps`` and the Krawtchouk matrix.

    Columns are compared up to sign.
    """
    U = wavefunction_matrix(N, 1.0 + eps)
    K = krawtchouk_matrix(N)
    err = 0.0
    for k in range(N + 1):
        err = max(err, min(np.max(np.abs(U[:, k] - K[:, k])), np.max(np.abs(U[:, k] + K[:, k]))))
    return float(err)


def format_table(U) -> str:
    """Rows ``n``, columns ``k``, 12 significant digits."""
    size = U.shape[1]
    head = "n\\k," + ",".join(str(k) for k in range(size))
    rows = [f"{n}," + ",".join(format(float(v), ".12g") for v in U[n]) for n in range(U.shape[0])]
    return "\n".join([head] + rows) + "\n"
