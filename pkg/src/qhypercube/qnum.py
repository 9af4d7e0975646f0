"""Symmetric q-numbers, q-factorials, q-binomials and q-Pochhammer symbols.

All functions take a real deformation parameter ``q > 0`` and return
floats. ``q = 1`` is an ordinary value: the symmetric q-number is always
evaluated as the Laurent sum ``q^(x-1) + q^(x-3) + ... + q^(1-x)``, which
equals ``x`` at ``q = 1`` and has no 0/0 anywhere near it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DeformationParameter",
    "as_q",
    "q_number",
    "q_factorial",
    "q_binomial",
    "q_pochhammer",
    "q_pochhammer_multi",
]


@dataclass(frozen=True)
class DeformationParameter:
    """A validated real deformation parameter ``q > 0``."""

    q: float

    def __post_init__(self):
        q = float(self.q)
        if not math.isfinite(q) or q <= 0.0:
            raise ValueError(f"deformation parameter must be a finite real > 0, got {self.q!r}")
        object.__setattr__(self, "q", q)

    def __float__(self):
        return self.q

    @property
    def is_classical(self) -> bool:
        return self.q == 1.0


def as_q(q) -> float:
    """Coerce ``q`` (float or :class:`DeformationParameter`) to a validated float."""
    if isinstance(q, DeformationParameter):
        return q.q
    return DeformationParameter(q).q


def q_number(x: int, q) -> float:
    """Symmetric q-number ``[x]_q = (q^x - q^-x) / (q - q^-1)``.

    Odd in ``x``; reduces to ``x`` at ``q = 1``.

    >>> q_number(2, 2.0)
    2.5
    >>> q_number(-3, 2.0)
    -5.25
    """
    q = as_q(q)
    x = int(x)
    if x == 0:
        return 0.0
    m = abs(x)
    if q == 1.0:
        val = float(m)
    else:
        # Pair q^k with q^-k so the sum is symmetric term by term.
        val = 0.0
        for j in range(m // 2):
            k = m - 1 - 2 * j
            val += q**k + q**-k
        if m % 2:
            val += 1.0
    return val if x > 0 else -val


def q_factorial(n: int, q) -> float:
    """``[n]_q! = [1]_q [2]_q ... [n]_q`` with ``[0]_q! = 1``."""
    n = int(n)
    if n < 0:
        raise ValueError(f"q_factorial needs n >= 0, got {n}")
    q = as_q(q)
    out = 1.0
    for k in range(2, n + 1):
        out *= q_number(k, q)
    return out


def q_binomial(N: int, n: int, q) -> float:
    """Symmetric q-binomial ``[N]_q! / ([n]_q! [N-n]_q!)``.

    Evaluated as ``prod [N-j]_q / prod [j+1]_q`` over the shorter side, so it
    is exactly symmetric under ``n -> N - n`` and exact at ``q = 1``.
    """
    N, n = int(N), int(n)
    if not 0 <= n <= N:
        raise ValueError(f"q_binomial needs 0 <= n <= N, got N={N}, n={n}")
    q = as_q(q)
    k = min(n, N - n)
    num = 1.0
    den = 1.0
    for j in range(k):
        num *= q_number(N - j, q)
        den *= q_number(j + 1, q)
    return num / den


def q_pochhammer(a: float, q: float, n: int) -> float:
    """``(a; q)_n = (1 - a)(1 - a q) ... (1 - a q^(n-1))``.

    The base ``q`` is taken as given (callers pass ``q**2`` where the
    polynomial base is the square of the deformation parameter).
    """
    n = int(n)
    if n < 0:
        raise ValueError(f"q_pochhammer needs n >= 0, got {n}")
    out = 1.0
    term = float(a)
    for _ in range(n):
        out *= 1.0 - term
        term *= q
    return out


def q_pochhammer_multi(args, q: float, n: int) -> float:
    """``(a_1, ..., a_r; q)_n``, the product of the individual symbols."""
    out = 1.0
    for a in args:
        out *= q_pochhammer(a, q, n)
    return out
