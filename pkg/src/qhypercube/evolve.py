"""One-excitation dynamics of the chain Hamiltonians (hbar = 1)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .chain import TridiagonalOperator, build_Hq
from .polys import column_eigenvalues, wavefunction_matrix
from .qnum import as_q

__all__ = [
    "EvolutionSpec",
    "evolve_state",
    "transfer_fidelity",
    "fidelity_scan",
    "mirror_inversion_error",
    "format_scan",
]


@dataclass(frozen=True)
class EvolutionSpec:
    n_sites: int
    q: float
    t: float
    hamiltonian: TridiagonalOperator | None = None

    def __post_init__(self):
        object.__setattr__(self, "q", as_q(self.q))
        if self.hamiltonian is None:
            object.__setattr__(self, "hamiltonian", build_Hq(self.n_sites, self.q))


def _eigensystem(spec: EvolutionSpec, method: str):
    if method == "spectral":
        return column_eigenvalues(spec.n_sites, spec.q), wavefunction_matrix(spec.n_sites, spec.q)
    if method == "dense":
        return sla.eigh(spec.hamiltonian.to_dense())
    raise ValueError(f"method must be 'spectral' or 'dense', got {method!r}")


def evolve_state(spec: EvolutionSpec, psi0, method="spectral") -> np.ndarray:
    """``psi(t) = sum_k exp(-i E_k t) <omega_k|psi0> |omega_k>``.

    ``method="spectral"`` uses the dual q-Krawtchouk eigen-system,
    ``"dense"`` a symmetric eigensolver on the tridiagonal matrix.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (spec.n_sites + 1,):
        raise ValueError(f"state must have length {spec.n_sites + 1}, got {psi0.shape}")
    if spec.t == 0:
        return psi0.copy()
    energies, U = _eigensystem(spec, method)
    amps = U.T @ psi0
    return U @ (np.exp(-1j * energies * spec.t) * amps)


def _site(N, n):
    e = np.zeros(N + 1, dtype=complex)
    e[n] = 1.0
    return e


def transfer_fidelity(N, q, t, method="spectral") -> float:
    """End-to-end amplitude ``|<N| exp(-i H_q t) |0>|``."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    psi = evolve_state(EvolutionSpec(N, q, t), _site(N, 0), method)
    return float(min(1.0, abs(psi[N])))


def fidelity_scan(N, q, t_max, steps):
    """Fidelity on ``steps + 1`` equally spaced times in ``[0, t_max]``."""
    if t_max < 0 or steps < 1:
        raise ValueError("need t_max >= 0 and steps >= 1")
    energies = column_eigenvalues(N, q)
    U = wavefunction_matrix(N, q)
    ts = np.linspace(0.0, float(t_max), int(steps) + 1)
    # <N|e^{-iHt}|0> = sum_k U[N,k] U[0,k] e^{-i E_k t}
    weights = U[N] * U[0]
    amps = np.exp(-1j * np.outer(ts, energies)) @ weights
    return ts, np.minimum(1.0, np.abs(amps))


def mirror_inversion_error(N, t=math.pi / 2) -> float:
    """``max_n | |<N-n| exp(-i H t) |n>| - 1 |`` for the ``q = 1`` chain."""
    U = wavefunction_matrix(N, 1.0)
    E = column_eigenvalues(N, 1.0)
    prop = U @ np.diag(np.exp(-1j * E * t)) @ U.T
    return float(max(abs(abs(prop[N - n, n]) - 1.0) for n in range(N + 1)))


def format_scan(ts, fids) -> str:
    lines = ["t,fidelity"] + [f"{format(float(t), '.12g')},{format(float(f), '.12g')}" for t, f in zip(ts, fids)]
    return "\n".join(lines) + "\n"
