"""End-to-end numerical verification of the q-hypercube / chain correspondence."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import bitlattice as bl
from . import chain, dicke, evolve, operators, polys
from .qnum import as_q, q_binomial, q_number

__all__ = ["SUITE_CAP", "Check", "VerificationReport", "run_suite"]

SUITE_CAP = 14


def _num(x: float) -> float:
    return float(format(float(x), ".12g"))


@dataclass(frozen=True)
class Check:
    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)

    def as_dict(self):
        return {
            "name": self.name,
            "max_error": _num(self.max_error),
            "tolerance": _num(self.tolerance),
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    n: int
    q: float
    checks: list = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, max_error, tolerance):
        self.checks.append(Check(name, float(max_error), float(tolerance)))

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self):
        return {
            "n": self.n,
            "q": _num(self.q),
            "checks": [c.as_dict() for c in self.checks],
            "overall": self.overall,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"N={self.n} q={format(self.q, '.12g')}"]
        for c in self.checks:
            flag = "PASS" if c.passed else "FAIL"
            lines.append(
                f"{flag}  {c.name:<28s} max_error={format(c.max_error, '.3e')}  "
                f"tolerance={format(c.tolerance, '.1e')}"
            )
        lines.append(f"overall: {'PASS' if self.overall else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _operator_checks(rep, N, q):
    Aq = operators.build_Aq(N, q, check=False)
    err = max(
        operators.construction_error(Aq, operators.twisted_primitive_Aq(N, q)),
        operators.construction_error(Aq, operators.tensor_sum_Aq(N, q)),
    )
    rep.add("construction_equivalence", err, 1e-12)
    structure = 0.0 if (Aq.is_symmetric() and Aq.nnz == N * (1 << N)) else 1.0
    rep.add("aq_structure", structure, 0.0)
    coassoc = 0.0
    for g in ("sigma_minus", "sigma_plus"):
        closed = operators.coproduct_power(g, N, q)
        for nesting in ("left", "right"):
            rec = operators.iterated_coproduct(g, N, q, nesting)
            coassoc = max(coassoc, operators.construction_error(rec, closed))
    rep.add("coassociativity", coassoc, 1e-12)
    return Aq


def _dicke_checks(rep, N, q):
    basis = dicke.dicke_basis(N, q)
    route = 0.0
    norm = 0.0
    for n, vec in dicke.lowering_sequence(N, q):
        ref = basis.column(n)
        route = max(route, float(np.max(np.abs(vec - ref))))
        norm = max(norm, abs(float(np.linalg.norm(ref)) - 1.0))
    rep.add("dicke_route_equivalence", route, 1e-12)
    rep.add("dicke_norm", norm, 1e-12)
    return basis


def _lattice_checks(rep, N, q):
    err = 0.0
    for n in range(N + 1):
        ref = q_binomial(N, n, q)
        err = max(err, abs(bl.inversion_sum(N, n, q) - ref) / ref)
    rep.add("inversion_sum", err, 1e-10)

    inv = bl.all_inversions(N)
    wt = bl.all_weights(N)
    idx = np.arange(1 << N)
    bad = 0
    for b in range(N):
        i = N - b
        x = idx[(idx >> b) & 1 == 0]
        y = x | (1 << b)
        bad += int(np.count_nonzero(inv[x] - inv[y] != wt[x] + i - N))
    rep.add("inversion_step", bad, 0)


def _worked_example(rep, q):
    table = {"1100": 4, "1010": 3, "1001": 2, "0110": 2, "0101": 1, "0011": 0}
    bad = sum(abs(bl.inversion_number(bl.BitString.from_str(s)) - v) for s, v in table.items())
    closed = {"1100": q**-2, "1010": q**-1, "1001": 1.0, "0110": 1.0, "0101": q, "0011": q**2}
    norm = math.sqrt(q**-4 + q**-2 + 2 + q**2 + q**4)
    vec = dicke.qdicke_direct(4, 2, q)
    err = max(abs(vec[int(s, 2)] - c / norm) for s, c in closed.items())
    rep.add("worked_example_n4", max(float(bad), err), 1e-12)


def _chain_checks(rep, N, q, Aq, basis):
    pc = chain.check_projection(N, q, Aq=Aq, basis=basis)
    rep.add("projection", pc.max_error, chain.PROJECTION_TOL)
    rep.add("projection_leakage", pc.leakage, chain.LEAKAGE_TOL)
    rep.add("invariant_subspace", pc.subspace_residual, chain.LEAKAGE_TOL)
    H = chain.build_Hq(N, q)
    R = chain.single_excitation_restriction(N, q)
    scale = max(1.0, float(np.max(H.couplings)))
    rep.add("single_excitation_restriction", float(np.max(np.abs(R.couplings - H.couplings))) / scale, 1e-12)


def _spectral_checks(rep, N, q, tol):
    sr = polys.spectral_verify(N, q)
    rep.add("spectrum", sr.spectrum, tol)
    rep.add("orthogonality", sr.orthogonality, tol)
    rep.add("eigen_residual", sr.eigen_residual, tol)
    if sr.recurrence is not None:
        rep.add("krawtchouk_recurrence", sr.recurrence, tol)


def _q1_checks(rep, N):
    # kernel-built A vs the plain sum of I x..x sigma_x x..x I
    A = operators.build_A(N)
    plain = operators.tensor_sum_Aq(N, 1.0)
    rep.add("q1_adjacency", float(abs(A.matrix - plain.matrix).max()), 0.0)
    # the generic q-formula evaluated at q = 1 against sqrt((n+1)(N-n))
    err = 0.0
    for n in range(N):
        generic = 1.0 ** (n - N / 2) * math.sqrt(1.0 * q_number(n + 1, 1.0) * q_number(N - n, 1.0))
        err = max(err, abs(generic - math.sqrt((n + 1) * (N - n))))
        err = max(err, abs(chain.coupling(N, n, 1.0) - math.sqrt((n + 1) * (N - n))))
    rep.add("q1_couplings", err, 0.0)
    rep.add("q1_wavefunction_limit", polys.q1_limit_error(N, 1e-6), 1e-4)


def _evolution_checks(rep, N, q, tol):
    psi0 = np.zeros(N + 1)
    psi0[0] = 1.0
    unit = 0.0
    methods = 0.0
    for t in (0.5, 5.0, 50.0, 100.0):
        spec = evolve.EvolutionSpec(N, q, t)
        a = evolve.evolve_state(spec, psi0, "spectral")
        b = evolve.evolve_state(spec, psi0, "dense")
        unit = max(unit, abs(float(np.linalg.norm(a)) - 1.0))
        methods = max(methods, float(np.max(np.abs(a - b))))
    rep.add("unitarity", unit, 1e-12)
    rep.add("evolution_methods", methods, tol)
    rep.add("pst_q1", abs(1.0 - evolve.transfer_fidelity(N, 1.0, math.pi / 2)), 1e-10)
    rep.add("mirror_inversion_q1", evolve.mirror_inversion_error(N), 1e-10)


def run_suite(N, q, tol=1e-9) -> VerificationReport:
    """Run every identity check for ``N`` sites and deformation ``q``.

    Order: operators, q-Dicke states, bit-string identities, projection,
    spectral data, q = 1 degenerations, dynamics.
    """
    N = int(N)
    if not 1 <= N <= SUITE_CAP:
        raise ValueError(f"N must be in [1, {SUITE_CAP}], got {N}")
    q = as_q(q)
    rep = VerificationReport(N, q)
    Aq = _operator_checks(rep, N, q)
    basis = _dicke_checks(rep, N, q)
    _lattice_checks(rep, N, q)
    _worked_example(rep, q)
    _chain_checks(rep, N, q, Aq, basis)
    _spectral_checks(rep, N, q, tol)
    _q1_checks(rep, N)
    _evolution_checks(rep, N, q, tol)
    return rep
