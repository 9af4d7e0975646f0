"""Weighted q-hypercubes, q-Dicke states and dual q-Krawtchouk spin chains.

The weighted adjacency ``A_q`` of the N-cube, restricted to the span of the
q-Dicke states, is the one-excitation block ``H_q`` of an XX chain whose
couplings are the recurrence coefficients of the dual q-Krawtchouk
polynomials. This package builds every object in that statement and checks
the statement numerically.
"""

from ._backend import NAME as BACKEND
from .bitlattice import (
    BitString,
    enumerate_weight,
    hamming_distance,
    inversion_number,
    inversion_step,
    inversion_sum,
)
from .chain import (
    TridiagonalOperator,
    build_H,
    build_Hq,
    check_projection,
    coupling,
    project_Aq,
    single_excitation_restriction,
)
from .dicke import DickeBasis, dicke_basis, qdicke_direct, qdicke_lowering
from .evolve import EvolutionSpec, evolve_state, fidelity_scan, transfer_fidelity
from .operators import (
    MatrixFreeAq,
    SiteOperator,
    SparseOperator,
    build_A,
    build_Aq,
    build_Astar,
    coproduct_power,
    edge_weight,
    export_graph,
)
from .polys import (
    DualQKrawtchoukParams,
    krawtchouk_wavefunction,
    normalized_dual_q_krawtchouk,
    phi32_terminating,
    spectral_verify,
    wavefunction_matrix,
)
from .qnum import DeformationParameter, q_binomial, q_factorial, q_number, q_pochhammer
from .suite import VerificationReport, run_suite

__version__ = "0.1.0"
