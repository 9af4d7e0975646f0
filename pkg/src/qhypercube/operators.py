"""Sparse operators on the 2**N vertex space of the (weighted) hypercube.

The weighted q-adjacency ``A_q`` is built three ways:

* :func:`build_Aq` fills CSR arrays straight from the edge-weight rule
  (compiled kernel, authoritative),
* :func:`tensor_sum_Aq` sums ``I x..x I x sigma_x x q^-sigma_z x..x q^-sigma_z``
  with Kronecker products,
* :func:`twisted_primitive_Aq` forms ``(sqrt(q) X^- + X^+ / sqrt(q)) K^-1/2``
  from the iterated coproduct generators.

``build_Aq`` checks itself against the twisted-primitive route.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import scipy.sparse as sp

from . import _backend
from .bitlattice import MAX_SITES, BitString, all_weights, hamming_distance
from .qnum import as_q

__all__ = [
    "MATERIALIZE_CAP",
    "CHECK_TOL",
    "ConstructionMismatch",
    "SiteOperator",
    "SparseOperator",
    "MatrixFreeAq",
    "coproduct_power",
    "iterated_coproduct",
    "build_Aq",
    "tensor_sum_Aq",
    "twisted_primitive_Aq",
    "aq_operator",
    "construction_error",
    "edge_weight",
    "build_A",
    "build_Astar",
    "export_graph",
]

# CSR storage of A_q is N * 2**N entries; above this use MatrixFreeAq.
MATERIALIZE_CAP = 20
CHECK_TOL = 1e-12


class ConstructionMismatch(RuntimeError):
    """Two independent constructions of the same operator disagree."""


_SITE_KINDS = ("identity", "sigma_x", "sigma_y", "sigma_z", "sigma_plus", "sigma_minus", "q_sigma_z_pow")


@dataclass(frozen=True)
class SiteOperator:
    """A single-qubit operator; ``q_sigma_z_pow`` is ``q^(alpha sigma_z)``."""

    kind: str
    alpha: float = 1.0

    def __post_init__(self):
        if self.kind not in _SITE_KINDS:
            raise ValueError(f"unknown site operator {self.kind!r}")

    def matrix(self, q=1.0) -> np.ndarray:
        k = self.kind
        if k == "identity":
            return np.eye(2)
        if k == "sigma_x":
            return np.array([[0.0, 1.0], [1.0, 0.0]])
        if k == "sigma_y":
            return np.array([[0.0, -1.0j], [1.0j, 0.0]])
        if k == "sigma_z":
            return np.diag([1.0, -1.0])
        if k == "sigma_plus":
            return np.array([[0.0, 1.0], [0.0, 0.0]])
        if k == "sigma_minus":
            return np.array([[0.0, 0.0], [1.0, 0.0]])
        q = as_q(q)
        return np.diag([q**self.alpha, q**-self.alpha])


@dataclass(frozen=True)
class SparseOperator:
    """Real operator on ``2**n_sites`` dimensions held as a CSR matrix."""

    n_sites: int
    matrix: sp.csr_matrix = field(repr=False)
    q: float | None = None
    label: str = ""

    @property
    def dim(self) -> int:
        return 1 << self.n_sites

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def matvec(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v)

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def entries(self):
        """Yield ``(row, col, value)`` for every stored entry, row-major."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        for r, c, v in zip(coo.row[order], coo.col[order], coo.data[order]):
            yield int(r), int(c), float(v)

    def element(self, x, y) -> float:
        r = x.index if isinstance(x, BitString) else int(x)
        c = y.index if isinstance(y, BitString) else int(y)
        return float(self.matrix[r, c])

    def is_symmetric(self) -> bool:
        diff = self.matrix - self.matrix.T
        return diff.nnz == 0 or not np.any(diff.data)


class MatrixFreeAq:
    """``A_q`` applied on the fly, without storing its ``N * 2**N`` entries."""

    def __init__(self, N, q):
        N = int(N)
        if not 1 <= N <= MAX_SITES:
            raise ValueError(f"number of sites must be in [1, {MAX_SITES}], got {N}")
        self.n_sites = N
        self.q = as_q(q)
        self._powers = _backend.power_table(N, self.q)

    @property
    def dim(self) -> int:
        return 1 << self.n_sites

    def matvec(self, v) -> np.ndarray:
        v = np.ascontiguousarray(v, dtype=np.float64)
        return _backend.get().aq_matvec(self.n_sites, self._powers, v)

    def __repr__(self):
        return f"MatrixFreeAq(N={self.n_sites}, q={self.q})"


def _kron_all(mats):
    return reduce(lambda a, b: sp.kron(a, b, format="csr"), mats)


def _check_sites(N, cap=MAX_SITES):
    N = int(N)
    if not 1 <= N <= cap:
        raise ValueError(f"number of sites must be in [1, {cap}], got {N}")
    return N


def _generator(g) -> SiteOperator:
    if isinstance(g, str):
        g = SiteOperator(g)
    if g.kind in ("sigma_plus", "sigma_minus"):
        return g
    if g.kind == "q_sigma_z_pow" and g.alpha == 1.0:
        return g
    raise ValueError(f"coproduct_power supports sigma_plus, sigma_minus, q_sigma_z_pow(1); got {g}")


def coproduct_power(g, N, q) -> SparseOperator:
    """Image of a generator under the (N-1)-fold q-coproduct, closed form.

    ``sigma_plus`` / ``sigma_minus`` map to
    ``sum_i (q^(sz/2))^(i-1) x sigma x (q^(-sz/2))^(N-i)``;
    ``q_sigma_z_pow`` maps to ``(q^sz)^N``.
    """
    g = _generator(g)
    N = _check_sites(N)
    q = as_q(q)
    if g.kind == "q_sigma_z_pow":
        mat = _kron_all([sp.csr_matrix(g.matrix(q))] * N)
        return SparseOperator(N, mat.tocsr(), q, "K")
    left = sp.csr_matrix(SiteOperator("q_sigma_z_pow", 0.5).matrix(q))
    right = sp.csr_matrix(SiteOperator("q_sigma_z_pow", -0.5).matrix(q))
    mid = sp.csr_matrix(g.matrix(q))
    total = sp.csr_matrix((1 << N, 1 << N))
    for i in range(N):
        total = total + _kron_all([left] * i + [mid] + [right] * (N - 1 - i))
    label = "X+" if g.kind == "sigma_plus" else "X-"
    return SparseOperator(N, total.tocsr(), q, label)


def iterated_coproduct(g, N, q, nesting="left") -> SparseOperator:
    """Apply the two-site coproduct N-1 times recursively.

    ``nesting="left"`` expands the left tensor factor at each step,
    ``"right"`` the right one; coassociativity makes both agree with
    :func:`coproduct_power`.
    """
    g = _generator(g)
    N = _check_sites(N)
    q = as_q(q)
    one = sp.csr_matrix(g.matrix(q))
    if g.kind == "q_sigma_z_pow":
        # Delta(k) = k x k
        return SparseOperator(N, _kron_all([one] * N).tocsr(), q, "K")
    khalf = sp.csr_matrix(SiteOperator("q_sigma_z_pow", 0.5).matrix(q))
    kmhalf = sp.csr_matrix(SiteOperator("q_sigma_z_pow", -0.5).matrix(q))
    x, kh, kmh = one, khalf, kmhalf
    for _ in range(N - 1):
        # Delta(e) = e x k^-1/2 + k^1/2 x e, Delta(k^+-1/2) = k^+-1/2 x k^+-1/2
        if nesting == "left":
            x = sp.kron(x, kmhalf, format="csr") + sp.kron(kh, one, format="csr")
            kh, kmh = sp.kron(kh, khalf, format="csr"), sp.kron(kmh, kmhalf, format="csr")
        elif nesting == "right":
            x = sp.kron(one, kmh, format="csr") + sp.kron(khalf, x, format="csr")
            kh, kmh = sp.kron(khalf, kh, format="csr"), sp.kron(kmhalf, kmh, format="csr")
        else:
            raise ValueError(f"nesting must be 'left' or 'right', got {nesting!r}")
    return SparseOperator(N, sp.csr_matrix(x), q, g.kind)


def tensor_sum_Aq(N, q) -> SparseOperator:
    """``sum_i I^(i-1) x sigma_x x (q^-sigma_z)^(N-i)`` via Kronecker products."""
    N = _check_sites(N, MATERIALIZE_CAP)
    q = as_q(q)
    eye = sp.identity(2, format="csr")
    sx = sp.csr_matrix(SiteOperator("sigma_x").matrix())
    tail = sp.csr_matrix(SiteOperator("q_sigma_z_pow", -1.0).matrix(q))
    total = sp.csr_matrix((1 << N, 1 << N))
    for i in range(N):
        total = total + _kron_all([eye] * i + [sx] + [tail] * (N - 1 - i))
    return SparseOperator(N, total.tocsr(), q, "A_q")


def twisted_primitive_Aq(N, q) -> SparseOperator:
    """``(sqrt(q) X^- + X^+ / sqrt(q)) K^(-1/2)`` from the coproduct generators."""
    N = _check_sites(N, MATERIALIZE_CAP)
    q = as_q(q)
    xm = coproduct_power("sigma_minus", N, q).matrix
    xp = coproduct_power("sigma_plus", N, q).matrix
    # K^(-1/2) = (q^(-sz/2))^N, diagonal
    kmhalf = _kron_all([sp.csr_matrix(SiteOperator("q_sigma_z_pow", -0.5).matrix(q))] * N)
    mat = (math.sqrt(q) * xm + xp / math.sqrt(q)) @ kmhalf
    mat = sp.csr_matrix(mat)
    mat.eliminate_zeros()
    return SparseOperator(N, mat, q, "A_q")


def construction_error(a: SparseOperator, b: SparseOperator) -> float:
    """Largest entrywise difference, scaled by ``max(1, |entry|)``."""
    diff = (a.matrix - b.matrix).tocoo()
    if diff.nnz == 0:
        return 0.0
    ref = np.abs(np.asarray(b.matrix[diff.row, diff.col]).ravel())
    return float(np.max(np.abs(diff.data) / np.maximum(1.0, ref)))


def build_Aq(N, q, check=True, backend=None) -> SparseOperator:
    """Weighted q-adjacency of the N-cube as a CSR operator.

    Entry ``<x|A_q|y>`` for strings differing at position ``i`` is
    ``q^(i - N + 2 * sum_{j>i} x_j)``. With ``check=True`` the result is
    compared against :func:`twisted_primitive_Aq` and a
    :class:`ConstructionMismatch` is raised on disagreement beyond
    ``CHECK_TOL`` (relative to ``max(1, |entry|)``).
    """
    N = _check_sites(N, MATERIALIZE_CAP)
    q = as_q(q)
    kern = _backend.get(backend)
    indptr, indices, data = kern.aq_csr(N, _backend.power_table(N, q))
    dim = 1 << N
    mat = sp.csr_matrix((data, indices, indptr), shape=(dim, dim))
    op = SparseOperator(N, mat, q, "A_q")
    if check:
        err = construction_error(op, twisted_primitive_Aq(N, q))
        if err > CHECK_TOL:
            raise ConstructionMismatch(
                f"A_q(N={N}, q={q}): tensor sum and twisted primitive differ by {err:.3e}"
            )
    return op


def aq_operator(N, q):
    """A stored ``A_q`` up to :data:`MATERIALIZE_CAP` sites, matrix-free above."""
    N = int(N)
    if N > 16:
        return MatrixFreeAq(N, q)
    return build_Aq(N, q, check=False)


def edge_weight(x: BitString, y: BitString, q) -> float:
    """Weight ``q^(i - N + 2 * sum_{j>i} x_j)`` of the edge between ``x`` and ``y``."""
    if hamming_distance(x, y) != 1:
        raise ValueError(f"{x} and {y} are not adjacent")
    q = as_q(q)
    N = x.length
    diff = x.index ^ y.index
    i = N - diff.bit_length() + 1
    trailing = (x.index & (diff - 1)).bit_count()
    return q ** (i - N + 2 * trailing)


def build_A(N) -> SparseOperator:
    """Unweighted adjacency matrix of the N-cube."""
    op = build_Aq(N, 1.0, check=False)
    return SparseOperator(op.n_sites, op.matrix, 1.0, "A")


def build_Astar(N) -> SparseOperator:
    """Dual adjacency: diagonal with ``N - 2 * weight(x)`` on every vertex."""
    N = _check_sites(N, MATERIALIZE_CAP)
    diag = (N - 2 * all_weights(N)).astype(np.float64)
    dim = 1 << N
    # keep explicit zeros so every vertex has a stored diagonal entry
    mat = sp.csr_matrix((diag, np.arange(dim), np.arange(dim + 1)), shape=(dim, dim))
    return SparseOperator(N, mat, None, "A*")


def _fmt(w: float) -> str:
    return format(w, ".12g")


def _graph_edges(op: SparseOperator):
    for r, c, v in op.entries():
        if r <= c:
            yield r, c, v


def export_graph(op: SparseOperator, format: str) -> bytes:
    """Render a symmetric operator as an undirected weighted graph.

    Formats: ``dot``, ``json`` or ``csv``. Each edge appears once with
    ``u <= v``; diagonal entries become self-weight rows.
    """
    if format not in ("dot", "json", "csv"):
        raise ValueError(f"unknown graph format {format!r}")
    if not op.is_symmetric():
        raise ValueError("export_graph needs a symmetric operator")
    N = op.n_sites
    label = lambda i: format_bits(i, N)  # noqa: E731
    edges = list(_graph_edges(op))
    if format == "dot":
        buf = io.StringIO()
        buf.write("graph qcube {\n")
        for u, v, w in edges:
            buf.write(f'  "{label(u)}" -- "{label(v)}" [weight={_fmt(w)}];\n')
        buf.write("}\n")
        return buf.getvalue().encode()
    if format == "csv":
        lines = ["u,v,w"] + [f"{label(u)},{label(v)},{_fmt(w)}" for u, v, w in edges]
        return ("\n".join(lines) + "\n").encode()
    doc = {
        "n": N,
        "q": op.q,
        "vertices": [label(i) for i in range(op.dim)],
        "edges": [{"u": label(u), "v": label(v), "w": float(_fmt(w))} for u, v, w in edges],
    }
    return (json.dumps(doc) + "\n").encode()


def format_bits(index: int, N: int) -> str:
    return format(index, f"0{N}b")
