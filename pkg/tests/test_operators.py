import json
import math

import numpy as np
import pytest

from qhypercube import operators as ops
from qhypercube.bitlattice import BitString, hamming_distance
from qhypercube.operators import (
    ConstructionMismatch,
    MatrixFreeAq,
    SiteOperator,
    build_A,
    build_Aq,
    build_Astar,
    coproduct_power,
    edge_weight,
    export_graph,
    iterated_coproduct,
    tensor_sum_Aq,
    twisted_primitive_Aq,
)

from conftest import Q_GRID

B = BitString.from_str


def dense_edge_rule(N, q):
    """Dense A_q filled from the edge-weight rule by enumerating all vertex pairs."""
    M = np.zeros((1 << N, 1 << N))
    for a in range(1 << N):
        for b in range(1 << N):
            x, y = BitString(N, a), BitString(N, b)
            if hamming_distance(x, y) == 1:
                i = next(k for k in range(N) if x.bits[k] != y.bits[k]) + 1
                M[a, b] = q ** (i - N + 2 * sum(x.bits[i:]))
    return M


def test_site_operators():
    sp_, sm = SiteOperator("sigma_plus").matrix(), SiteOperator("sigma_minus").matrix()
    ket0, ket1 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    assert np.array_equal(sp_ @ ket1, ket0)
    assert np.array_equal(sm @ ket0, ket1)
    sx, sy = SiteOperator("sigma_x").matrix(), SiteOperator("sigma_y").matrix()
    assert np.allclose(sp_, (sx + 1j * sy) / 2)
    assert np.allclose(sm, (sx - 1j * sy) / 2)
    assert np.array_equal(SiteOperator("q_sigma_z_pow").matrix(2.0), np.diag([2.0, 0.5]))
    with pytest.raises(ValueError):
        SiteOperator("hadamard")


def test_coproduct_power_examples():
    q = 0.7
    assert np.array_equal(coproduct_power("sigma_minus", 1, q).to_dense(), SiteOperator("sigma_minus").matrix())
    K = coproduct_power(SiteOperator("q_sigma_z_pow"), 2, 2.0).to_dense()
    assert np.array_equal(K, np.diag([4.0, 1.0, 1.0, 0.25]))
    Xm = coproduct_power("sigma_minus", 2, q)
    assert Xm.element(B("10"), B("00")) == pytest.approx(q**-0.5, rel=1e-15)
    assert Xm.element(B("01"), B("00")) == pytest.approx(q**0.5, rel=1e-15)
    with pytest.raises(ValueError):
        coproduct_power("sigma_x", 2, q)
    with pytest.raises(ValueError):
        coproduct_power(SiteOperator("q_sigma_z_pow", 0.5), 2, q)


@pytest.mark.parametrize("q", Q_GRID)
@pytest.mark.parametrize("N", range(1, 7))
def test_coassociativity(N, q):
    for g in ("sigma_minus", "sigma_plus", SiteOperator("q_sigma_z_pow")):
        closed = coproduct_power(g, N, q)
        for nesting in ("left", "right"):
            assert ops.construction_error(iterated_coproduct(g, N, q, nesting), closed) <= 1e-12


@pytest.mark.parametrize("q", [0.7, 1.3])
def test_generators_satisfy_uq_relations(q):
    # K X^+- K^-1 = q^+-2 X^+-,  [X^+, X^-] = (K - K^-1)/(q - 1/q)
    N = 4
    Xp = coproduct_power("sigma_plus", N, q).to_dense()
    Xm = coproduct_power("sigma_minus", N, q).to_dense()
    K = coproduct_power(SiteOperator("q_sigma_z_pow"), N, q).to_dense()
    Ki = np.linalg.inv(K)
    assert np.allclose(K @ Xp @ Ki, q**2 * Xp, atol=1e-12)
    assert np.allclose(K @ Xm @ Ki, q**-2 * Xm, atol=1e-12)
    assert np.allclose(Xp @ Xm - Xm @ Xp, (K - Ki) / (q - 1 / q), atol=1e-12)


def test_build_Aq_examples():
    assert np.array_equal(build_Aq(1, 0.7).to_dense(), SiteOperator("sigma_x").matrix())
    A = build_Aq(2, 2.0)
    # weights q^(i - N + 2 sum_{j>i} x_j)
    assert A.element(B("10"), B("00")) == 0.5
    assert A.element(B("00"), B("10")) == 0.5
    assert A.element(B("01"), B("00")) == 1.0
    assert A.element(B("11"), B("01")) == 2.0
    assert A.element(B("11"), B("10")) == 1.0
    assert A.nnz == 8
    cube = build_Aq(3, 1.0).to_dense()
    ref = np.array([[1.0 if bin(a ^ b).count("1") == 1 else 0.0 for b in range(8)] for a in range(8)])
    assert np.array_equal(cube, ref)


@pytest.mark.parametrize("q", Q_GRID)
@pytest.mark.parametrize("N", range(1, 7))
def test_build_Aq_matches_edge_rule(N, q):
    assert np.allclose(build_Aq(N, q).to_dense(), dense_edge_rule(N, q), rtol=1e-14, atol=0)


@pytest.mark.parametrize("q", Q_GRID)
@pytest.mark.parametrize("N", range(1, 13))
def test_three_constructions_agree(N, q):
    Aq = build_Aq(N, q, check=False)
    assert ops.construction_error(Aq, tensor_sum_Aq(N, q)) <= 1e-12
    assert ops.construction_error(Aq, twisted_primitive_Aq(N, q)) <= 1e-12
    assert Aq.is_symmetric()
    assert Aq.nnz == N * (1 << N)


def test_build_Aq_detects_convention_bug(monkeypatch):
    real = ops.twisted_primitive_Aq

    def skewed(N, q):
        op = real(N, q)
        return ops.SparseOperator(N, op.matrix * 1.001, q, "A_q")

    monkeypatch.setattr(ops, "twisted_primitive_Aq", skewed)
    with pytest.raises(ConstructionMismatch):
        build_Aq(3, 0.7)


def test_edge_weight_examples():
    q = 0.7
    assert edge_weight(B("0011"), B("0111"), q) == pytest.approx(q**2, rel=1e-15)
    assert edge_weight(B("0000"), B("1000"), q) == pytest.approx(q**-3, rel=1e-15)
    assert edge_weight(B("0110"), B("0111"), q) == 1.0
    with pytest.raises(ValueError):
        edge_weight(B("0000"), B("0011"), q)


@pytest.mark.parametrize("q", [0.7, 2.0])
@pytest.mark.parametrize("N", range(1, 7))
def test_edge_weight_equals_matrix_element(N, q):
    Aq = build_Aq(N, q)
    for a in range(1 << N):
        for k in range(N):
            x, y = BitString(N, a), BitString(N, a ^ (1 << k))
            assert edge_weight(x, y, q) == pytest.approx(Aq.element(x, y), rel=1e-15)
            assert edge_weight(x, y, q) == edge_weight(y, x, q)


def test_A_and_Astar_examples():
    assert np.array_equal(build_Astar(2).to_dense(), np.diag([2.0, 0.0, 0.0, -2.0]))
    assert np.array_equal(build_A(1).to_dense(), SiteOperator("sigma_x").matrix())
    assert np.array_equal(build_Astar(1).to_dense(), SiteOperator("sigma_z").matrix())


@pytest.mark.parametrize("N", range(1, 11))
def test_q1_degeneration_exact(N):
    assert (build_Aq(N, 1.0).matrix != build_A(N).matrix).nnz == 0
    assert (build_A(N).matrix != tensor_sum_Aq(N, 1.0).matrix).nnz == 0


@pytest.mark.parametrize("N", range(1, 9))
def test_hypercube_spectrum(N):
    # eigenvalues of the N-cube are N - 2k with multiplicity C(N, k)
    ev = np.sort(np.linalg.eigvalsh(build_A(N).to_dense()))
    ref = np.sort([N - 2 * k for k in range(N + 1) for _ in range(math.comb(N, k))])
    assert np.allclose(ev, ref, atol=1e-10)
    assert max(abs(ev)) == pytest.approx(N)


@pytest.mark.parametrize("q", [0.7, 2.0])
@pytest.mark.parametrize("N", [1, 4, 9, 17])
def test_matrix_free_matches_stored(N, q):
    v = np.random.default_rng(0).standard_normal(1 << N)
    mf = MatrixFreeAq(N, q)
    stored = build_Aq(N, q, check=False)
    assert np.allclose(mf.matvec(v), stored.matvec(v), rtol=1e-13, atol=1e-13)
    assert isinstance(ops.aq_operator(17, q), MatrixFreeAq)


def test_materialize_cap():
    with pytest.raises(ValueError):
        build_Aq(ops.MATERIALIZE_CAP + 1, 0.7)
    with pytest.raises(ValueError):
        build_Aq(0, 0.7)


def test_export_dot_cube():
    text = export_graph(build_A(3), "dot").decode()
    assert text.startswith("graph qcube {")
    edges = [l for l in text.splitlines() if "--" in l]
    assert len(edges) == 12
    assert all("[weight=1];" in l for l in edges)
    assert '  "000" -- "001" [weight=1];' in edges


def test_export_json_weighted_cube():
    doc = json.loads(export_graph(build_Aq(4, 0.7), "json"))
    assert set(doc) == {"n", "q", "vertices", "edges"}
    assert doc["n"] == 4 and doc["q"] == 0.7
    assert doc["vertices"][:3] == ["0000", "0001", "0010"]
    assert len(doc["edges"]) == 32
    allowed = [float(format(0.7**k, ".12g")) for k in range(-3, 4)]
    for e in doc["edges"]:
        assert set(e) == {"u", "v", "w"}
        assert e["w"] in allowed
        x, y = BitString.from_str(e["u"]), BitString.from_str(e["v"])
        assert e["w"] == float(format(edge_weight(x, y, 0.7), ".12g"))


def test_export_csv_diagonal():
    text = export_graph(build_Astar(2), "csv").decode().splitlines()
    assert text[0] == "u,v,w"
    assert text[1:] == ["00,00,2", "01,01,0", "10,10,0", "11,11,-2"]


def test_export_rejects_bad_input():
    with pytest.raises(ValueError):
        export_graph(build_A(2), "graphml")
    with pytest.raises(ValueError):
        export_graph(coproduct_power("sigma_minus", 2, 0.7), "dot")


def test_export_deterministic():
    a = export_graph(build_Aq(5, 0.7), "json")
    b = export_graph(build_Aq(5, 0.7), "json")
    assert a == b
