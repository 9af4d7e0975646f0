import io
import json
import math
import subprocess
import sys

import pytest

from qhypercube.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_verify_text():
    code, text = run("verify", "--n", "4", "--q", "0.7")
    assert code == 0
    assert text.splitlines()[0] == "N=4 q=0.7"
    assert text.rstrip().endswith("overall: PASS")
    assert "FAIL" not in text


def test_verify_json_schema():
    code, text = run("verify", "--n", "3", "--q", "1.3", "--json")
    assert code == 0
    doc = json.loads(text)
    assert set(doc) == {"n", "q", "checks", "overall"}
    assert doc["overall"] is True
    names = [c["name"] for c in doc["checks"]]
    for required in (
        "projection",
        "construction_equivalence",
        "dicke_route_equivalence",
        "worked_example_n4",
        "spectrum",
        "orthogonality",
        "eigen_residual",
        "q1_adjacency",
        "q1_couplings",
        "q1_wavefunction_limit",
        "pst_q1",
        "mirror_inversion_q1",
        "inversion_step",
    ):
        assert required in names
    for c in doc["checks"]:
        assert set(c) == {"name", "max_error", "tolerance", "pass"}
    assert doc["overall"] == all(c["pass"] for c in doc["checks"])


def test_verify_tight_tolerance_fails():
    code, text = run("verify", "--n", "6", "--q", "2.0", "--tol", "1e-300")
    assert code == 1
    assert "overall: FAIL" in text


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "--n", "0"),
        ("verify", "--n", "15"),
        ("verify", "--q", "-1"),
        ("verify", "--q", "abc"),
        ("graph", "--format", "svg"),
        ("dicke", "--n", "3", "--weight", "4"),
        ("transfer", "--steps", "0"),
        ("nonsense",),
        (),
    ],
)
def test_usage_errors(argv, capsys):
    code, _ = run(*argv)
    assert code == 2


def test_graph_dot():
    code, text = run("graph", "--n", "4", "--q", "0.7")
    assert code == 0
    assert sum("--" in line for line in text.splitlines()) == 32


def test_graph_to_file(tmp_path):
    path = tmp_path / "cube.csv"
    code, text = run("graph", "--n", "3", "--operator", "a", "--format", "csv", "--out", str(path))
    assert code == 0 and text == ""
    rows = path.read_text().splitlines()
    assert rows[0] == "u,v,w" and len(rows) == 13


def test_dicke():
    code, text = run("dicke", "--n", "4", "--weight", "2", "--q", "0.7")
    lines = text.splitlines()
    assert code == 0 and len(lines) == 6
    coeffs = {l.split()[0]: float(l.split()[1]) for l in lines}
    assert coeffs["0011"] / coeffs["1100"] == pytest.approx(0.7**4, rel=1e-10)


def test_chain_classical():
    code, text = run("chain", "--n", "4", "--q", "1")
    assert code == 0
    head, spec = text.split("\n\nspectrum\n")
    J = [float(l.split(",")[1]) for l in head.splitlines()[1:]]
    assert J == pytest.approx([2, math.sqrt(6), math.sqrt(6), 2], rel=1e-11)
    assert [float(v) for v in spec.split()] == pytest.approx([-4, -2, 0, 2, 4], abs=1e-11)


def test_spectrum_columns_agree():
    code, text = run("spectrum", "--n", "7", "--q", "1.3")
    rows = [l.split(",") for l in text.splitlines()[1:]]
    assert code == 0 and len(rows) == 8
    for _, a, b in rows:
        assert float(a) == pytest.approx(float(b), rel=1e-9, abs=1e-9)


def test_wavefn():
    code, text = run("wavefn", "--n", "3", "--q", "0.7")
    lines = text.splitlines()
    assert code == 0
    assert lines[0] == "n\\k,0,1,2,3"
    assert lines[-1].startswith("eigenvalue,")
    assert len(lines) == 6


def test_transfer_csv():
    code, text = run("transfer", "--n", "4", "--q", "1", "--t-max", "3.141592653589793", "--steps", "2")
    lines = text.splitlines()
    assert code == 0
    assert lines[0] == "t,fidelity"
    assert len(lines) == 4
    assert float(lines[2].split(",")[1]) == pytest.approx(1.0, abs=1e-12)


def test_output_deterministic():
    for argv in (("verify", "--n", "5", "--json"), ("graph", "--format", "json"), ("wavefn",)):
        assert run(*argv) == run(*argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qhypercube", "dicke", "--n", "2", "--weight", "1", "--q", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.split()[0::2] == ["01", "10"]
