import numpy as np
import pytest

from qhypercube import _backend
from qhypercube.bitlattice import BitString, inversion_number

BACKENDS = _backend.available()


def test_compiled_core_is_built():
    # the package is meant to ship with its compiled core; the fallback is for
    # environments without a C toolchain
    assert "cython" in BACKENDS


@pytest.mark.parametrize("name", BACKENDS)
@pytest.mark.parametrize("N", [1, 2, 3, 7, 10])
def test_inversion_numbers(name, N):
    inv = _backend.get(name).inversion_numbers(N)
    assert inv.dtype == np.int64
    assert list(inv) == [inversion_number(BitString(N, i)) for i in range(1 << N)]


@pytest.mark.parametrize("N", [1, 2, 5, 9, 12])
@pytest.mark.parametrize("q", [0.5, 0.7, 1.0, 2.0])
def test_backends_bit_identical(N, q):
    if len(BACKENDS) < 2:
        pytest.skip("compiled kernels not built")
    py, cy = _backend.get("python"), _backend.get("cython")
    table = _backend.power_table(N, q)
    for a, b in zip(py.aq_csr(N, table), cy.aq_csr(N, table)):
        assert np.array_equal(a, b)
    v = np.random.default_rng(N).standard_normal(1 << N)
    assert np.array_equal(py.aq_matvec(N, table, v), cy.aq_matvec(N, table, v))
    assert np.array_equal(py.inversion_numbers(N), cy.inversion_numbers(N))


@pytest.mark.parametrize("name", BACKENDS)
def test_csr_columns_sorted(name):
    N = 6
    indptr, indices, data = _backend.get(name).aq_csr(N, _backend.power_table(N, 0.7))
    for r in range(1 << N):
        row = indices[indptr[r] : indptr[r + 1]]
        assert np.all(np.diff(row) > 0)


@pytest.mark.parametrize("name", BACKENDS)
def test_matvec_rejects_wrong_length(name):
    with pytest.raises(ValueError):
        _backend.get(name).aq_matvec(3, _backend.power_table(3, 0.7), np.zeros(7))


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.get("fortran")


def test_pure_python_fallback_selected_by_env():
    import os
    import subprocess
    import sys

    env = dict(os.environ, QHYPERCUBE_PURE_PYTHON="1")
    code = (
        "import qhypercube, qhypercube._backend as b;"
        "from qhypercube.suite import run_suite;"
        "print(b.NAME, run_suite(5, 0.7).overall)"
    )
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.split() == ["python", "True"]
