"""Kernel selection: compiled Cython core when importable, numpy otherwise.

Set ``QHYPERCUBE_PURE_PYTHON=1`` to force the numpy kernels.
"""

import os
import warnings

import numpy as np

from . import _kernels_py

if os.environ.get("QHYPERCUBE_PURE_PYTHON") == "1":
    _impl = _kernels_py
    NAME = "python"
else:
    try:
        from . import _kernels as _impl

        NAME = "cython"
    except ImportError:
        warnings.warn(
            "compiled kernels unavailable, falling back to numpy implementation",
            RuntimeWarning,
            stacklevel=2,
        )
        _impl = _kernels_py
        NAME = "python"


def available():
    """Names of the kernel implementations importable in this environment."""
    names = ["python"]
    try:
        from . import _kernels  # noqa: F401

        names.insert(0, "cython")
    except ImportError:
        pass
    return names


def get(name=None):
    """Return the kernel module called ``name`` (default: the active one)."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")


def power_table(N, q):
    """``q**k`` for ``k = -N..N`` at offset ``N``."""
    return np.array([q**k for k in range(-N, N + 1)], dtype=np.float64)


def inversion_numbers(N):
    return _impl.inversion_numbers(N)


def aq_csr(N, q):
    return _impl.aq_csr(N, power_table(N, q))


def aq_matvec(N, q, v):
    return _impl.aq_matvec(N, power_table(N, q), np.ascontiguousarray(v, dtype=np.float64))
