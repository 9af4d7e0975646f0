"""Compare the compiled and pure-Python kernel backends.

Usage::

    python benchmarks/bench_kernels.py [--n-max 18] [--repeat 5]

Prints one row per (kernel, N) with the best-of-``repeat`` wall time of
each backend and the speedup. Both backends are also checked to return
bit-identical arrays.
"""

import argparse
import timeit

import numpy as np

from qhypercube import _backend


def _time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-max", type=int, default=18)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--q", type=float, default=0.7)
    args = parser.parse_args(argv)

    names = _backend.available()
    if "cython" not in names:
        raise SystemExit("compiled kernels not built; run `pip install -e . --no-build-isolation`")
    py, cy = _backend.get("python"), _backend.get("cython")

    print(f"{'kernel':<18s}{'N':>4s}{'python [ms]':>14s}{'cython [ms]':>14s}{'speedup':>10s}")
    for N in range(8, args.n_max + 1, 2):
        table = _backend.power_table(N, args.q)
        v = np.random.default_rng(N).standard_normal(1 << N)
        cases = {
            "inversion_numbers": (lambda m: m.inversion_numbers(N)),
            "aq_csr": (lambda m: m.aq_csr(N, table)),
            "aq_matvec": (lambda m: m.aq_matvec(N, table, v)),
        }
        for label, call in cases.items():
            a, b = call(py), call(cy)
            same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
            assert same, f"{label} differs between backends at N={N}"
            t_py = _time(lambda: call(py), args.repeat)
            t_cy = _time(lambda: call(cy), args.repeat)
            print(f"{label:<18s}{N:>4d}{1e3 * t_py:>14.3f}{1e3 * t_cy:>14.3f}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
