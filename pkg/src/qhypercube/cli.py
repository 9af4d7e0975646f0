"""Command-line interface: ``qhypercube <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import chain, dicke, evolve, operators, polys
from .qnum import q_number
from .suite import SUITE_CAP, run_suite

DEFAULT_N = 4
DEFAULT_Q = 0.7
DEFAULT_TOL = 1e-9


def _g(x) -> str:
    return format(float(x), ".12g")


def _clean(values, scale=1.0):
    # eigensolver noise around exact zeros would otherwise print as 1e-16
    return [0.0 if abs(v) < 1e-12 * max(1.0, scale) else float(v) for v in values]


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be a finite number > 0, got {text}")
    return v


def _add_nq(p, n_max):
    p.add_argument("--n", type=int, default=DEFAULT_N, help=f"number of sites (1..{n_max})")
    p.add_argument("--q", type=_positive_float, default=DEFAULT_Q, help="deformation parameter q > 0")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qhypercube", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the full identity suite")
    _add_nq(p, SUITE_CAP)
    p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)
    p.add_argument("--json", action="store_true", help="emit the JSON report")

    p = sub.add_parser("graph", help="export the weighted hypercube")
    _add_nq(p, operators.MATERIALIZE_CAP)
    p.add_argument("--format", choices=("dot", "json", "csv"), default="dot")
    p.add_argument("--operator", choices=("aq", "a", "astar"), default="aq")
    p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("dicke", help="print a q-Dicke state")
    _add_nq(p, 20)
    p.add_argument("--weight", type=int, required=True)

    p = sub.add_parser("chain", help="couplings and spectrum of H_q")
    _add_nq(p, 64)

    p = sub.add_parser("spectrum", help="eigenvalues of H_q vs [2k-N]_q")
    _add_nq(p, 64)

    p = sub.add_parser("wavefn", help="dual q-Krawtchouk wavefunction table")
    _add_nq(p, 24)

    p = sub.add_parser("transfer", help="end-to-end transfer fidelity scan (CSV)")
    _add_nq(p, 24)
    p.add_argument("--t-max", type=float, default=math.pi)
    p.add_argument("--steps", type=int, default=100)
    return parser


_N_CAPS = {
    "verify": SUITE_CAP,
    "graph": operators.MATERIALIZE_CAP,
    "dicke": 20,
    "chain": 64,
    "spectrum": 64,
    "wavefn": 24,
    "transfer": 24,
}


def _cmd_verify(args, out):
    rep = run_suite(args.n, args.q, args.tol)
    out.write(rep.to_json() if args.json else rep.to_text())
    return 0 if rep.overall else 1


def _cmd_graph(args, out):
    if args.operator == "aq":
        op = operators.build_Aq(args.n, args.q, check=args.n <= 14)
    elif args.operator == "a":
        op = operators.build_A(args.n)
    else:
        op = operators.build_Astar(args.n)
    data = operators.export_graph(op, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        out.write(data.decode())
    return 0


def _cmd_dicke(args, out):
    idx, coeffs = dicke.qdicke_support(args.n, args.weight, args.q)
    out.write(dicke.format_state(args.n, idx, coeffs))
    return 0


def _spectrum_lines(N, q):
    H = chain.build_Hq(N, q)
    ev = np.sort(H.eigenvalues())
    pred = chain.predicted_spectrum(N, q)
    scale = float(np.max(np.abs(pred)))
    return _clean(ev, scale), _clean(pred, scale)


def _cmd_chain(args, out):
    H = chain.build_Hq(args.n, args.q)
    out.write("n,J_n\n")
    for n, J in enumerate(H.couplings):
        out.write(f"{n},{_g(J)}\n")
    ev, _ = _spectrum_lines(args.n, args.q)
    out.write("\nspectrum\n")
    for v in ev:
        out.write(f"{_g(v)}\n")
    return 0


def _cmd_spectrum(args, out):
    ev, pred = _spectrum_lines(args.n, args.q)
    out.write("k,eigenvalue,q_number_2k_minus_N\n")
    for k, (a, b) in enumerate(zip(ev, pred)):
        out.write(f"{k},{_g(a)},{_g(b)}\n")
    return 0


def _cmd_wavefn(args, out):
    U = polys.wavefunction_matrix(args.n, args.q)
    out.write(polys.format_table(U))
    lam = [q_number(args.n - 2 * k, args.q) for k in range(args.n + 1)]
    out.write("eigenvalue," + ",".join(_g(v) for v in lam) + "\n")
    return 0


def _cmd_transfer(args, out):
    if args.t_max < 0 or args.steps < 1:
        raise _UsageError("need --t-max >= 0 and --steps >= 1")
    ts, fids = evolve.fidelity_scan(args.n, args.q, args.t_max, args.steps)
    out.write(evolve.format_scan(ts, fids))
    return 0


class _UsageError(Exception):
    pass


_COMMANDS = {
    "verify": _cmd_verify,
    "graph": _cmd_graph,
    "dicke": _cmd_dicke,
    "chain": _cmd_chain,
    "spectrum": _cmd_spectrum,
    "wavefn": _cmd_wavefn,
    "transfer": _cmd_transfer,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cap = _N_CAPS[args.command]
    if not 1 <= args.n <= cap:
        parser.print_usage(sys.stderr)
        print(f"qhypercube {args.command}: error: --n must be in [1, {cap}], got {args.n}", file=sys.stderr)
        return 2
    if args.command == "dicke" and not 0 <= args.weight <= args.n:
        print(f"qhypercube dicke: error: --weight must be in [0, {args.n}]", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](args, out)
    except _UsageError as exc:
        print(f"qhypercube {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
