"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 algorithmic failure (lifting retries exhausted, no admissible sample).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import List, Optional

from .chains import make_chain
from .decompose import PROVIDERS, DecompositionError, RandomConfig, SamplingError, main_decompose
from .lifting import LiftingError, TruncatedSeries, lift_step, rational_reconstruction, start_state
from .poly import PolyParseError, VarOrder, parse_poly
from .resultants import DegenerateResultant, canny_pres, macaulay_resultant, sylvester_resultant
from .sysfile import ResultFormatError, SystemFileError, dump_result, load_result, load_system_file
from .verify import verify_result

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_ALGORITHM = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _write(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tridecomp", description="Irredundant triangular decomposition over Q.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("decompose", help="decompose the system in a system file")
    d.add_argument("system")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--gamma-size", type=int, default=2 ** 31)
    d.add_argument("--provider", choices=PROVIDERS)
    d.add_argument("--deterministic", action="store_true", help="require and use the override block")
    d.add_argument("--out")

    v = sub.add_parser("verify", help="check a result JSON against its system file")
    v.add_argument("result")
    v.add_argument("system")
    v.add_argument("--samples", type=int, default=25)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--text", action="store_true", help="human-readable report instead of JSON")
    v.add_argument("--out")

    r = sub.add_parser("resultant", help="Sylvester, Macaulay or perturbed resultant")
    r.add_argument("polys", nargs="+")
    r.add_argument("--vars", required=True, help="comma separated variable order")
    r.add_argument("--elim", default="", help="comma separated variables to eliminate")
    r.add_argument("--method", choices=("sylvester", "macaulay", "canny"), default="sylvester")

    lf = sub.add_parser("lift-demo", help="Newton lifting of z^2 - y from y = 1, then reconstruction")
    lf.add_argument("--steps", type=int, default=3)
    lf.add_argument("--center", default="1")
    return p


def _cmd_decompose(args) -> int:
    inp, ov, has_override = load_system_file(args.system)
    if args.deterministic and not has_override:
        raise DecompositionError("--deterministic needs an override block in the system file")
    cfg = RandomConfig(seed=args.seed, gamma_size=args.gamma_size, overrides=ov, deterministic=args.deterministic)
    result = main_decompose(inp, cfg, args.provider)
    _write(dump_result(result), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    result = load_result(args.result)
    inp, _, _ = load_system_file(args.system)
    if list(result.order.names) != list(inp.order.names):
        raise ResultFormatError("result and system file declare different variables")
    if args.samples < 10:
        raise DecompositionError("--samples must be at least 10")
    report = verify_result(inp, result, args.samples, args.seed)
    if args.text:
        _write(report.to_text() + "\n", args.out)
    else:
        _write(json.dumps(report.to_json(), indent=2) + "\n", args.out)
    return EXIT_OK if report.ok else EXIT_VERIFY_FAILED


def _cmd_resultant(args) -> int:
    order = VarOrder([v.strip() for v in args.vars.split(",") if v.strip()])
    polys = [parse_poly(t, order) for t in args.polys]
    elim = [v.strip() for v in args.elim.split(",") if v.strip()]
    if args.method == "sylvester":
        if len(polys) != 2 or len(elim) != 1:
            raise DecompositionError("sylvester needs two polynomials and one variable")
        res = sylvester_resultant(polys[0], polys[1], elim[0])
    elif args.method == "macaulay":
        res = macaulay_resultant(polys, elim)
    else:
        res = canny_pres(polys, elim)
    print(res.to_str())
    return EXIT_OK


def _cmd_lift_demo(args) -> int:
    center = Fraction(args.center)
    if center <= 0:
        raise DecompositionError("the center must be positive")
    order = VarOrder(["y", "z"])
    root = _rational_sqrt(center)
    if root is None:
        raise DecompositionError("the center must be a rational square")
    h = parse_poly("z^2 - y", order)
    st = start_state([make_chain(order, [("z", f"z - {root}")])], [0], [center])
    for _ in range(args.steps):
        st = lift_step([h], st)
    coeffs = [-c for c in st.series(0, 0, (0,)).by_degree()]
    print(f"sqrt(y) around y = {center}, precision {st.precision}:")
    for k, c in enumerate(coeffs):
        print(f"  t^{k}: {c}")
    oy = VarOrder(["y"])
    inv = TruncatedSeries(oy, [0], [center], {(k,): (-1) ** k / center ** (k + 1) for k in range(4)}, 4)
    p, q = rational_reconstruction(inv, 0, 1)
    print(f"reconstruction of 1/y from 4 terms: {p} / ({q})")
    return EXIT_OK


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    from math import isqrt

    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


_COMMANDS = {
    "decompose": _cmd_decompose,
    "verify": _cmd_verify,
    "resultant": _cmd_resultant,
    "lift-demo": _cmd_lift_demo,
}


def cli_run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return _COMMANDS[args.command](args)
    except (SystemFileError, ResultFormatError, PolyParseError, DecompositionError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (LiftingError, SamplingError, DegenerateResultant, ArithmeticError) as e:
        print(f"algorithm failure: {e}", file=sys.stderr)
        return EXIT_ALGORITHM


def main():
    sys.exit(cli_run())


if __name__ == "__main__":
    main()
