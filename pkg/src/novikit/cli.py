"""Batch front-end: validate, barcode, rho, beta, scan, gen.

Exit codes: 0 success, 1 domain failure (validation, divergence, or a
violated semicontinuity verdict), 2 input error (unreadable file, parse
error, bad flags).  Rationals on the command line and in all output are
"p/q" strings.  The environment variable NOVIKIT_THREADS sets the worker
count for per-parameter work; output ordering is independent of it.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .complexes import FilteredComplex, basis_chain, chain_cleanup, validate
from .fileformat import ParseError, emit, parse
from .invariants import (
    MissingContinuation,
    boundary_depth,
    rho,
    scan_semicontinuity,
)
from .models import (
    InfeasibleSpec,
    ModelSpec,
    gen_elementary,
    gen_pathological,
    gen_random,
    line_family,
)
from .reduction import FloerDivergenceError, floer_divergence_check, persistence_barcode

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INPUT = 2


def _pq(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _threads() -> int:
    raw = os.environ.get("NOVIKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _load(path: str, validate_first: bool = True) -> FilteredComplex:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise SystemExit(_input_error(f"cannot read {path}: {err}"))
    try:
        cx = parse(text)
    except ParseError as err:
        raise SystemExit(_input_error(str(err)))
    if validate_first:
        report = validate(cx)
        if not report:
            for kind, witness in report.violations[:5]:
                print(f"FAIL {kind}: {witness}", file=sys.stderr)
            raise SystemExit(EXIT_DOMAIN)
    return cx


def _input_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT


def _fraction_arg(raw: str) -> Fraction:
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad rational {raw!r}")


def _fraction_list(raw: str) -> list[Fraction]:
    return [_fraction_arg(x) for x in raw.split(",") if x]


def _cycle_chain(cx: FilteredComplex, names_arg: str):
    names = [n for n in names_arg.split(",") if n]
    if not names:
        raise SystemExit(_input_error("empty cycle name list"))
    chain = {}
    for name in names:
        try:
            part = basis_chain(cx, name)
        except Exception:
            raise SystemExit(_input_error(f"unknown generator {name!r}"))
        for k, v in part.items():
            chain[k] = chain[k] + v if k in chain else v
    return chain_cleanup(chain)


def cmd_validate(args) -> int:
    cx = _load(args.path, validate_first=False)
    samples = cx.samples
    if args.grid and args.grid < len(samples):
        step = (len(samples) - 1) / max(1, args.grid - 1)
        picked = sorted({samples[round(i * step)] for i in range(args.grid)})
    else:
        picked = samples
    report = validate(cx, picked)
    if not report:
        for kind, witness in report.violations:
            print(f"FAIL {kind}: {witness}")
        return EXIT_DOMAIN
    for s in picked:
        check = floer_divergence_check(cx.boundary_matrix(s), cx.cutoff)
        if not check:
            w = check.witness
            trace = " ".join(f"({_pq(v.v0)},{_pq(v.v1)})" for v in w.trace
                             if not v.is_infinite)
            print(f"FAIL divergence at s={_pq(s)}: axis {w.axis} "
                  f"stalls at {_pq(w.stabilized)}; trace {trace}")
            return EXIT_DOMAIN
    print(f"OK {len(picked)} samples validated")
    return EXIT_OK


def cmd_barcode(args) -> int:
    cx = _load(args.path)
    try:
        barcode = persistence_barcode(cx, args.t, prevalidated=True)
    except ValueError as err:
        return _input_error(str(err))
    sys.stdout.write(barcode.to_csv())
    return EXIT_OK


def cmd_rho(args) -> int:
    cx = _load(args.path)
    chain = _cycle_chain(cx, args.cycle)
    try:
        res = rho(cx, chain, args.t, args.cutoff)
    except FloerDivergenceError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as err:
        return _input_error(str(err))
    print("-inf" if res.degenerate else _pq(res.value))
    return EXIT_OK


def cmd_beta(args) -> int:
    cx = _load(args.path)
    ts = args.t
    try:
        with ThreadPoolExecutor(max_workers=_threads()) as pool:
            values = list(pool.map(
                lambda t: boundary_depth(cx, t, prevalidated=True), ts))
    except ValueError as err:
        return _input_error(str(err))
    for v in values:
        print(_pq(v))
    return EXIT_OK


def cmd_scan(args) -> int:
    cx = _load(args.path)
    chain = _cycle_chain(cx, args.cycle)
    grid = args.grid if args.grid else list(cx.samples)
    try:
        report = scan_semicontinuity(cx, chain, grid)
    except MissingContinuation as err:
        return _input_error(str(err))
    except FloerDivergenceError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as err:
        return _input_error(str(err))
    print(report.to_json())
    return EXIT_OK if report.usc_at_zero else EXIT_DOMAIN


def cmd_gen(args) -> int:
    try:
        spec = ModelSpec(
            seed=args.seed,
            n_pairs=args.pairs,
            n_closed=args.closed,
            lattice_rank=args.rank,
            cutoff=args.cutoff,
            field_name=args.field,
            density=args.density,
            samples=tuple(args.samples) if args.samples else
            ModelSpec.__dataclass_fields__["samples"].default,
        )
        if args.model == "elementary":
            cx = gen_elementary(spec)
        elif args.model == "random":
            cx = gen_random(spec)
        elif args.model == "pathological":
            cx = gen_pathological(cutoff=args.cutoff, field_name=args.field)
        else:
            base = gen_elementary(spec)
            slopes = args.slopes or []
            if len(slopes) < len(base.generators):
                slopes = list(slopes) + [Fraction(0)] * (
                    len(base.generators) - len(slopes))
            cx = line_family(base, slopes[: len(base.generators)])
    except InfeasibleSpec as err:
        return _input_error(str(err))
    sys.stdout.write(emit(cx))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="novikit",
        description="Exact invariants of filtered complex families over "
                    "truncated Novikov rings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="structural + divergence checks")
    p.add_argument("path")
    p.add_argument("--grid", type=int, default=0,
                   help="number of samples to check (default: all)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("barcode", help="persistence barcode CSV at one t")
    p.add_argument("path")
    p.add_argument("--t", type=_fraction_arg, required=True)
    p.set_defaults(func=cmd_barcode)

    p = sub.add_parser("rho", help="spectral value of a cycle at one t")
    p.add_argument("path")
    p.add_argument("--cycle", required=True,
                   help="comma-separated generator names summed with unit "
                        "coefficients")
    p.add_argument("--t", type=_fraction_arg, required=True)
    p.add_argument("--cutoff", type=_fraction_arg, default=None)
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("beta", help="boundary depth at one or more t")
    p.add_argument("path")
    p.add_argument("--t", type=_fraction_list, required=True,
                   help="comma-separated rationals")
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("scan", help="semicontinuity report (JSON)")
    p.add_argument("path")
    p.add_argument("--cycle", required=True)
    p.add_argument("--grid", type=_fraction_list, default=None)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("gen", help="emit a generated complex file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=int, default=2)
    p.add_argument("--closed", type=int, default=1)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--density", type=_fraction_arg, default=Fraction(1, 2))
    p.add_argument("--cutoff", type=_fraction_arg, default=Fraction(10))
    p.add_argument("--field", choices=("f2", "q"), default="f2")
    p.add_argument("--model",
                   choices=("elementary", "random", "pathological", "line"),
                   default="random")
    p.add_argument("--slopes", type=_fraction_list, default=None,
                   help="tilt slopes for --model line")
    p.add_argument("--samples", type=_fraction_list, default=None)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as err:
        code = err.code
        return code if isinstance(code, int) else EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
