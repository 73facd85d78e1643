"""Command-line interface.

Subcommands: ``spectrum`` (exact transform), ``sample`` (measurement
draws), ``gl`` (heavy-coefficient search), ``verify`` (Monte-Carlo check
of the accuracy guarantees).  Exit codes are a stable contract:

    0  success
    2  usage or parse error
    3  capacity exceeded
    4  verification requested but infeasible
    5  statistical acceptance gate failed

Outputs for a fixed ``--seed`` are byte-identical across invocations and
platforms (floats are printed with repr, the shortest round-trip form).
The environment variable ``WALSHGL_MAX_N`` may lower (never raise) the
exact-transform capacity cap.
"""

from __future__ import annotations

import argparse
import os
import sys
from contextlib import nullcontext
from fractions import Fraction

from . import gl as glmod
from . import qsim, stats, walsh
from .boolfn import (
    MAX_N,
    BitVector,
    BooleanFunction,
    VectorialFunction,
    load_sbox,
    load_truth_table,
    parse_anf,
)
from .errors import CapacityError, ParseError


class InfeasibleVerification(RuntimeError):
    """Oracle verification was required but the exact transform is out of reach."""


def oracle_cap() -> int:
    raw = os.environ.get("WALSHGL_MAX_N")
    if raw is None:
        return MAX_N
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"WALSHGL_MAX_N must be an integer, got {raw!r}") from None
    if value < 1:
        raise ParseError(f"WALSHGL_MAX_N must be positive, got {value}")
    return min(value, MAX_N)


def _add_input_flags(p: argparse.ArgumentParser, with_b: bool):
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--anf", metavar="EXPR", help="inline ANF, e.g. 'x1+x2*x3'")
    group.add_argument("--tt", metavar="PATH", help=".tt truth-table file")
    group.add_argument("--sbox", metavar="PATH", help=".sbox lookup-table file")
    p.add_argument("--n", type=int, default=None, help="variable count override for --anf")
    if with_b:
        p.add_argument(
            "--b",
            metavar="MASK",
            default=None,
            help="output mask for --sbox input (binary string or 0x-hex)",
        )


def _add_param_flags(p: argparse.ArgumentParser):
    p.add_argument("--eps", required=True, help="threshold in (0, 1], e.g. 0.4")
    p.add_argument("--delta", required=True, type=float, help="failure budget in (0, 1)")


def _add_sampling_flags(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0, help="64-bit sampling seed")
    p.add_argument(
        "--mode",
        choices=(qsim.SPECTRAL, qsim.STATEVECTOR),
        default=qsim.SPECTRAL,
        help="sampling path (default: spectral)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walshgl",
        description="Walsh spectra and heavy-coefficient search for Boolean functions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="exact spectrum of a function or component")
    _add_input_flags(p, with_b=True)
    p.add_argument("--out", metavar="PATH", default=None)
    p.add_argument("--format", choices=("csv", "bin"), default="csv")
    p.add_argument("--top", type=int, default=8, help="how many top |S| values to echo")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sample", help="draw measurement outcomes")
    _add_input_flags(p, with_b=True)
    _add_sampling_flags(p)
    p.add_argument("--draws", type=int, default=1)
    p.add_argument("--out", metavar="PATH", default=None)
    p.add_argument(
        "--dump-amplitudes",
        metavar="PATH",
        default=None,
        help="write the final state amplitudes (index,re,im); statevector mode only",
    )
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("gl", help="heavy-coefficient search (single or multi output)")
    _add_input_flags(p, with_b=False)
    _add_param_flags(p)
    _add_sampling_flags(p)
    p.add_argument("--strict-confidence", action="store_true")
    p.add_argument("--out", metavar="PATH", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_gl)

    p = sub.add_parser("verify", help="Monte-Carlo check of the accuracy guarantees")
    _add_input_flags(p, with_b=False)
    _add_param_flags(p)
    _add_sampling_flags(p)
    p.add_argument("--runs", type=int, default=200)
    p.add_argument("--out", metavar="PATH", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def _load_input(args) -> BooleanFunction | VectorialFunction:
    if args.anf is not None:
        return parse_anf(args.anf, n=args.n)
    if args.tt is not None:
        return load_truth_table(args.tt)
    return load_sbox(args.sbox)


def _check_oracle_capacity(n: int):
    cap = oracle_cap()
    if n > cap:
        raise CapacityError(f"n={n} exceeds the exact-transform cap of {cap}")


def _parse_eps(text: str) -> Fraction:
    eps = walsh.as_fraction(text)
    if not 0 < eps <= 1:
        raise ParseError(f"--eps must be in (0, 1], got {text}")
    return eps


def _check_delta(delta: float):
    if not 0 < delta < 1:
        raise ParseError(f"--delta must be in (0, 1), got {delta}")


def _out_stream(path: str | None):
    if path is None:
        return nullcontext(sys.stdout)
    return open(path, "w")


def cmd_spectrum(args) -> int:
    target = _load_input(args)
    _check_oracle_capacity(target.n)
    if isinstance(target, VectorialFunction):
        if args.b is None:
            raise ParseError("--sbox input needs --b to pick a component")
        spectrum = walsh.component_spectrum(target, BitVector.parse(args.b, target.m))
    else:
        spectrum = walsh.fwht(target)

    if args.format == "bin":
        if args.out is None:
            raise ParseError("--format bin needs --out")
        walsh.write_spectrum_binary(spectrum, args.out)
    else:
        with _out_stream(args.out) as out:
            walsh.spectrum_to_csv(spectrum, out)

    summary = sys.stdout if args.out is not None else sys.stderr
    total = spectrum.parseval_sum()
    expected = 4**spectrum.n
    print(
        f"parseval: sum W^2 = {total} ({'ok' if total == expected else 'VIOLATED'},"
        f" expected {expected})",
        file=summary,
    )
    for a, w in walsh.top_coefficients(spectrum, args.top):
        print(f"top |S|: {a}  W={w}  S={w / (1 << spectrum.n)!r}", file=summary)
    return 0


def cmd_sample(args) -> int:
    target = _load_input(args)
    if args.draws < 1:
        raise ParseError(f"--draws must be positive, got {args.draws}")
    if args.mode == qsim.SPECTRAL:
        _check_oracle_capacity(target.n)
    if args.dump_amplitudes is not None and args.mode != qsim.STATEVECTOR:
        raise ParseError("--dump-amplitudes needs --mode statevector")

    if isinstance(target, VectorialFunction):
        if args.b is None:
            raise ParseError("--sbox input needs --b to pick a component")
        b = BitVector.parse(args.b, target.m)
        stream = qsim.qwt_bf_sample_stream(target, b, args.seed, args.mode)
        state = qsim.qwt_bf_state(target, b) if args.dump_amplitudes else None
    else:
        stream = qsim.dj_sample_stream(target, args.seed, args.mode)
        state = qsim.dj_state(target) if args.dump_amplitudes else None

    if state is not None:
        with open(args.dump_amplitudes, "w") as fh:
            fh.write("index,re,im\n")
            for i, amp in enumerate(state.amplitudes):
                fh.write(f"{i},{amp.real!r},{amp.imag!r}\n")

    encoded = stream.draw_encoded(args.draws)
    with _out_stream(args.out) as out:
        for v in encoded:
            out.write(format(int(v), f"0{stream.n}b") + "\n")
    return 0


def cmd_gl(args) -> int:
    target = _load_input(args)
    eps = _parse_eps(args.eps)
    _check_delta(args.delta)
    params = glmod.derive_params(eps, args.delta, strict_confidence=args.strict_confidence)

    oracle_ok = target.n <= oracle_cap()
    if args.mode == qsim.SPECTRAL and not oracle_ok:
        raise CapacityError(
            f"n={target.n} exceeds the exact-transform cap; spectral sampling needs it"
        )

    if isinstance(target, VectorialFunction):
        result = glmod.run_algorithm2(target, params, args.seed, args.mode)
    else:
        result = glmod.run_algorithm1(target, params, args.seed, args.mode)

    verdict = None
    if oracle_ok:
        result = glmod.annotate_with_oracle(result, target)
        verdict = glmod.verify_against_oracle(target, result, eps)

    with _out_stream(args.out) as out:
        if args.format == "csv":
            out.write("a,b,count,exact_S\n")
            for e in result.entries:
                b = "" if e.b is None else str(e.b)
                s = "" if e.exact_s is None else repr(e.exact_s)
                out.write(f"{e.a},{b},{e.count},{s}\n")
        else:
            result.write_json(out)

    echo = sys.stdout if args.out is not None else sys.stderr
    print(
        f"l={params.l} s={float(params.s)!r} ceil(s)={params.count_threshold}"
        f" queries={result.queries} entries={len(result.entries)}",
        file=echo,
    )
    if verdict is None:
        print("oracle verification infeasible at the current capacity cap", file=echo)
        raise InfeasibleVerification(
            f"n={target.n} exceeds the exact-transform cap of {oracle_cap()}"
        )
    print(
        f"oracle verdict: complete={verdict.complete} sound={verdict.sound}",
        file=echo,
    )
    return 0


def cmd_verify(args) -> int:
    target = _load_input(args)
    eps = _parse_eps(args.eps)
    _check_delta(args.delta)
    if args.runs < 100:
        raise ParseError(f"--runs must be at least 100, got {args.runs}")
    if target.n > oracle_cap():
        raise InfeasibleVerification(
            f"n={target.n} exceeds the exact-transform cap of {oracle_cap()}"
        )

    if isinstance(target, VectorialFunction):
        report = stats.monte_carlo_theorem2(
            target, eps, args.delta, args.runs, args.seed, mode=args.mode
        )
    else:
        report = stats.monte_carlo_theorem1(
            target, eps, args.delta, args.runs, args.seed, mode=args.mode
        )

    with _out_stream(args.out) as out:
        report.write_json(out)
    echo = sys.stdout if args.out is not None else sys.stderr
    print(
        f"runs={report.runs} completeness_failures={report.completeness_failures}"
        f" soundness_failures={report.soundness_failures}"
        f" gate={report.gate_threshold!r} passed={report.passed}",
        file=echo,
    )
    return 0 if report.passed else 5


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"walshgl: parse error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"walshgl: capacity: {exc}", file=sys.stderr)
        return 3
    except InfeasibleVerification as exc:
        print(f"walshgl: infeasible verification: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError) as exc:
        print(f"walshgl: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
