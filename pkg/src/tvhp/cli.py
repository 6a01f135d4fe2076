"""Command-line front end.

    tvhp coeffs M N [--json | --csv]
    tvhp eval M N --xi RE,IM [--v RE,IM]
    tvhp order WORD [--antinormal]
    tvhp verify ID [parameter flags] [--tol X] [--json]
    tvhp verify-all [--tol X] [--max-degree D] [--cutoff N] [--quad-order Q] [--jobs J] [--json]

Exit status: 0 when everything passes, 1 when a verification fails,
2 on usage or domain errors. ``TVHP_FORMAT=json`` makes JSON the default
output format.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

from . import __version__
from .boson import antinormal_order, normal_order
from .errors import TVHPError
from .hermite import hermite_coeffs, hermite_eval
from .verify import REGISTRY, EXTRAS, Options, VerificationReport, reports_to_json, run_identity, verify_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def parse_complex(text: str) -> complex:
    """Accept ``RE,IM``, a plain real, or Python complex syntax (``1+2j``/``1+2i``)."""
    text = text.strip()
    try:
        if "," in text:
            re_part, im_part = text.split(",")
            return complex(float(re_part), float(im_part))
        return complex(text.replace("i", "j").replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def _default_format() -> str:
    return "json" if os.environ.get("TVHP_FORMAT", "").lower() == "json" else "text"


# per-identity flags; dest name matches the runner keyword
_PARAM_FLAGS = [
    ("--m", _nonneg_int, "first degree"),
    ("--n", _nonneg_int, "second degree"),
    ("--K", _nonneg_int, "series truncation degree for factorization checks"),
    ("--M", _nonneg_int, "generating-function truncation"),
    ("--t", parse_complex, "generating-function parameter t"),
    ("--t-prime", parse_complex, "generating-function parameter t'"),
    ("--s", parse_complex, "generating-function parameter s"),
    ("--x", parse_complex, None),
    ("--y", parse_complex, None),
    ("--x-prime", parse_complex, None),
    ("--y-prime", parse_complex, None),
    ("--xi", parse_complex, "complex point xi"),
    ("--v", parse_complex, "second argument (defaults to conj(xi))"),
    ("--alpha", parse_complex, "shift of the Gaussian weight"),
    ("--tau", float, "squeezing tanh(lambda), |tau| < 1"),
    ("--eta", parse_complex, "Gaussian exponent, Re(eta) < 0"),
    ("--f", parse_complex, None),
    ("--g", parse_complex, None),
    ("--q", _nonneg_int, "Gauss-Hermite order per real axis"),
    ("--cutoff", _nonneg_int, "Fock cutoff N"),
    ("--basis-max", _nonneg_int, "largest index of the Gram block"),
]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tvhp", description="Verification engine for two-variable Hermite polynomial identities.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("coeffs", help="exact coefficient table of H_{m,n}(u, v)")
    p.add_argument("m", type=_nonneg_int)
    p.add_argument("n", type=_nonneg_int)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_const", const="json", dest="format")
    fmt.add_argument("--csv", action="store_const", const="csv", dest="format")

    p = sub.add_parser("eval", help="evaluate H_{m,n}(xi, v) with v = conj(xi) by default")
    p.add_argument("m", type=_nonneg_int)
    p.add_argument("n", type=_nonneg_int)
    p.add_argument("--xi", type=parse_complex, required=True, metavar="RE,IM")
    p.add_argument("--v", type=parse_complex, metavar="RE,IM")
    p.add_argument("--json", action="store_const", const="json", dest="format")

    p = sub.add_parser("order", help="normal (or antinormal) order a word such as 'a a+ b b+'")
    p.add_argument("word")
    p.add_argument("--antinormal", action="store_true")

    ids = sorted(set(REGISTRY) | set(EXTRAS))
    p = sub.add_parser("verify", help="verify one identity at one parameter point",
                       epilog="identities: " + ", ".join(ids))
    p.add_argument("id")
    group = p.add_argument_group("identity parameters")
    for flag, kind, help_text in _PARAM_FLAGS:
        group.add_argument(flag, type=kind, help=help_text, dest=flag[2:].replace("-", "_"))
    _common_report_flags(p)

    p = sub.add_parser("verify-all", help="run every registered identity over its default grid")
    p.add_argument("--max-degree", type=_nonneg_int)
    p.add_argument("--cutoff", type=_nonneg_int, default=40)
    p.add_argument("--quad-order", type=_nonneg_int)
    p.add_argument("--jobs", type=_nonneg_int, help="worker processes (default: CPU count)")
    _common_report_flags(p)
    return parser


def _common_report_flags(p):
    p.add_argument("--tol", type=_positive_float, help="override the numeric tolerance")
    p.add_argument("--json", action="store_const", const="json", dest="format")
    p.add_argument("--no-timing", action="store_true", help="omit wall_time for byte-identical output")


def _cmd_coeffs(args, out) -> int:
    rows = [(j, k, c.re_num, c.re_den) for (j, k), c in sorted(hermite_coeffs(args.m, args.n).terms.items(),
                                                               reverse=True)]
    fmt = args.format or _default_format()
    if fmt == "json":
        out.write(json.dumps([{"j": j, "k": k, "num": a, "den": b} for j, k, a, b in rows]) + "\n")
    elif fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["j", "k", "num", "den"])
        writer.writerows(rows)
    else:
        for row in rows:
            out.write(" ".join(map(str, row)) + "\n")
    return EXIT_OK


def _cmd_eval(args, out) -> int:
    v = args.xi.conjugate() if args.v is None else args.v
    value = hermite_eval(args.m, args.n, args.xi, v)
    if (args.format or _default_format()) == "json":
        out.write(json.dumps({"m": args.m, "n": args.n, "re": value.real, "im": value.imag}) + "\n")
    else:
        out.write(f"{value.real!r},{value.imag!r}\n")
    return EXIT_OK


def _cmd_order(args, out) -> int:
    op = antinormal_order(args.word) if args.antinormal else normal_order(args.word)
    out.write(f"{op}\n")
    return EXIT_OK


def _format_report(r: VerificationReport) -> str:
    residual = r.residual if isinstance(r.residual, str) or r.residual is None else f"{r.residual:.3e}"
    tol = r.tolerance if isinstance(r.tolerance, str) else f"{r.tolerance:.1e}"
    line = f"{r.verdict.upper():4}  {r.id:22} residual={residual}  tol={tol}"
    if r.wall_time is not None:
        line += f"  ({r.wall_time:.2f} s)"
    lines = [line]
    if r.notes:
        lines.append(f"      note: {r.notes}")
    for key, value in r.details.items():
        if isinstance(value, float):
            value = f"{value:.15g}"
        lines.append(f"      {key}: {value}")
    return "\n".join(lines)


def _emit(reports, fmt, out):
    if fmt == "json":
        out.write(reports_to_json(reports) + "\n")
    else:
        for r in reports:
            out.write(_format_report(r) + "\n")


def _cmd_verify(args, out) -> int:
    if args.id not in REGISTRY and args.id not in EXTRAS:
        raise UsageError(f"unknown identity {args.id!r}; known: {', '.join(REGISTRY)}")
    params = {flag[2:].replace("-", "_"): getattr(args, flag[2:].replace("-", "_")) for flag, _, _ in _PARAM_FLAGS}
    params = {k: v for k, v in params.items() if v is not None}
    report = run_identity(args.id, params, tol=args.tol, timing=not args.no_timing)
    _emit([report], args.format or _default_format(), out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_verify_all(args, out) -> int:
    opts = Options(tol=args.tol, max_degree=args.max_degree, cutoff=args.cutoff, quad_order=args.quad_order)
    start = time.perf_counter()
    reports = verify_all(opts, jobs=args.jobs, timing=not args.no_timing)
    fmt = args.format or _default_format()
    _emit(reports, fmt, out)
    failed = [r.id for r in reports if not r.passed]
    if fmt != "json":
        summary = f"{len(reports) - len(failed)}/{len(reports)} passed"
        if not args.no_timing:
            summary += f" in {time.perf_counter() - start:.1f} s"
        out.write(summary + "\n")
    return EXIT_FAIL if failed else EXIT_OK


_COMMANDS = {
    "coeffs": _cmd_coeffs,
    "eval": _cmd_eval,
    "order": _cmd_order,
    "verify": _cmd_verify,
    "verify-all": _cmd_verify_all,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (TVHPError, ValueError, ArithmeticError) as exc:
        print(f"tvhp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
