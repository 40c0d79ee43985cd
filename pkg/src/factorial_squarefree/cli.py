"""factorial-squarefree command line.

Exit codes:
  0  success, every result consistent with n!+1 square-free outside S
  1  usage or configuration error
  2  budget exhausted somewhere (Partial or Unknown results present)
  3  a repeated prime factor of n!+1 was found for some n outside S
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .arith import LimitExceededError, factorial
from .divisor import Squarefree, sigma0, squarefree_status, two_pow_omega
from .factorization import DEFAULT_SEED, Budget, factorize
from .output import render
from .scan import (
    EXCLUDED_SET,
    conjecture_violations,
    build_table,
    scan_brocard,
    scan_square_divisors,
    scan_wilson,
    verify_conjecture,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_VIOLATION = 3

log = logging.getLogger("factorial_squarefree")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--workers", type=_positive, default=1)
    common.add_argument("--checkpoint", metavar="PATH")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--budget-ms", type=_positive, default=120_000, help="wall clock per factorization")
    common.add_argument("--rho-cap", type=_positive, default=1 << 27, help="iterations per rho attempt")
    common.add_argument("--plot", metavar="PATH", help="also write a figure to PATH")
    common.add_argument("-q", "--quiet", action="store_true", help="no progress on stderr")

    parser = _Parser(prog="factorial-squarefree", description="Repeated prime factors of n!+1.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("factor", parents=[common], help="factor a number or N!+1")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("value", nargs="?", type=_positive)
    src.add_argument("--factorial-plus-one", type=int, metavar="N")

    p = sub.add_parser("table", parents=[common], help="sigma0 and 2^omega of n!+1 for n up to --max-n")
    p.add_argument("--max-n", type=_positive, default=20)
    p.add_argument("--min-n", type=_positive, default=1)

    p = sub.add_parser("verify", parents=[common], help="decide whether n!+1 is square-free")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--max-p", type=_positive, default=10**4)

    scan = sub.add_parser("scan", help="range searches").add_subparsers(
        dest="scan", required=True, parser_class=_Parser
    )
    s = scan.add_parser("square-divisors", parents=[common], help="p^2 | n!+1 with n <= max-n, p <= max-p")
    s.add_argument("--max-n", type=_positive, default=600)
    s.add_argument("--max-p", type=_positive, default=10**4)
    s = scan.add_parser("wilson", parents=[common], help="Wilson primes up to max-p")
    s.add_argument("--max-p", type=_positive, default=10**5)
    s = scan.add_parser("brocard", parents=[common], help="n!+1 a perfect square, n <= max-n")
    s.add_argument("--max-n", type=_positive, default=10**4)
    return parser


def _budget(args) -> Budget:
    return Budget(args.budget_ms, args.rho_cap)


def _cmd_factor(args) -> tuple[dict, int]:
    if args.factorial_plus_one is not None:
        if args.factorial_plus_one < 0:
            raise UsageError("--factorial-plus-one needs N >= 0")
        value = factorial(args.factorial_plus_one) + 1
        params = {"factorial_plus_one": args.factorial_plus_one}
    else:
        value = args.value
        params = {"value": str(value)}
    f = factorize(value, _budget(args), seed=args.seed)
    sq = squarefree_status(f)
    doc = {
        "command": "factor",
        "params": params,
        "factorization": f.as_dict(),
        "pretty": str(f),
        "sigma0": str(sigma0(f)) if f.complete else None,
        "two_pow_omega": str(two_pow_omega(f)) if f.complete else None,
        "squarefree": {"verdict": sq.verdict.value, "witness": None if sq.witness is None else str(sq.witness)},
    }
    code = EXIT_OK if f.complete else EXIT_BUDGET
    n = args.factorial_plus_one
    if n is not None and n >= 1 and sq.witness is not None and n not in EXCLUDED_SET:
        code = EXIT_VIOLATION
    return doc, code


def _cmd_table(args) -> tuple[dict, int]:
    if args.min_n > args.max_n:
        raise UsageError("--min-n exceeds --max-n")
    rows = build_table(args.max_n, _budget(args), args.seed, args.workers, args.checkpoint, n_min=args.min_n)
    violations = [r.n for r in rows if r.identity_holds is False and not r.in_excluded_set]
    partial = [r.n for r in rows if r.identity_holds is None]
    doc = {
        "command": "table",
        "params": {"min_n": args.min_n, "max_n": args.max_n, "budget_ms": args.budget_ms,
                   "rho_cap": args.rho_cap, "seed": args.seed},
        "rows": [r.as_dict() for r in rows],
        "summary": {
            "rows": len(rows),
            "complete": len(rows) - len(partial),
            "partial": partial,
            "discrepancies": [r.n for r in rows if r.discrepancy],
            "violations": violations,
        },
    }
    if args.plot:
        from .plots import plot_table

        plot_table(rows, args.plot)
    code = EXIT_VIOLATION if violations else EXIT_BUDGET if partial else EXIT_OK
    return doc, code


def _cmd_scan(args) -> tuple[dict, int]:
    kind = args.scan
    if kind == "square-divisors":
        hits = scan_square_divisors(args.max_n, args.max_p, args.workers, args.checkpoint)
        params = {"max_n": args.max_n, "max_p": args.max_p}
    elif kind == "wilson":
        hits = scan_wilson(args.max_p, args.workers, args.checkpoint)
        params = {"max_p": args.max_p}
    else:
        hits = scan_brocard(args.max_n, args.workers, args.checkpoint)
        params = {"max_n": args.max_n}
    bad = conjecture_violations(hits)
    doc = {
        "command": f"scan {kind}",
        "params": params,
        "hits": [h.as_dict() for h in hits],
        "summary": {"hits": len(hits), "violations": len(bad)},
    }
    if args.plot:
        from .plots import plot_hits

        plot_hits(hits, args.plot, title=f"scan {kind}")
    return doc, EXIT_VIOLATION if bad else EXIT_OK


def _cmd_verify(args) -> tuple[dict, int]:
    v = verify_conjecture(args.n, args.max_p, _budget(args), args.seed)
    doc = {"command": "verify", "params": {"n": args.n, "max_p": args.max_p}, "verdict": v.as_dict()}
    if not v.consistent_with_conjecture:
        return doc, EXIT_VIOLATION
    if v.outcome.verdict is Squarefree.UNKNOWN:
        return doc, EXIT_BUDGET
    return doc, EXIT_OK


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"factorial-squarefree: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not log.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(message)s"))
        log.addHandler(handler)
    log.setLevel(logging.WARNING if args.quiet else logging.INFO)

    handlers = {"factor": _cmd_factor, "table": _cmd_table, "scan": _cmd_scan, "verify": _cmd_verify}
    try:
        doc, code = handlers[args.command](args)
    except (UsageError, LimitExceededError, ValueError) as exc:
        print(f"factorial-squarefree: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    stdout.write(render(doc, args.format))
    stdout.flush()
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
