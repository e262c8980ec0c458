"""Command-line interface.

Subcommands: inverse, det, oracle, formulas, check, search.  All numeric
output is exact rational text; identical invocations with the same --seed
produce byte-identical output.

Exit codes: 0 success, 2 non-invertible input, 3 parse or usage error,
4 unknown formula id, 5 catalog defect (or failed cross-validation).
"""

from __future__ import annotations

import argparse
import json
import sys
from random import Random

from . import __version__
from .algebra import Multivector, Signature, gp
from .catalog import load_catalog
from .engine import det_norm, inverse, list_formulas
from .errors import (CatalogDefectError, CliffInvError, MvParseError,
                     NonInvertibleError, UnknownFormulaError)
from .mvtext import format as format_mv
from .mvtext import parse as parse_mv
from .oracle import oracle_inverse
from .sampling import random_multivector
from .search import (GRADE4_OBSTRUCTION_MASKS, grade4_sign_sweep, rediscover,
                     single_product_sweep)

EXIT_OK = 0
EXIT_NONINVERTIBLE = 2
EXIT_USAGE = 3
EXIT_UNKNOWN_FORMULA = 4
EXIT_CATALOG_DEFECT = 5


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _signature(text: str) -> Signature:
    try:
        p_s, q_s = text.split(",")
        return Signature(int(p_s), int(q_s))
    except (ValueError, TypeError) as exc:
        raise _UsageError(f"bad --sig value {text!r}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cliffinv",
                     description="Exact multivector inverses for Cl(p,q), p+q <= 6")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_mv_command(name, help_text):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--sig", required=True, metavar="P,Q",
                         help="algebra signature, e.g. 5,0")
        cmd.add_argument("--formula", default=None, metavar="ID",
                         help="catalog formula id (default: the dimension default)")
        cmd.add_argument("--json", action="store_true", help="JSON output")
        cmd.add_argument("multivector", help="blade-list text, e.g. '1+2 e1+3 e23'")
        return cmd

    add_mv_command("inverse", "inverse and determinant norm by catalog formula")
    add_mv_command("det", "determinant norm (exit 2 when it is zero)")

    oracle_cmd = sub.add_parser("oracle", help="inverse by exact matrix solve")
    oracle_cmd.add_argument("--sig", required=True, metavar="P,Q")
    oracle_cmd.add_argument("--json", action="store_true")
    oracle_cmd.add_argument("multivector")

    formulas_cmd = sub.add_parser("formulas", help="list catalog formulas")
    formulas_cmd.add_argument("--dim", type=int, required=True, metavar="N")
    formulas_cmd.add_argument("--json", action="store_true")

    check_cmd = sub.add_parser(
        "check", help="randomized formula-vs-oracle cross-validation")
    check_cmd.add_argument("--sig", default=None, metavar="P,Q",
                           help="restrict to one signature (default: all p+q <= 6)")
    check_cmd.add_argument("--trials", type=int, default=3, metavar="N",
                           help="random multivectors per signature (default 3)")
    check_cmd.add_argument("--seed", type=int, default=0, metavar="S")

    search_cmd = sub.add_parser("search", help="formula search instruments")
    mode = search_cmd.add_mutually_exclusive_group(required=True)
    mode.add_argument("--rediscover", type=int, metavar="N",
                      help="two-step negation-sequence enumeration, n <= 4")
    mode.add_argument("--sweep", type=int, metavar="N",
                      help="all 2**n single self-product negation sets")
    mode.add_argument("--fit-grade4", action="store_true",
                      help="weight fit over all 1024 sign assignments of the "
                           "dimension-6 grade-4 stage")
    search_cmd.add_argument("--restricted", action="store_true",
                            help="with --sweep 6: sample the grade-4 "
                                 "obstruction subalgebra")
    search_cmd.add_argument("--samples", type=int, default=None, metavar="K")
    search_cmd.add_argument("--seed", type=int, default=0, metavar="S")
    search_cmd.add_argument("--catalog-lines", action="store_true",
                            help="also print verified findings in catalog line format")
    return parser


def _print_mv_result(a, det, formula_id, as_json, out):
    if as_json:
        payload = json.loads(format_mv(a, "json"))
        payload["det"] = str(det)
        payload["formula"] = formula_id
        out.write(json.dumps(payload) + "\n")
    else:
        out.write(f"det = {det}\n")
        out.write(f"inverse = {format_mv(a)}\n")


def _cmd_inverse(args, out):
    sig = _signature(args.sig)
    a = parse_mv(sig, args.multivector)
    entry_id = args.formula or load_catalog().default_id(sig.n)
    det = det_norm(a, entry_id)
    if not det:
        raise NonInvertibleError(
            f"determinant norm is 0 (formula {entry_id})",
            determinant=det, formula_id=entry_id)
    result = inverse(a, entry_id)
    _print_mv_result(result, det, entry_id, args.json, out)
    return EXIT_OK


def _cmd_det(args, out):
    sig = _signature(args.sig)
    a = parse_mv(sig, args.multivector)
    entry_id = args.formula or load_catalog().default_id(sig.n)
    det = det_norm(a, entry_id)
    if args.json:
        out.write(json.dumps({"det": str(det), "formula": entry_id}) + "\n")
    else:
        out.write(f"{det}\n")
    return EXIT_OK if det else EXIT_NONINVERTIBLE


def _cmd_oracle(args, out):
    sig = _signature(args.sig)
    a = parse_mv(sig, args.multivector)
    result = oracle_inverse(a)
    if args.json:
        out.write(format_mv(result, "json") + "\n")
    else:
        out.write(f"inverse = {format_mv(result)}\n")
    return EXIT_OK


def _cmd_formulas(args, out):
    rows = list_formulas(args.dim)
    if args.json:
        out.write(json.dumps([{"id": i, "provenance": p, "status": s}
                              for i, p, s in rows]) + "\n")
    else:
        for ident, provenance, status in rows:
            out.write(f"{ident:14s} {status:10s} {provenance}\n")
        out.write(f"{len(rows)} formulas for dimension {args.dim}\n")
    return EXIT_OK


def _cmd_check(args, out):
    rng = Random(args.seed)
    if args.sig:
        sigs = [_signature(args.sig)]
    else:
        sigs = [Signature(p, n - p) for n in range(7) for p in range(n, -1, -1)]
    failures = 0
    one = lambda sig: Multivector.scalar(sig, 1)
    for sig in sigs:
        bad = 0
        for _ in range(args.trials):
            a = random_multivector(sig, rng)
            det = det_norm(a)
            try:
                by_oracle = oracle_inverse(a)
                oracle_ok = True
            except NonInvertibleError:
                oracle_ok = False
            if oracle_ok != bool(det):
                bad += 1
                continue
            if det:
                by_formula = inverse(a)
                if (by_formula != by_oracle
                        or gp(a, by_formula) != one(sig)
                        or gp(by_formula, a) != one(sig)):
                    bad += 1
        status = "ok" if not bad else f"FAIL ({bad}/{args.trials})"
        out.write(f"{sig!r:9} {status}\n")
        failures += bad
    out.write(f"checked {len(sigs)} signatures x {args.trials} trials: "
              f"{'all ok' if not failures else f'{failures} failures'}\n")
    return EXIT_OK if not failures else EXIT_CATALOG_DEFECT


def _cmd_search(args, out):
    rng = Random(args.seed)
    if args.rediscover is not None:
        kwargs = {"samples": args.samples} if args.samples else {}
        report = rediscover(args.rediscover, rng=rng, **kwargs)
    elif args.sweep is not None:
        restriction = GRADE4_OBSTRUCTION_MASKS if args.restricted else None
        kwargs = {"samples": args.samples} if args.samples else {}
        report = single_product_sweep(args.sweep, restriction=restriction,
                                      rng=rng, **kwargs)
    else:
        kwargs = {"samples": args.samples} if args.samples else {}
        report = grade4_sign_sweep(rng=rng, **kwargs)
    out.write(report.to_text() + "\n")
    if args.catalog_lines:
        for line in report.to_catalog_lines():
            out.write(line + "\n")
    return EXIT_OK


def run(argv, out=None, err=None):
    """Parse argv and execute; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {"inverse": _cmd_inverse, "det": _cmd_det,
                   "oracle": _cmd_oracle, "formulas": _cmd_formulas,
                   "check": _cmd_check, "search": _cmd_search}[args.command]
        return handler(args, out)
    except _UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except MvParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except UnknownFormulaError as exc:
        err.write(f"unknown formula: {exc}\n")
        return EXIT_UNKNOWN_FORMULA
    except NonInvertibleError as exc:
        err.write(f"not invertible: {exc}\n")
        return EXIT_NONINVERTIBLE
    except CatalogDefectError as exc:
        err.write(f"catalog defect: {exc}\n")
        return EXIT_CATALOG_DEFECT
    except (ValueError, CliffInvError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main():
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
