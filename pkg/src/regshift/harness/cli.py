"""Command line: resolve, betti, check, search."""

from __future__ import annotations

import argparse
import logging
import sys

from ..budget import BudgetExceeded, memory_budget, time_budget
from ..polyring import DEFAULT_CHARACTERISTIC, ParseError, is_prime
from ..resolution import betti, koszul_betti_oracle, resolve_minimal, resolve_schreyer
from .batch import RunReport, SearchParams, environment, parse_j_strategy, run_batch, run_job
from .parse import parse_checks, read_job
from .report import emit_betti, emit_report, emit_resolution

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION, EXIT_CANDIDATE = 0, 1, 2, 3


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _prime(text):
    v = int(text)
    if not is_prime(v):
        raise argparse.ArgumentTypeError(f"{text} is not prime")
    return v


def _j_strategy(text):
    try:
        parse_j_strategy(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
    return text


def _checks(text):
    try:
        return parse_checks(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--timeout", type=float, default=None, metavar="SECS",
                        help="wall-clock budget per instance")
    common.add_argument("--memory", type=float, default=None, metavar="MB",
                        help="resident-memory budget per instance")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="regshift", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resolve", parents=[common], help="print a graded free resolution")
    p.add_argument("file")
    p.add_argument("--nonminimal", action="store_true", help="print the Schreyer resolution unminimized")

    p = sub.add_parser("betti", parents=[common], help="print the graded Betti table")
    p.add_argument("file")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against Koszul homology (exit 2 on mismatch)")

    p = sub.add_parser("check", parents=[common], help="run bound checks on one module")
    p.add_argument("file")
    p.add_argument("--bounds", type=_checks, default=None,
                   help="all|codim1|regthm|maincor|ehu1|ehu2|conj or a comma list (default: the file's checks)")
    p.add_argument("--j", dest="j_strategy", type=_j_strategy, default="self", help="self | ci | ci:d")

    p = sub.add_parser("search", parents=[common], help="seeded batch of random instances")
    p.add_argument("--vars", type=_positive_int, default=None, help="number of variables (default: random 2..4)")
    p.add_argument("--maxdeg", type=_positive_int, default=4)
    p.add_argument("--gens", type=_positive_int, default=5)
    p.add_argument("--count", type=_positive_int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--char", type=_prime, default=DEFAULT_CHARACTERISTIC)
    p.add_argument("--order", choices=("degrevlex", "deglex", "lex"), default="degrevlex")
    p.add_argument("--j", dest="j_strategy", type=_j_strategy, default="self")
    p.add_argument("--family", choices=("monomial", "ci"), default="monomial")
    p.add_argument("--bounds", type=_checks, default=None)
    p.add_argument("--jobs", type=_positive_int, default=1)
    return ap


def report_exit_code(report: RunReport, strict_timeouts: bool) -> int:
    code = report.exit_code
    if code:
        return code
    inst = report.summary["instances"]
    if inst["error"] or (strict_timeouts and (inst["timeout"] or inst["memory"])):
        return EXIT_ERROR
    return EXIT_OK


def _cmd_resolve(args, out) -> int:
    job = read_job(args.file)
    with time_budget(args.timeout), memory_budget(args.memory):
        m = job.presentation()
        res = resolve_schreyer(m) if args.nonminimal else resolve_minimal(m)
    out.write(emit_resolution(res, args.format))
    return EXIT_OK


def _cmd_betti(args, out) -> int:
    job = read_job(args.file)
    with time_budget(args.timeout), memory_budget(args.memory):
        m = job.presentation()
        b = betti(resolve_minimal(m))
        extra, code = {}, EXIT_OK
        if args.oracle:
            ob = koszul_betti_oracle(m, job.degree_cap)
            agree = ob.records() == b.records()
            extra = {"oracle": ob.records(), "oracle_agrees": agree}
            code = EXIT_OK if agree else EXIT_VIOLATION
    out.write(emit_betti(b, args.format, extra))
    if args.oracle and args.format == "table":
        out.write("oracle: " + ("agrees" if extra["oracle_agrees"] else "MISMATCH") + "\n")
        if not extra["oracle_agrees"]:
            out.write(ob.render() + "\n")
    return code


def _cmd_check(args, out) -> int:
    job = read_job(args.file)
    rec = run_job(job, args.bounds, args.j_strategy, 0, args.timeout, memory=args.memory)
    report = RunReport([rec], environment(ring=job.ring))
    out.write(emit_report(report, args.format, args.verbose))
    return report_exit_code(report, strict_timeouts=True)


def _cmd_search(args, out) -> int:
    params = SearchParams(
        count=args.count, seed=args.seed, nvars=args.vars, maxdeg=args.maxdeg, gens=args.gens,
        characteristic=args.char, order=args.order, j_strategy=args.j_strategy, family=args.family,
        timeout=args.timeout, memory=args.memory, jobs=args.jobs,
    )
    if args.bounds is not None:
        params.checks = args.bounds
    report = run_batch(params)
    out.write(emit_report(report, args.format, args.verbose))
    return report_exit_code(report, strict_timeouts=False)


COMMANDS = {"resolve": _cmd_resolve, "betti": _cmd_betti, "check": _cmd_check, "search": _cmd_search}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; 2 is reserved for violations here
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, out)
    except ParseError as e:
        print(f"{args.file}: {e}", file=sys.stderr)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
    except Exception as e:
        logging.getLogger(__name__).debug("engine failure", exc_info=True)
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
