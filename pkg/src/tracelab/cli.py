"""Command line entry point.

    tracelab suite <name> [--config file.json] [--report out.json] [--format json|csv]
    tracelab query <expr>
    tracelab bank --seed S --out dir/ [--shape N [N ...]] [--band B] [--size K]

Exit code 0 iff every gated case of the requested suite passed (queries exit
0 on well-formed input, 2 on grammar errors).  TRACELAB_THREADS caps the
number of concurrent cases inside a suite.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bank import BankConfig, generate_bank, write_bank
from .grammar import QueryParseError, run_query
from .suites import SUITE_NAMES, default_config, emit_report, run_suite


def _cmd_suite(args) -> int:
    overrides = None
    if args.config:
        with open(args.config) as fh:
            overrides = json.load(fh)
    report = run_suite(args.name, overrides)
    if args.report:
        emit_report(report, args.report, args.format)
    for case in report.cases:
        status = "pass" if case.passed else "FAIL"
        print(f"[{status}] {case.case_id}: measured={case.measured:.6g} ({case.bound})")
    print(
        f"suite {report.suite}: {sum(c.passed for c in report.cases)}/{len(report.cases)} "
        f"cases passed in {report.wall_time:.1f}s"
    )
    return 0 if report.passed else 1


def _cmd_query(args) -> int:
    try:
        result = run_query(args.expr)
    except QueryParseError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    print(json.dumps(result.to_json(), sort_keys=True))
    return 0


def _cmd_bank(args) -> int:
    cfg = BankConfig(
        shape=tuple(args.shape),
        half_period=args.half_period,
        band=args.band,
        size=args.size,
        seed=args.seed,
    )
    paths = write_bank(generate_bank(cfg), args.out)
    print(f"wrote {len(paths)} members to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="tracelab")
    sub = parser.add_subparsers(dest="command", required=True)

    p_suite = sub.add_parser("suite", help="run a named verification suite")
    p_suite.add_argument("name", choices=SUITE_NAMES)
    p_suite.add_argument("--config", help="JSON file overriding the suite defaults")
    p_suite.add_argument("--report", help="write the report to this path")
    p_suite.add_argument("--format", choices=("json", "csv"), default="json")
    p_suite.set_defaults(func=_cmd_suite)

    p_query = sub.add_parser("query", help="evaluate a space-calculus query")
    p_query.add_argument("expr", help="e.g. 'trace m=1 F[s=3,p=3,q=inf,gamma=2,d=3]'")
    p_query.set_defaults(func=_cmd_query)

    p_bank = sub.add_parser("bank", help="write a deterministic function bank")
    p_bank.add_argument("--seed", type=int, default=7)
    p_bank.add_argument("--out", required=True)
    p_bank.add_argument("--shape", type=int, nargs="+", default=[256, 128])
    p_bank.add_argument("--half-period", type=float, default=2.0 * 3.141592653589793)
    p_bank.add_argument("--band", type=float, default=4.0)
    p_bank.add_argument("--size", type=int, default=10)
    p_bank.set_defaults(func=_cmd_bank)

    p_defaults = sub.add_parser("defaults", help="print a suite's default config")
    p_defaults.add_argument("name", choices=SUITE_NAMES)
    p_defaults.set_defaults(func=lambda a: print(json.dumps(default_config(a.name), indent=2)) or 0)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
