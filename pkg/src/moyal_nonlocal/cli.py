"""Command-line entry point: ``moyal-nonlocal <command> [flags]``.

Exit status is 0 when every check passes, 1 when a check fails (the failing
checks are named on stderr) and 2 for usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import poset, report
from .clockshift import FAMILIES
from .pvtower import STRATEGIES

FORMATS = ("json", "csv", "dot")


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, help="tolerance of the command's main check")

    top = argparse.ArgumentParser(prog="moyal-nonlocal",
                                  description="Verification runs for Weyl bases, sine brackets, "
                                              "continued fractions, AF towers and finite posets.")
    sub = top.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("su", parents=[common], help="clock/shift Weyl basis relations")
    p.add_argument("--n", type=int, default=7, help="matrix size, or level index for --family rotation")
    p.add_argument("--family", choices=FAMILIES, default="cyclotomic-odd")
    p.add_argument("--theta", default="golden", help="rotation family only")

    p = sub.add_parser("moyal", parents=[common], help="sine bracket quadrature and classical limit")
    p.add_argument("--n", type=int, default=5, help="k = 2 pi / n")
    p.add_argument("--levels", type=int, default=6, help="number of halvings of k from 0.4")

    p = sub.add_parser("cf", parents=[common], help="continued fraction convergents")
    p.add_argument("--theta", default="golden", help="golden, sqrt2m1 or a decimal in (0, 1)")
    p.add_argument("--levels", type=int, default=10)

    p = sub.add_parser("bratteli", parents=[common], help="Bratteli diagrams and embeddings")
    p.add_argument("--family", choices=report.BRATTELI_FAMILIES, default="penrose")
    p.add_argument("--levels", type=int, default=10)
    p.add_argument("--theta", default="golden", help="pv family only")

    p = sub.add_parser("pv", parents=[common], help="rotation-algebra tower distances")
    p.add_argument("--theta", default="golden")
    p.add_argument("--n", type=int, default=10, help="largest level")
    p.add_argument("--strategy", choices=STRATEGIES, default="naive")

    p = sub.add_parser("poset", parents=[common], help="quotients of finite covers")
    p.add_argument("--example", choices=sorted(poset.EXAMPLES), default="segment")
    p.add_argument("--n", type=int, help="number of points (segment and singletons)")
    return top


def _build(args) -> report.RunReport:
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    tol = args.tol
    c = args.command
    if c == "su":
        return report.timed(report.su_report, args.n, args.family, rng,
                            tol=tol if tol is not None else 1e-11, theta=args.theta)
    if c == "moyal":
        return report.timed(report.moyal_report, args.n, args.levels,
                            tol=tol if tol is not None else 1e-6)
    if c == "cf":
        return report.timed(report.cf_report, args.theta, args.levels)
    if c == "bratteli":
        return report.timed(report.bratteli_report, args.family, args.levels, rng,
                            theta=args.theta, tol=tol if tol is not None else 1e-12)
    if c == "pv":
        return report.timed(report.pv_report, args.theta, args.n, args.strategy, args.seed,
                            tol=tol if tol is not None else 1e-12)
    if c == "poset":
        return report.timed(report.poset_report, args.example, args.n)
    raise UsageError(f"unknown command {c!r}")


def render(rep: report.RunReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        if rep.table is None:
            raise UsageError(f"{rep.command} has no CSV view")
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=rep.columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(rep.table)
        return buf.getvalue()
    if rep.dot is None:
        raise UsageError(f"{rep.command} has no DOT view (available for bratteli and poset)")
    return rep.dot


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.format == "dot" and args.command not in ("bratteli", "poset"):
            raise UsageError("--format dot is only available for bratteli and poset")
        rep = _build(args)
        text = render(rep, args.format)
    except (UsageError, ValueError, IndexError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"FAIL: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not rep.ok:
        names = ", ".join(c.name for c in rep.failed)
        print(f"FAIL: {names}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
