"""Command-line driver.

    gtl check FILE [--config C] [--dump-checks]
    gtl run FILE [--config C] [--mode M] [--counters] [--dump-checks] [--dump-blame] ...
    gtl lattice FILE [--mode M] [--cdf] [--jobs N] [--wall-clock]
    gtl report FILE [--step-budget N]

FILE may also name a shipped fixture (``fig1.gtl``, ``sieve``).  Machine
output goes to stdout and diagnostics to stderr.  Exit codes: 0 success,
2 static error, 3 runtime error, 64 usage error.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import fixtures
from .bench import DEFAULT_WEIGHTS, LatticeTooLarge, blame_cost_report, run_lattice
from .config import ConfigError
from .pipeline import execute, prepare
from .runtime.interp import Mode
from .syntax.reader import ParseError
from .types.checker import StaticTypeError

EXIT_OK, EXIT_STATIC, EXIT_RUNTIME, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parser():
    p = _Parser(prog="gtl", description="Gradual typing workbench: Deep, Shallow and blame.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("file", help="program file, or the name of a shipped fixture")
        sp.add_argument("--config", default="typed",
                        help="bit string (one bit per configurable module, 1 = typed), "
                             "or typed/untyped (default typed)")
        sp.add_argument("--lax-shapes", action="store_true",
                        help="use head-only list checks and skip union checks")
        sp.add_argument("--check-desugared", action="store_true",
                        help="also insert checks into code produced by loop expansion")
        sp.add_argument("--dump-checks", action="store_true",
                        help="print inserted check sites, one per line: kind loc shape")

    sp = sub.add_parser("check", help="typecheck a configuration")
    common(sp)
    sp = sub.add_parser("run", help="run a configuration")
    common(sp)
    sp.add_argument("--mode", default="shallow", choices=[m.value for m in Mode])
    sp.add_argument("--counters", action="store_true", help="print cost counters as name=value")
    sp.add_argument("--dump-blame", action="store_true",
                    help="on a failed shallow check, print the blame report")
    sp.add_argument("--init-trusted", action="store_true",
                    help="record primitive results in the blame map")
    sp.add_argument("--step-budget", type=int, default=None)

    sp = sub.add_parser("lattice", help="run every configuration and print a CSV report")
    sp.add_argument("file")
    sp.add_argument("--mode", default="shallow", choices=[m.value for m in Mode])
    sp.add_argument("--cdf", action="store_true", help="print the overhead CDF instead")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp.add_argument("--wall-clock", action="store_true",
                    help="also time each configuration (9 runs, mean of the last 8)")
    sp.add_argument("--step-budget", type=int, default=None)
    sp.add_argument("--weight", action="append", default=[], metavar="NAME=VALUE",
                    help=f"override a cost weight ({', '.join(DEFAULT_WEIGHTS)})")

    sp = sub.add_parser("report", help="worst Shallow, worst Deep, and fully-typed SB overhead")
    sp.add_argument("file")
    sp.add_argument("--step-budget", type=int, default=None)
    return p


def _source(name):
    if os.path.exists(name):
        with open(name, encoding="utf-8") as f:
            return f.read()
    stem = os.path.basename(name)
    stem = stem[:-4] if stem.endswith(".gtl") else stem
    if fixtures.path(stem).is_file():
        return fixtures.read(stem)
    raise UsageError(f"gtl: no such file: {name}")


def _weights(items):
    w = dict(DEFAULT_WEIGHTS)
    for item in items:
        name, _, value = item.partition("=")
        if name not in w:
            raise UsageError(f"gtl: unknown cost weight {name!r}")
        try:
            w[name] = float(value)
        except ValueError:
            raise UsageError(f"gtl: bad weight value {value!r}") from None
    return w


def _dump_checks(prepared, out):
    for s in prepared.sites():
        print(s, file=out)


def _cmd_check(args, out, err):
    prepared = prepare(_source(args.file), args.config, Mode.SHALLOW, lax=args.lax_shapes,
                       check_desugared=args.check_desugared)
    if args.dump_checks:
        _dump_checks(prepared, out)
    print(f"ok: configuration {prepared.prog.config}", file=err)
    return EXIT_OK


def _cmd_run(args, out, err):
    prepared = prepare(_source(args.file), args.config, args.mode, lax=args.lax_shapes,
                       check_desugared=args.check_desugared)
    if args.dump_checks:
        _dump_checks(prepared, out)
    outcome = execute(prepared, init_trusted=args.init_trusted, step_budget=args.step_budget)
    for line in outcome.output:
        print(line, file=out)
    if outcome.ok:
        print(outcome.rendered, file=out)
    else:
        print(f"error: {outcome.error}", file=err)
        blame = getattr(outcome.error, "blame", None)
        if args.dump_blame and blame is not None:
            for line in blame.lines():
                print(line, file=out)
    if args.counters:
        for line in outcome.counters.lines():
            print(line, file=out)
    return EXIT_OK if outcome.ok else EXIT_RUNTIME


def _cmd_lattice(args, out, err):
    source = _source(args.file)
    if args.jobs < 1:
        raise UsageError("gtl: --jobs must be at least 1")
    report = run_lattice(source, args.mode, weights=_weights(args.weight),
                         step_budget=args.step_budget, jobs=args.jobs, wall_clock=args.wall_clock)
    out.write(report.cdf_csv() if args.cdf else report.to_csv())
    if report.errors:
        print(f"{len(report.errors)} configuration(s) ended in an error", file=err)
    return EXIT_OK


def _cmd_report(args, out, err):
    name = os.path.basename(args.file)
    name = name[:-4] if name.endswith(".gtl") else name
    row = blame_cost_report(_source(args.file), name, step_budget=args.step_budget)
    print("program,shallow_worst,deep_worst,sb_typed", file=out)
    print(row, file=out)
    return EXIT_OK


COMMANDS = {"check": _cmd_check, "run": _cmd_run, "lattice": _cmd_lattice, "report": _cmd_report}


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = _parser()
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else argv)
        if args.command is None:
            raise UsageError("gtl: missing command")
        return COMMANDS[args.command](args, out, err)
    except UsageError as e:
        print(e, file=err)
        print(parser.format_help(), file=err)
        return EXIT_USAGE
    except (ConfigError, LatticeTooLarge) as e:
        print(f"gtl: {e}", file=err)
        return EXIT_USAGE
    except (ParseError, StaticTypeError) as e:
        print(f"static error: {e}", file=err)
        return EXIT_STATIC


if __name__ == "__main__":
    sys.exit(main())
