"""Command-line front end: ``labstate run``, ``labstate verify``, ``labstate table``."""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import bits
from .errors import LabstateError
from .quantum import format_labstate
from .scenario import BUILTIN_SCENARIOS, load_scenario
from .verify import GROUPS, run_group

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _fmt_prob(p: Fraction, float_mode: bool) -> str:
    return f"{float(p):.12g}" if float_mode else str(p)


def cmd_run(args) -> int:
    sc = load_scenario(args.scenario)
    upto = args.stage
    if upto is not None and not 0 <= upto <= len(sc.stages):
        raise LabstateError(f"--stage must lie in 0..{len(sc.stages)}")
    states = sc.run(upto)
    names = ["init"] + [m.name or f"stage{k}" for k, m in enumerate(sc.stages, start=1)]
    for k, state in enumerate(states):
        print(f"stage {k} [{names[k]}]: {format_labstate(state, args.float)}")
    for name, p in sc.probabilities(states[-1]).items():
        print(f"P({name}) = {_fmt_prob(p, args.float)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    groups = list(GROUPS) if args.name == "all" else [args.name]
    first_fail = None
    for g in groups:
        for check in run_group(g):
            mark = "PASS" if check.passed else "FAIL"
            line = f"{mark} [{g}] {check.name}"
            if check.detail:
                line += f": {check.detail}"
            print(line)
            if not check.passed and first_fail is None:
                first_fail = f"[{g}] {check.name}"
    if first_fail is not None:
        print(f"verification failed: {first_fail}", file=sys.stderr)
        return EXIT_FAIL
    print("all checks passed")
    return EXIT_OK


def cmd_table(args) -> int:
    unknown = [n for n in args.ops if n not in bits.NAMED_OPS]
    if unknown:
        raise LabstateError(f"unknown operator(s) {', '.join(unknown)}")
    ops = [bits.NAMED_OPS[n] for n in args.ops] if args.ops else bits.BASIC_OPS
    print(bits.format_table(ops))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="labstate", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evolve a scenario and print outcome probabilities")
    run.add_argument("scenario", help=f"scenario file, or one of {', '.join(BUILTIN_SCENARIOS)}")
    run.add_argument("--stage", type=int, default=None, help="stop after this many stages")
    run.add_argument("--float", action="store_true", help="decimal output (12 significant digits)")
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", help="check the built-in experiments against published values")
    ver.add_argument("name", choices=[*GROUPS, "all"])
    ver.set_defaults(func=cmd_verify)

    tab = sub.add_parser("table", help="print a bit-operator product table")
    tab.add_argument("ops", nargs="*", metavar="OP",
                     help=f"operators to tabulate, from {' '.join(bits.NAMED_OPS)} (default: P0 P1 A Abar)")
    tab.set_defaults(func=cmd_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    try:
        return args.func(args)
    except (LabstateError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
