"""Command-line entry point.

Exit codes: 0 success, 1 check failed or step budget exhausted,
2 usage, parse or validation error.
"""
from __future__ import annotations

import argparse
import sys

from .degree import Degree
from .engine.machine import MachineOptions, candidate_moves, run
from .engine.syntax import parse_machine
from .errors import DomainError, ParseError
from .flts import (CandidateSimulation, check_strong_fuzzy_bisimulation,
                   check_strong_fuzzy_simulation, format_relation, greatest_bisimulation,
                   greatest_simulation, parse_flts, parse_relation)
from .pi.reduce import is_quiescent, pi_run
from .pi.syntax import parse as parse_pi, pretty

OK, FAILED, USAGE = 0, 1, 2


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _degree(text: str) -> Degree:
    try:
        return Degree(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _nonneg(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def cmd_run(args, out) -> int:
    mf = parse_machine(_read(args.file))
    mdef = mf.machine
    if args.strategy:
        mdef = type(mdef)(mdef.rules, MachineOptions(mdef.options.strict_context, args.strategy))
    trace, final = run(mdef, mf.init, args.max_steps, args.seed)
    if args.trace:
        for t in trace:
            print(t, file=out)
    print(final, file=out)
    if len(trace) == args.max_steps and candidate_moves(mdef, final):
        print(f"stopped after {args.max_steps} steps with moves pending", file=sys.stderr)
        return FAILED
    return OK


def _systems(args):
    a = parse_flts(_read(args.a))
    b = parse_flts(_read(args.b))
    return a, b


def cmd_check_sim(args, out) -> int:
    a, b = _systems(args)
    rel = parse_relation(_read(args.relation), a.states, b.states)
    cand = CandidateSimulation(rel, args.threshold)
    check = check_strong_fuzzy_bisimulation if args.bisim else check_strong_fuzzy_simulation
    report = check(a, b, cand)
    print(report, file=out)
    return OK if report.holds else FAILED


def cmd_greatest_sim(args, out) -> int:
    a, b = _systems(args)
    search = greatest_bisimulation if args.bisim else greatest_simulation
    out.write(format_relation(search(a, b, args.threshold)))
    return OK


def cmd_pi(args, out) -> int:
    p = parse_pi(_read(args.file))
    if args.action == "parse":
        print(pretty(p), file=out)
        return OK
    trace, final = pi_run(p, args.lam, args.max_steps, args.seed)
    if args.trace:
        for t in trace:
            print(t, file=out)
    print(final, file=out)
    if len(trace) == args.max_steps and not is_quiescent(final, args.lam):
        print(f"stopped after {args.max_steps} steps with moves pending", file=sys.stderr)
        return FAILED
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fucham", description="Fuzzy chemical abstract machine workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a machine file")
    r.add_argument("file")
    r.add_argument("--max-steps", type=_nonneg, default=1000)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--trace", action="store_true")
    r.add_argument("--strategy", choices=("max", "random"))
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("check-sim", help="check a candidate strong fuzzy (bi)simulation")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("relation")
    c.add_argument("--threshold", type=_degree, required=True)
    c.add_argument("--bisim", action="store_true")
    c.set_defaults(func=cmd_check_sim)

    g = sub.add_parser("greatest-sim", help="print the greatest strong fuzzy simulation")
    g.add_argument("a")
    g.add_argument("b")
    g.add_argument("--threshold", type=_degree, required=True)
    g.add_argument("--bisim", action="store_true")
    g.set_defaults(func=cmd_greatest_sim)

    p = sub.add_parser("pi", help="fuzzy pi-calculus programs")
    p.add_argument("action", choices=("run", "parse"))
    p.add_argument("file")
    p.add_argument("--lambda", dest="lam", type=_degree, default=Degree(0))
    p.add_argument("--max-steps", type=_nonneg, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_pi)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return args.func(args, out)
    except (ParseError, DomainError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
