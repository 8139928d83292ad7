"""Command-line front end.

Usage:
    qw1d canonicalize --in spec.json [--class auto] [--gauge gauge.json] [--state "1,0"]
    qw1d classify --in spec.json
    qw1d equiv --a a.json --b b.json [--oracle]
    qw1d simulate --in spec.json --state "a+bi,c+di" --steps T [--out dist.csv]
    qw1d commutant --in spec.json [--allow-degenerate]

``equiv`` exits 0 when the walks are equivalent, 1 when they are not and 2 on
any error; every other command exits 0 on success and 2 on error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .canonical import CLASSES, DEFAULT_WINDOW, canonical_to_dict, canonicalize, canonicalize_with_state, classify
from .equivalence import commutant, decide
from .errors import ParseError, QW1DError
from .evolve import distributions, write_distribution_csv
from .io import dumps, parse_spec_file, parse_state


def _state_for(args, parsed):
    if args.state is not None:
        return parse_state(args.state)
    return parsed.state


def cmd_canonicalize(args) -> int:
    parsed = parse_spec_file(args.input)
    state = _state_for(args, parsed)
    if state is None:
        form, gauge = canonicalize(parsed.spec, args.cls, args.window)
        out = canonical_to_dict(form)
    else:
        form, cstate, gauge = canonicalize_with_state(parsed.spec, state, args.cls, args.window)
        out = canonical_to_dict(form)
        out["state"] = cstate.to_dict()
    if args.gauge:
        Path(args.gauge).write_text(dumps(gauge.to_dict()) + "\n")
    print(dumps(out))
    return 0


def cmd_classify(args) -> int:
    print(classify(parse_spec_file(args.input).spec))
    return 0


def cmd_equiv(args) -> int:
    a = parse_spec_file(args.a).spec
    b = parse_spec_file(args.b).spec
    verdict = decide(a, b, oracle=args.oracle, N=args.window)
    print(dumps(verdict.to_dict()))
    return 0 if verdict.equivalent else 1


def cmd_simulate(args) -> int:
    parsed = parse_spec_file(args.input)
    state = _state_for(args, parsed)
    if state is None:
        raise ParseError("simulate needs an initial state (--state or \"state\" in the spec file)")
    dists = distributions(parsed.spec, state, args.steps)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_distribution_csv(dists, fh)
    else:
        write_distribution_csv(dists, sys.stdout)
    return 0


def cmd_commutant(args) -> int:
    spec = parse_spec_file(args.input).spec
    found = commutant(spec, args.window, allow_degenerate=args.allow_degenerate)
    print(dumps([w.to_dict() for w in found]))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qw1d", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("canonicalize", help="print the canonical form of a walk")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--class", dest="cls", default="auto", choices=("auto", *CLASSES))
    p.add_argument("--gauge", help="write the realizing gauge to this JSON file")
    p.add_argument("--state", help='initial state at site 0, e.g. "1,0" or "0.6,0.8i"')
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.set_defaults(func=cmd_canonicalize)

    p = sub.add_parser("classify", help="print the structural class tag")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("equiv", help="decide unitary equivalence of two walks")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--oracle", action="store_true", help="decide by gauge search")
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("simulate", help="write site distributions as CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--state")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("commutant", help="list the gauges fixing the walk")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.add_argument("--allow-degenerate", action="store_true")
    p.set_defaults(func=cmd_commutant)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (QW1DError, ValueError, OSError) as exc:
        print(f"qw1d {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
