"""Command-line front end.

    termcert check FILE.trs CERT.xml     exit 0 accepted, 1 rejected, 2 bad input
    termcert dp FILE.trs                 print the marked dependency pairs
    termcert graph FILE.trs --approx A   print the graph and its SCCs
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import dp as dpmod
from .checker import CheckError, Full, check, step_dp_trans
from .graph import build_graph, sccs
from .parsing import ParseError, format_rule, parse_certificate, parse_trs
from .terms import Rule
from .unify import hde_edge, unif_approx

EXIT_ACCEPTED, EXIT_REJECTED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"{path}: {e}") from None


def _load_trs(path: str):
    try:
        return parse_trs(_read(path))
    except ParseError as e:
        raise InputError(f"{path}: {e}") from None


def _marked_pairs(trs, names):
    """Marked pairs, each with the variable names of the rule it came from."""
    dpmod.check_dp_preconditions(trs)
    out = []
    for i, p in dpmod.mkdp_with_origin(trs):
        marked = Rule(dpmod.mark_root(p.lhs), dpmod.mark_root(p.rhs))
        out.append((marked, names.var_names(i)))
    return out


def cmd_check(args) -> int:
    sig, trs, names = _load_trs(args.trs)
    try:
        proof = parse_certificate(_read(args.cert), sig, names)
    except ParseError as e:
        raise InputError(f"{args.cert}: {e}") from None
    verdict = check(Full(trs), proof)
    if args.json:
        report = {"verdict": "accepted" if verdict.ok else "rejected"}
        if not verdict.ok:
            report.update(path=list(verdict.path), error=verdict.error, reason=verdict.reason)
        print(json.dumps(report, indent=2))
    else:
        print("Accepted" if verdict.ok else "Rejected")
        if not verdict.ok:
            print(f"{verdict.where}: {verdict.reason}", file=sys.stderr)
    return EXIT_ACCEPTED if verdict.ok else EXIT_REJECTED


def cmd_dp(args) -> int:
    sig, trs, names = _load_trs(args.trs)
    try:
        pairs = _marked_pairs(trs, names)
    except dpmod.DpError as e:
        raise InputError(str(e)) from None
    if args.json:
        print(json.dumps({"pairs": [format_rule(p, vn) for p, vn in pairs]}, indent=2))
    else:
        for p, vn in pairs:
            print(format_rule(p, vn))
    return 0


def cmd_graph(args) -> int:
    sig, trs, names = _load_trs(args.trs)
    try:
        pairs = _marked_pairs(trs, names)
        problem = step_dp_trans(Full(trs))
    except (dpmod.DpError, CheckError) as e:
        raise InputError(str(e)) from None
    approx = hde_edge if args.approx == "hde" else unif_approx(problem.modulo)
    g = build_graph(approx, problem.top)
    comps = sccs(g)
    labels = [format_rule(p, vn) for p, vn in pairs]
    if args.json:
        print(json.dumps({
            "approx": args.approx,
            "nodes": labels,
            "adjacency": [[int(e) for e in row] for row in g.adjacency],
            "sccs": comps,
        }, indent=2))
        return 0
    print(f"nodes ({args.approx}):")
    for i, lab in enumerate(labels):
        print(f"  {i}: {lab}")
    print("adjacency:")
    for i, row in enumerate(g.adjacency):
        print(f"  {i}: " + " ".join("1" if e else "0" for e in row))
    print("sccs (reverse topological):")
    for c in comps:
        cyclic = len(c) > 1 or g.adjacency[c[0]][c[0]]
        print(f"  {{{', '.join(map(str, c))}}}" + ("" if cyclic else "  acyclic"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    parser = argparse.ArgumentParser(prog="termcert", description=__doc__.splitlines()[0] if __doc__ else None,
                                     parents=[common])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="verify a termination certificate")
    p.add_argument("trs")
    p.add_argument("cert")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dp", parents=[common], help="print the marked dependency pairs")
    p.add_argument("trs")
    p.set_defaults(func=cmd_dp)

    p = sub.add_parser("graph", parents=[common], help="print the dependency graph and SCCs")
    p.add_argument("trs")
    p.add_argument("--approx", choices=("hde", "unif"), default="hde")
    p.set_defaults(func=cmd_graph)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else 0
    args.json = getattr(args, "json", False)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as e:
        if args.json:
            print(json.dumps({"verdict": "error", "reason": str(e)}, indent=2))
        print(f"termcert: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
