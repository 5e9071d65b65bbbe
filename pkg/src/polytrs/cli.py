"""Command line front end.

`polytrs analyze FILE` parses a rewrite system, runs the default proof
search and prints a verdict line followed by an optional proof certificate:
WORST_CASE(?, O(n^d)) when a closed proof with a polynomial bound was found,
MAYBE otherwise.  Exit codes: 0 bounded, 1 MAYBE, 2 error.

`polytrs oracle FILE` brute-forces the runtime complexity function on small
start terms, as an independent cross-check of the prover's claims.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .depgraph import DepGraph, estimate_dg, to_dot
from .framework import cc_oracle
from .parsing import ParseError, parse_file
from .processors import StrategyConfig, default_strategy
from .proofs import is_closed, iter_nodes, proof_to_json, render_proof


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polytrs",
        description="polynomial runtime complexity bounds for term rewrite systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="prove a complexity bound")
    analyze.add_argument("file", help="rewrite system in parenthesized format")
    analyze.add_argument(
        "--degree-max", type=int, default=3, help="largest bound degree to try"
    )
    analyze.add_argument(
        "--coeff-max", type=int, default=3, help="largest interpretation coefficient"
    )
    analyze.add_argument(
        "--timeout", type=float, default=None, help="soft time limit in seconds"
    )
    analyze.add_argument(
        "--proof",
        choices=("text", "json", "none"),
        default="text",
        help="certificate format printed after the verdict",
    )
    analyze.add_argument(
        "--dot-dg",
        metavar="FILE",
        default=None,
        help="write the estimated dependency graph in DOT format",
    )

    oracle = sub.add_parser("oracle", help="brute-force small runtime values")
    oracle.add_argument("file", help="rewrite system in parenthesized format")
    oracle.add_argument(
        "--size", type=int, default=6, help="largest start term size to try"
    )
    oracle.add_argument(
        "--budget", type=int, default=50, help="exploration depth per start term"
    )
    return parser


def _verdict(degree: Optional[int]) -> str:
    if degree is None:
        return "MAYBE"
    if degree == 0:
        return "WORST_CASE(?, O(1))"
    return f"WORST_CASE(?, O(n^{degree}))"


def _dp_graph_of(tree) -> DepGraph:
    for node in iter_nodes(tree):
        if node.judgement.problem.is_dp_problem():
            return estimate_dg(node.judgement.problem)
    return DepGraph((), frozenset())


def _run_analyze(args: argparse.Namespace) -> int:
    problem = parse_file(args.file)
    config = StrategyConfig(
        degree_max=args.degree_max,
        coeff_max=args.coeff_max,
        timeout=args.timeout,
    )
    tree = default_strategy(problem, config)

    if args.dot_dg is not None:
        with open(args.dot_dg, "w", encoding="utf-8") as handle:
            handle.write(to_dot(_dp_graph_of(tree)))

    bound = tree.judgement.bound
    closed = is_closed(tree)
    print(_verdict(bound.degree if closed else None))
    if args.proof == "text":
        print(render_proof(tree))
    elif args.proof == "json":
        print(json.dumps(proof_to_json(tree), indent=2, sort_keys=True))
    return 0 if closed and not bound.is_unknown else 1


def _run_oracle(args: argparse.Namespace) -> int:
    problem = parse_file(args.file)
    print("n\tcc")
    for n in range(args.size + 1):
        print(f"{n}\t{cc_oracle(problem, n, args.budget)}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return _run_analyze(args)
        return _run_oracle(args)
    except (ParseError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
