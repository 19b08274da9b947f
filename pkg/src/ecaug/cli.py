"""Command line entry point.

Exit codes: 0 for an optimal answer, 2 for a proven-infeasible instance,
1 for any usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .graph import INF, Instance, PreconditionError, SizeError, edge_connectivity
from .io import (ParseError, generate_random, parse_instance, parse_solution,
                 serialize_instance, solution_to_dict)
from .kernel import kernelize_by_one, unweight_kernel
from .node_conn import solve_node_1_2
from .oracle import brute_force_solve
from .solver import Solution, solve, verify_solution
from .trace import trace_to_json
from .zero_to_two import branch_solve, solve_no_duplicates


def _read_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _emit_solution(inst: Instance, sol: Solution, fmt: str) -> int:
    if fmt == "json":
        print(json.dumps(solution_to_dict(inst, sol), sort_keys=True))
    else:
        if not sol.is_optimal:
            print("infeasible")
        else:
            print(f"optimal cost={sol.total_cost} weight={sol.total_weight}")
            for lid, mult in sol.chosen:
                l = inst.links[lid]
                for _ in range(mult):
                    print(f"l {l.u} {l.v} {l.weight} {l.cost}")
    return 0 if sol.is_optimal else 2


def _cmd_solve(args) -> int:
    inst = _read_instance(args.instance)
    return _emit_solution(inst, solve(inst), args.format)


def _cmd_kernelize(args) -> int:
    inst = _read_instance(args.instance)
    kern = kernelize_by_one(inst)
    if args.unweighted:
        kern = unweight_kernel(kern, inst.links)
    text = serialize_instance(kern.instance)
    if args.emit_trace:
        print(json.dumps({"infeasible": kern.infeasible,
                          "instance": text,
                          "trace": trace_to_json(kern.trace)}, sort_keys=True))
    else:
        sys.stdout.write(text)
    return 2 if kern.infeasible else 0


def _cmd_oracle(args) -> int:
    inst = _read_instance(args.instance)
    sol = brute_force_solve(inst,
                            mode="multiset" if args.multiset else "set",
                            target="node2" if args.node2 else "edge",
                            cap=args.max_enum)
    return _emit_solution(inst, sol, args.format)


def _cmd_zero2(args) -> int:
    inst = _read_instance(args.instance)
    sol = solve_no_duplicates(inst) if args.no_duplicates else branch_solve(inst)
    return _emit_solution(inst, sol, args.format)


def _cmd_node12(args) -> int:
    inst = _read_instance(args.instance)
    return _emit_solution(inst, solve_node_1_2(inst), args.format)


def _cmd_gen(args) -> int:
    inst = generate_random(args.kind, args.n, args.p, args.k, args.seed,
                           link_fraction=args.link_fraction)
    sys.stdout.write(serialize_instance(inst))
    return 0


def _cmd_verify(args) -> int:
    inst = _read_instance(args.instance)
    with open(args.solution, "r", encoding="utf-8") as fh:
        sol = parse_solution(inst, fh.read())
    report = verify_solution(inst, sol)
    out = {
        "valid": report.valid,
        "violated_cuts": [sorted(c) for c in report.violated_cuts],
        "weight_excess": report.weight_excess,
        "recomputed_cost": f"{Fraction(report.recomputed_cost).numerator}/"
                           f"{Fraction(report.recomputed_cost).denominator}",
        "recomputed_weight": report.recomputed_weight,
    }
    if args.format == "json":
        print(json.dumps(out, sort_keys=True))
    else:
        print("valid" if report.valid else "invalid")
        for cut in out["violated_cuts"]:
            print(f"violated cut: {cut}")
    return 0 if report.valid else 1


def _cmd_stats(args) -> int:
    inst = _read_instance(args.instance)
    finite = sum(1 for l in inst.links if l.cost != INF)
    out = {
        "n": inst.graph.n,
        "m": len(inst.graph.edges),
        "links": len(inst.links),
        "finite_links": finite,
        "k": inst.k,
        "p": inst.p,
        "components": len(inst.graph.components()),
        "edge_connectivity": edge_connectivity(inst.graph),
    }
    if args.format == "json":
        print(json.dumps(out, sort_keys=True))
    else:
        for key in sorted(out):
            print(f"{key}: {out[key]}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecaug",
        description="Exact edge-connectivity augmentation under a weight budget")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--max-enum", type=int, default=20_000_000,
                        help="leaf cap for the brute-force oracle")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance exactly")
    p_solve.add_argument("instance")
    p_solve.set_defaults(func=_cmd_solve)

    p_kern = sub.add_parser("kernelize", help="emit the reduced instance")
    p_kern.add_argument("instance")
    p_kern.add_argument("--unweighted", action="store_true")
    p_kern.add_argument("--emit-trace", action="store_true")
    p_kern.set_defaults(func=_cmd_kernelize)

    p_oracle = sub.add_parser("oracle", help="brute-force reference solver")
    p_oracle.add_argument("instance")
    p_oracle.add_argument("--multiset", action="store_true")
    p_oracle.add_argument("--node2", action="store_true")
    p_oracle.set_defaults(func=_cmd_oracle)

    p_zero = sub.add_parser("zero2", help="augment a forest to 2-edge-connected")
    p_zero.add_argument("instance")
    p_zero.add_argument("--no-duplicates", action="store_true")
    p_zero.set_defaults(func=_cmd_zero2)

    p_node = sub.add_parser("node12", help="augment to 2-node-connected")
    p_node.add_argument("instance")
    p_node.set_defaults(func=_cmd_node12)

    p_gen = sub.add_parser("gen", help="generate a random instance")
    p_gen.add_argument("--kind", required=True,
                       choices=("tree", "cactus", "forest", "general"))
    p_gen.add_argument("-n", type=int, required=True)
    p_gen.add_argument("-k", type=int, required=True)
    p_gen.add_argument("-p", type=int, required=True)
    p_gen.add_argument("--link-fraction", type=float, default=0.15)
    p_gen.set_defaults(func=_cmd_gen)

    p_verify = sub.add_parser("verify", help="check a solution file")
    p_verify.add_argument("instance")
    p_verify.add_argument("solution")
    p_verify.set_defaults(func=_cmd_verify)

    p_stats = sub.add_parser("stats", help="summarize an instance")
    p_stats.add_argument("instance")
    p_stats.set_defaults(func=_cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, PreconditionError, SizeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
