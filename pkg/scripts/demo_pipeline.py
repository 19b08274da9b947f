#!/usr/bin/env python3
"""Walk one instance through the full pipeline and print what each stage did.

Usage: python3 scripts/demo_pipeline.py [seed]
"""

import sys
from collections import Counter

from ecaug.graph import INF
from ecaug.io import generate_random, serialize_instance
from ecaug.kernel import kernelize_by_one
from ecaug.oracle import brute_force_solve
from ecaug.solver import solve, solve_kernel, verify_solution


def main() -> int:
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    inst = generate_random("tree", 14, 3, 2, seed, link_fraction=0.35)
    print("=== input instance ===")
    sys.stdout.write(serialize_instance(inst))

    kern = kernelize_by_one(inst)
    print("\n=== kernel ===")
    print(f"infeasible: {kern.infeasible}")
    print(f"nodes: {inst.graph.n} -> {kern.instance.graph.n}")
    finite = sum(1 for l in kern.instance.links if l.cost != INF)
    print(f"links: {len(inst.links)} -> {finite}")
    print(f"trace steps: {len(kern.trace.steps)}")

    sol = solve(inst)
    print("\n=== solution ===")
    if not sol.is_optimal:
        print("infeasible")
        return 2
    print(f"cost: {sol.total_cost}  weight: {sol.total_weight}/{inst.p}")
    for lid, mult in sol.chosen:
        l = inst.links[lid]
        print(f"  link ({l.u}, {l.v}) weight {l.weight} cost {l.cost} x{mult}")
    report = verify_solution(inst, sol)
    print(f"verified: {report.valid}")

    if len(inst.links) <= 18:
        ref = brute_force_solve(inst, mode="multiset")
        print(f"oracle agrees: {ref.total_cost == sol.total_cost}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
