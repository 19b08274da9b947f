"""Acceptance gate: eight exact criteria, one printed verdict line each.

Each test prints "[criterion N] PASS ..." or "[criterion N] FAIL ..." before
asserting, so a plain pytest -s run doubles as a report.  Criterion 6 also
checks a published claim about the cut-node splitting reduction that is false
in general (see the pinned counterexample in test_node_conn.py); it is kept
here unmodified so the failure is visible rather than papered over.
"""

import json
import subprocess
import sys
import time
from collections import Counter
from fractions import Fraction

import pytest

from ecaug.cut_structure import (Kind, build_representation,
                                 project_cut_family)
from ecaug.graph import (INF, Instance, Link, MultiGraph, contract_partition,
                         edge_connectivity, enumerate_min_cuts,
                         inseparable_partition, is_k_edge_connected)
from ecaug.io import generate_random, serialize_instance
from ecaug.kernel import corner_nodes, kernelize_by_one, unweight_kernel
from ecaug.metric import metric_completion, violated_inequalities
from ecaug.node_conn import solve_node_1_2, split_cut_nodes
from ecaug.oracle import brute_force_solve, is_2_node_connected
from ecaug.rng import SplitMix64
from ecaug.solver import solve, solve_kernel, verify_solution
from ecaug.zero_to_two import (branch_solve, metric_completion_general,
                               prepare_forest, solve_no_duplicates)


def verdict(num: int, ok: bool, detail: str):
    print(f"[criterion {num}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def random_links(rng, n, p, millionths=340_000, max_num=10, max_den=10):
    links = []
    for u in range(n):
        for v in range(u + 1, n):
            for t in range(1, p + 1):
                if rng.chance(millionths):
                    c = Fraction(rng.below(max_num + 1), rng.below(max_den) + 1)
                    links.append(Link(u, v, t, c, len(links)))
    return tuple(links)


def random_k_instance(seed, n, p, k):
    rng = SplitMix64(seed)
    for _ in range(300):
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                mult = rng.below(3) if k > 2 else (1 if rng.chance(400_000) else 0)
                edges += [(u, v)] * mult
        g = MultiGraph.from_edges(n, edges)
        if edge_connectivity(g) == k - 1:
            return Instance(g, random_links(rng, n, p), k, p)
    return None


def random_forest_instance(seed, n, p):
    rng = SplitMix64(seed)
    parts = 1 + rng.below(min(3, n))
    nodes_by_part = [[j] for j in range(parts)]
    edges = []
    for v in range(parts, n):
        j = rng.below(parts)
        edges.append((nodes_by_part[j][rng.below(len(nodes_by_part[j]))], v))
        nodes_by_part[j].append(v)
    return Instance(MultiGraph.from_edges(n, edges),
                    random_links(rng, n, p), 2, p)


def test_criterion_1_oracle_equivalence_by_one():
    start = time.monotonic()
    checked = 0
    mismatches = []
    seed = 0
    while checked < 200:
        seed += 1
        k = (2, 3, 4, 5)[seed % 4]
        n = 3 + seed % 5          # up to 7 < 8
        p = 1 + seed % 4
        inst = random_k_instance(seed, n, p, k)
        if inst is None:
            continue
        got = solve(inst)
        want = brute_force_solve(inst, mode="multiset")
        if got.is_optimal != want.is_optimal or (
            got.is_optimal and got.total_cost != want.total_cost
        ):
            mismatches.append(seed)
        elif got.is_optimal and not verify_solution(inst, got).valid:
            mismatches.append(seed)
        checked += 1
    elapsed = time.monotonic() - start
    verdict(1, not mismatches and elapsed < 60,
            f"{checked} instances, {len(mismatches)} mismatches, {elapsed:.1f}s")


def test_criterion_2_kernel_size_bounds():
    feasible = 0
    bad = []
    seed = 0
    while feasible < 100:
        seed += 1
        kind = "tree" if seed % 2 else "cactus"
        k = 2 if kind == "tree" else 3
        p = 1 + seed % 4
        inst = generate_random(kind, 4 + seed % 9, p, k, seed,
                               link_fraction=0.45)
        kern = kernelize_by_one(inst)
        if kern.infeasible or not solve_kernel(kern).is_optimal:
            continue
        feasible += 1
        r = kern.instance.graph.n
        node_cap = 4 * p - 2 if kind == "tree" else 10 * p - 8
        if r > max(2, node_cap):
            bad.append((seed, "nodes"))
        if len(kern.instance.links) > p * r * (r - 1) // 2:
            bad.append((seed, "links"))
        if all(l.weight == 1 for l in inst.links):
            unw = unweight_kernel(kern, inst.links)
            if len(unw.instance.links) > p * len(kern.instance.links):
                bad.append((seed, "unweighted"))
    verdict(2, not bad, f"{feasible} feasible instances, {len(bad)} violations")


def test_criterion_3_metric_axioms():
    start = time.monotonic()
    bad = []
    for seed in range(40):
        p = 1 + seed % 3
        inst = generate_random("tree" if seed % 2 else "cactus",
                               4 + seed % 5, p, 2 if seed % 2 else 3, seed,
                               link_fraction=0.4)
        rep = build_representation(inst)
        out, trace = metric_completion(inst, rep)
        if violated_inequalities(out, rep):
            bad.append((seed, "axiom"))
        for l in inst.links:
            if out.slot_cost(l.u, l.v, l.weight) > l.cost:
                bad.append((seed, "pointwise"))
        before = brute_force_solve(inst, mode="multiset")
        after = solve_kernel_like(out)
        if before.is_optimal != after.is_optimal or (
            before.is_optimal and before.total_cost != after.total_cost
        ):
            bad.append((seed, "optimum"))
    # general variant: completion must stay pointwise below the input costs
    for seed in range(20):
        inst = random_forest_instance(seed, 3 + seed % 5, 1 + seed % 3)
        view = prepare_forest(inst)
        out, trace, _ = metric_completion_general(inst, view)
        for l in inst.links:
            if out.slot_cost(l.u, l.v, l.weight) > l.cost:
                bad.append((seed, "general pointwise"))
        got = branch_solve(inst)
        want = brute_force_solve(inst, mode="multiset")
        if got.is_optimal != want.is_optimal or (
            got.is_optimal and got.total_cost != want.total_cost
        ):
            bad.append((seed, "general optimum"))
    elapsed = time.monotonic() - start
    verdict(3, not bad and elapsed < 30,
            f"60 completions, {len(bad)} violations, {elapsed:.1f}s")


def solve_kernel_like(inst):
    from ecaug.kernel import Kernel
    from ecaug.trace import ReductionTrace

    return solve_kernel(Kernel(inst, ReductionTrace(())))


def test_criterion_4_cut_structure_fidelity():
    checked = 0
    bad = []
    seed = 0
    while checked < 50:
        seed += 1
        k = (2, 3, 4, 5)[seed % 4]
        inst = random_k_instance(seed, 3 + seed % 8, 1, k)  # n up to 10
        if inst is None:
            continue
        part = inseparable_partition(inst)
        inst, _ = contract_partition(inst, part)
        if inst.graph.n < 2:
            continue
        rep = build_representation(inst)
        fam = project_cut_family(enumerate_min_cuts(rep.h), rep.n_real)
        if set(fam) != set(enumerate_min_cuts(inst.graph).cuts):
            bad.append((seed, "family"))
        if (rep.kind is Kind.TREE) != (k % 2 == 0):
            bad.append((seed, "parity"))
        checked += 1
    verdict(4, not bad, f"{checked} graphs, {len(bad)} mismatches")


def test_criterion_5_zero_to_two_solvers():
    start = time.monotonic()
    bad = []
    for seed in range(100):
        n = 2 + seed % 7          # up to 8
        p = 1 + seed % 5
        inst = random_forest_instance(seed, n, p)
        for mode, fn in (("multiset", branch_solve),
                         ("set", solve_no_duplicates)):
            got = fn(inst)
            want = brute_force_solve(inst, mode=mode)
            if got.is_optimal != want.is_optimal or (
                got.is_optimal and got.total_cost != want.total_cost
            ):
                bad.append((seed, mode))
                continue
            if mode == "set" and got.is_optimal:
                if any(m != 1 for _, m in got.chosen):
                    bad.append((seed, "duplicate"))
    elapsed = time.monotonic() - start
    verdict(5, not bad and elapsed < 120,
            f"100 forests x 2 modes, {len(bad)} mismatches, {elapsed:.1f}s")


def test_criterion_6_node_1_2():
    solver_bad = []
    for seed in range(100):
        rng = SplitMix64(seed + 9000)
        n = 3 + seed % 5          # up to 7
        p = 1 + seed % 4
        edges = [(rng.below(i), i) for i in range(1, n)]
        for _ in range(rng.below(3)):
            u, v = rng.below(n), rng.below(n)
            if u != v:
                edges.append((min(u, v), max(u, v)))
        inst = Instance(MultiGraph.from_edges(n, edges),
                        random_links(rng, n, p), 2, p)
        got = solve_node_1_2(inst)
        want = brute_force_solve(inst, target="node2")
        if got.is_optimal != want.is_optimal or (
            got.is_optimal and got.total_cost != want.total_cost
        ):
            solver_bad.append(seed)

    lemma_bad = []
    pairs = 0
    seed = 0
    while pairs < 500:
        seed += 1
        rng = SplitMix64(seed + 40_000)
        n = 3 + seed % 5
        edges = [(rng.below(i), i) for i in range(1, n)]
        inst = Instance(MultiGraph.from_edges(n, edges),
                        random_links(rng, n, 3, millionths=500_000), 2, 3)
        if not inst.links:
            continue
        split, _ = split_cut_nodes(inst)
        f_ids = [l.id for l in inst.links if rng.chance(500_000)]
        pairs += 1
        node_side = is_2_node_connected(
            inst.graph.with_extra_edges([inst.links[i].pair for i in f_ids]))
        edge_side = is_k_edge_connected(
            split.graph.with_extra_edges([split.links[i].pair for i in f_ids]), 2)
        if node_side != edge_side:
            lemma_bad.append(seed)
    verdict(6, not solver_bad and not lemma_bad,
            f"100 instances, {len(solver_bad)} solver mismatches; "
            f"500 pairs, {len(lemma_bad)} lemma violations")


def test_criterion_7_structural_propositions():
    bad = []
    for seed in range(1000):
        rng = SplitMix64(seed)
        n = 3 + rng.below(18)
        g = MultiGraph.from_edges(n, [(rng.below(i), i) for i in range(1, n)])
        leaves = sum(1 for v in range(n) if g.degree(v) <= 1)
        branching = sum(1 for v in range(n) if g.degree(v) >= 3)
        if branching > max(0, leaves - 2):
            bad.append((seed, "tree"))
    for seed in range(200):
        inst = generate_random("cactus", 3 + seed % 14, 1, 3, seed,
                               link_fraction=0.0)
        rep = build_representation(inst)
        corners = corner_nodes(rep)
        if len(corners.r2) > max(0, 4 * len(corners.r1) - 8):
            bad.append((seed, "cactus"))
    verdict(7, not bad, f"1000 trees + 200 cacti, {len(bad)} violations")


def _run(args):
    return subprocess.run([sys.executable, "-m", "ecaug.cli"] + args,
                          capture_output=True)


def test_criterion_8_determinism(tmp_path):
    inst = generate_random("tree", 7, 2, 2, seed=5, link_fraction=0.5)
    path = tmp_path / "d.aug"
    path.write_text(serialize_instance(inst))
    forest = generate_random("forest", 6, 2, 2, seed=5, link_fraction=0.5)
    fpath = tmp_path / "f.aug"
    fpath.write_text(serialize_instance(forest))
    sol = _run(["solve", str(path)])
    spath = tmp_path / "s.json"
    spath.write_bytes(sol.stdout)
    commands = [
        ["solve", str(path)],
        ["kernelize", "--emit-trace", str(path)],
        ["kernelize", "--unweighted", str(path)],
        ["oracle", str(path)],
        ["oracle", "--multiset", "--node2", str(path)],
        ["zero2", str(fpath)],
        ["zero2", "--no-duplicates", str(fpath)],
        ["node12", str(path)],
        ["--seed", "11", "gen", "--kind", "cactus", "-n", "8", "-k", "3",
         "-p", "2"],
        ["verify", str(path), str(spath)],
        ["stats", str(path)],
    ]
    diffs = [args[0] for args in commands
             if _run(args).stdout != _run(args).stdout]
    verdict(8, not diffs, f"{len(commands)} subcommands, differing: {diffs}")
