"""Reference brute-force solver.

Independent of every reduction: enumerates sub(multi)sets of the stored
finite-cost links within the weight budget and tests feasibility directly on
the augmented graph.  Deliberately slow and simple; used to validate the
pipeline on desk-scale instances.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Optional

from .graph import INF, Instance, MultiGraph, SizeError, is_k_edge_connected
from .solver import Solution, solution_from_counter

DEFAULT_CAP = 20_000_000


def is_2_node_connected(g: MultiGraph) -> bool:
    """Connected, no cut node, and no bridge.  Two nodes with parallel edges
    qualify; a single edge does not."""
    if g.n <= 1:
        return True
    if not g.is_connected():
        return False
    # DFS lowpoint pass over the multigraph; parallel edges kept distinct
    incident: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for eid, (u, v) in enumerate(g.edges):
        incident[u].append((v, eid))
        incident[v].append((u, eid))
    depth = [-1] * g.n
    low = [0] * g.n
    depth[0] = 0
    root_children = 0
    stack = [(0, -1, iter(incident[0]))]
    has_cut_node = False
    has_bridge = False
    while stack:
        v, parent_eid, it = stack[-1]
        advanced = False
        for w, eid in it:
            if eid == parent_eid:
                continue
            if depth[w] == -1:
                depth[w] = depth[v] + 1
                low[w] = depth[w]
                if v == 0:
                    root_children += 1
                stack.append((w, eid, iter(incident[w])))
                advanced = True
                break
            low[v] = min(low[v], depth[w])
        if advanced:
            continue
        stack.pop()
        if stack:
            pv = stack[-1][0]
            low[pv] = min(low[pv], low[v])
            if low[v] > depth[pv]:
                has_bridge = True
            if pv != 0 and low[v] >= depth[pv]:
                has_cut_node = True
    if root_children > 1:
        has_cut_node = True
    return not has_cut_node and not has_bridge


def _feasible(inst: Instance, chosen: Counter, target: str) -> bool:
    extra = []
    for lid, mult in chosen.items():
        link = inst.links[lid]
        extra.extend([link.pair] * mult)
    g = inst.graph.with_extra_edges(extra)
    if target == "node2":
        return is_2_node_connected(g)
    return is_k_edge_connected(g, inst.k)


def brute_force_solve(inst: Instance, mode: str = "set", target: str = "edge",
                      cap: int = DEFAULT_CAP) -> Solution:
    """Exact minimum over all sub(multi)sets of stored finite-cost links with
    total weight <= p.  mode: "set" | "multiset"; target: "edge" | "node2"."""
    if mode not in ("set", "multiset"):
        raise ValueError(f"unknown mode {mode!r}")
    if target not in ("edge", "node2"):
        raise ValueError(f"unknown target {target!r}")
    links = [l for l in inst.links if l.cost != INF and l.weight <= inst.p]
    best_cost: Optional[Fraction] = None
    best_ids: Optional[tuple[int, ...]] = None
    visited = 0
    chosen: Counter = Counter()
    need = 2 if target == "node2" else inst.k
    deg = [inst.graph.degree(v) for v in range(inst.graph.n)]

    def consider(cost):
        nonlocal best_cost, best_ids
        if _feasible(inst, chosen, target):
            ids = []
            for lid in sorted(chosen):
                ids.extend([lid] * chosen[lid])
            ids = tuple(ids)
            if best_cost is None or cost < best_cost or (
                cost == best_cost and ids < best_ids
            ):
                best_cost, best_ids = cost, ids

    def dfs(i: int, cost, budget: int):
        nonlocal visited
        if i == len(links):
            visited += 1
            if visited > cap:
                raise SizeError(f"oracle search exceeded {cap} candidates")
            # degree fast-fail: connectivity target needs min degree `need`
            if inst.graph.n > 1 and any(d < need for d in deg):
                return
            consider(cost)
            return
        link = links[i]
        max_mult = budget // link.weight if mode == "multiset" else min(
            1, budget // link.weight
        )
        added = 0
        for mult in range(1, max_mult + 1):
            new_cost = cost + link.cost * mult
            if best_cost is not None and new_cost > best_cost:
                break
            chosen[link.id] = mult
            deg[link.u] += 1
            deg[link.v] += 1
            added += 1
            dfs(i + 1, new_cost, budget - link.weight * mult)
        chosen.pop(link.id, None)
        deg[link.u] -= added
        deg[link.v] -= added
        dfs(i + 1, cost, budget)

    dfs(0, Fraction(0), inst.p)
    if best_cost is None:
        return Solution("infeasible")
    return solution_from_counter(inst, Counter(best_ids))
