"""Metric completion of link costs over a tree or cactus representation.

A link f is a shadow of e when w(f) >= w(e) and every minimum cut covered
by f is covered by e.  Completion runs p iterations; iteration t first fixes
violated rank-t triangle inequalities c(h) <= c(e) + c(f), then lowers every
t-link to the cheapest link it is a shadow of.  Fixes apply one at a time in
a fixed order, each recorded as a trace step so solutions of the completed
instance replay back to the original costs.
"""

from __future__ import annotations

from collections import Counter
from typing import Optional

from .cut_structure import CutRepresentation, Kind
from .graph import INF, Cost, CutFamily, Instance, Link, MultiGraph
from .trace import ReductionTrace, ShadowFix, TriangleFix

Slot = tuple[int, int, int]  # (u, v, weight) with u < v


def _tree_paths(h: MultiGraph, n_real: int) -> dict[tuple[int, int], frozenset[int]]:
    """Edge-id set of the unique tree path for every real node pair."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(h.n)]
    for eid, (u, v) in enumerate(h.edges):
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    paths: dict[tuple[int, int], frozenset[int]] = {}
    for s in range(n_real):
        # BFS from s, collecting the edge sets along the way
        seen: dict[int, frozenset[int]] = {s: frozenset()}
        queue = [s]
        while queue:
            x = queue.pop(0)
            for y, eid in adj[x]:
                if y not in seen:
                    seen[y] = seen[x] | {eid}
                    queue.append(y)
        for t in range(s + 1, n_real):
            paths[(s, t)] = seen[t]
    return paths


def _separator_pairs(h: MultiGraph, n_real: int) -> dict[int, set[tuple[int, int]]]:
    """For each real node b, the real pairs (u, v) that b separates: b is an
    endpoint, or u and v fall in different components of H - b."""
    out: dict[int, set[tuple[int, int]]] = {}
    for b in range(n_real):
        g = h.without_node(b)
        comp_of = {}
        for comp in g.components():
            for v in comp:
                comp_of[v] = comp
        pairs = set()
        for u in range(n_real):
            for v in range(u + 1, n_real):
                if b in (u, v) or comp_of[u] is not comp_of[v]:
                    pairs.add((u, v))
        out[b] = pairs
    return out


class ShadowOracle:
    """Weight-blind shadow test between real node pairs of a representation."""

    def __init__(self, rep: CutRepresentation):
        self.rep = rep
        if rep.kind is Kind.TREE:
            self._paths = _tree_paths(rep.h, rep.n_real)
        else:
            self._sep = _separator_pairs(rep.h, rep.n_real)

    def pair_shadow(self, f_pair: tuple[int, int], e_pair: tuple[int, int]) -> bool:
        if self.rep.kind is Kind.TREE:
            return self._paths[f_pair] <= self._paths[e_pair]
        x, y = f_pair
        return e_pair in self._sep[x] and e_pair in self._sep[y]


def shadow_of(f: Link, e: Link, rep: CutRepresentation) -> bool:
    if f.weight < e.weight:
        return False
    return ShadowOracle(rep).pair_shadow(f.pair, e.pair)


def covered_cuts(u: int, v: int, fam: CutFamily) -> frozenset[frozenset[int]]:
    """Minimum cuts separating u from v; explicit cross-check for shadow tests."""
    return frozenset(x for x in fam.cuts if (u in x) != (v in x))


def metric_completion(inst: Instance, rep: CutRepresentation) -> tuple[Instance, ReductionTrace]:
    if inst.graph != rep.h:
        raise ValueError("instance graph must be the representation graph")
    n, p = rep.n_real, inst.p
    oracle = ShadowOracle(rep)
    cost: dict[Slot, Cost] = {}
    lid: dict[Slot, Optional[int]] = {}
    links: list[Link] = list(inst.links)
    for u in range(n):
        for v in range(u + 1, n):
            for t in range(1, p + 1):
                cost[(u, v, t)] = inst.slot_cost(u, v, t)
                found = inst.find(u, v, t)
                lid[(u, v, t)] = found.id if found else None
    slots = sorted(cost)
    steps = []

    def require_id(s: Slot) -> int:
        if lid[s] is None:
            u, v, t = s
            link = Link(u, v, t, cost[s], id=len(links))
            links.append(link)
            lid[s] = link.id
        return lid[s]

    # pairs (e, f) of weight-bounded slots sharing the pivot, grouped by pivot
    for t in range(1, p + 1):
        rank = [s for s in slots if s[2] == t]
        while True:
            changed = False
            for (u, z, _) in rank:
                h = (u, z, t)
                best = cost[h]
                best_pair = None
                for v in range(n):
                    if v == u or v == z:
                        continue
                    for w1 in range(1, t):
                        e = (min(u, v), max(u, v), w1)
                        ce = cost[e]
                        if ce == INF:
                            continue
                        for w2 in range(1, t - w1 + 1):
                            f = (min(v, z), max(v, z), w2)
                            cf = cost[f]
                            if cf == INF:
                                continue
                            cand = ce + cf
                            if cand < best:
                                best, best_pair = cand, (e, f)
                            elif cand == best and best_pair is not None:
                                key = (lid[e], lid[f])
                                if key < (lid[best_pair[0]], lid[best_pair[1]]):
                                    best_pair = (e, f)
                if best_pair is not None:
                    e, f = best_pair
                    cost[h] = best
                    steps.append(TriangleFix(require_id(h), lid[e], lid[f]))
                    changed = True
            if not changed:
                break
        # one link at a time: each fix sees the costs left by the previous one
        for (u, v, _) in rank:
            f = (u, v, t)
            best = cost[f]
            best_e = None
            for e in slots:
                if e[2] > t or cost[e] == INF:
                    continue
                if not oracle.pair_shadow((u, v), (e[0], e[1])):
                    continue
                if cost[e] < best or (cost[e] == best and best_e is not None
                                      and lid[e] < lid[best_e]):
                    best, best_e = cost[e], e
            if best_e is not None:
                cost[f] = best
                steps.append(ShadowFix(require_id(f), lid[best_e]))

    new_links = tuple(
        Link(l.u, l.v, l.weight, cost[(l.u, l.v, l.weight)], l.id) for l in links
    )
    out = Instance(inst.graph, new_links, inst.k, inst.p)
    return out, ReductionTrace(tuple(steps))


def lift_metric_solution(chosen: Counter, trace: ReductionTrace) -> Counter:
    """Replay completion fixes in reverse on a multiset of link ids."""
    return trace.lift(chosen)


def violated_inequalities(inst: Instance, rep: CutRepresentation) -> list[str]:
    """Exhaustive metric-axiom check over all slots, implicit ones included."""
    n, p = rep.n_real, inst.p
    oracle = ShadowOracle(rep)
    cost = {
        (u, v, t): inst.slot_cost(u, v, t)
        for u in range(n) for v in range(u + 1, n) for t in range(1, p + 1)
    }
    bad = []
    slots = sorted(cost)
    for f in slots:
        for e in slots:
            if f[2] < e[2] or cost[e] == INF:
                continue
            if oracle.pair_shadow((f[0], f[1]), (e[0], e[1])):
                if cost[f] > cost[e]:
                    bad.append(f"shadow: c{f} > c{e}")
    for h in slots:
        u, z, t = h
        for v in range(n):
            if v == u or v == z:
                continue
            for w1 in range(1, t):
                for w2 in range(1, t - w1 + 1):
                    e = (min(u, v), max(u, v), w1)
                    f = (min(v, z), max(v, z), w2)
                    if cost[e] == INF or cost[f] == INF:
                        continue
                    if cost[h] > cost[e] + cost[f]:
                        bad.append(f"triangle: c{h} > c{e} + c{f}")
    return bad
