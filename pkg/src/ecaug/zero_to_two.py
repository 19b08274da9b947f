"""Augmentation from 0 to 2: 2-edge-connecting a disconnected forest.

Three layers: forest bookkeeping (component structure, link classification,
cheapest-entry nodes S_t(u, V_j)), a metric completion with generalized
shadows, and a branching solver that repeatedly picks a leaf and tries every
link from it into a corner node or an S-node.  Parallel copies of a link are
allowed; a wrapper recovers the no-duplicate optimum by branching over seed
links and repairing duplicates afterwards.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .graph import (
    INF,
    Cost,
    Instance,
    Link,
    MultiGraph,
    PreconditionError,
    contract_partition,
    inseparable_partition,
    is_k_edge_connected,
)
from .trace import LinkRestricted, ReductionTrace, ShadowFix, TriangleFix
from .solver import INFEASIBLE, Solution, solution_from_counter

Slot = tuple[int, int, int]


@dataclass(frozen=True)
class ForestView:
    """Component structure of a forest instance plus link classification and
    the cheapest-entry table S_t(u, V_j) for every leaf u."""

    comp_of: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]
    leaves: frozenset[int]
    classification: tuple[str, ...]  # per link id: internal | foliate | external
    s_table: dict  # (leaf u, component j, t) -> entry node, present iff any

    def s_nodes(self, u: int, max_t: int) -> frozenset[int]:
        out = set()
        for (uu, j, t), z in self.s_table.items():
            if uu == u and t <= max_t:
                out.add(z)
        return frozenset(out)


def _forest_components(g: MultiGraph) -> tuple[tuple[int, ...], ...]:
    comps = sorted(g.components(), key=min)
    return tuple(tuple(sorted(c)) for c in comps)


def _classify(link: Link, comp_of, leaves) -> str:
    if comp_of[link.u] == comp_of[link.v]:
        return "internal"
    if link.u in leaves or link.v in leaves:
        return "foliate"
    return "external"


def prepare_forest(inst: Instance) -> ForestView:
    g = inst.graph
    if len(g.edges) != sum(len(c) for c in g.components()) - len(g.components()):
        raise PreconditionError("graph must be a forest; contract cycles first")
    components = _forest_components(g)
    comp_of = [0] * g.n
    for j, comp in enumerate(components):
        for v in comp:
            comp_of[v] = j
    # every node of degree <= 1 counts as a leaf, isolated nodes included
    leaves = frozenset(v for v in range(g.n) if g.degree(v) <= 1)
    classification = tuple(_classify(l, comp_of, leaves) for l in inst.links)
    s_table = {}
    for u in sorted(leaves):
        for j in range(len(components)):
            if j == comp_of[u]:
                continue
            for t in range(1, inst.p + 1):
                best: Optional[tuple[Cost, int]] = None
                for l in inst.links:
                    if l.cost == INF or l.weight > t or u not in (l.u, l.v):
                        continue
                    z = l.other(u)
                    if comp_of[z] != j:
                        continue
                    if best is None or l.cost < best[0] or (
                        l.cost == best[0] and z < best[1]
                    ):
                        best = (l.cost, z)
                if best is not None:
                    s_table[(u, j, t)] = best[1]
    return ForestView(tuple(comp_of), components, leaves, classification, s_table)


def _component_paths(g: MultiGraph) -> dict[tuple[int, int], frozenset]:
    """Edge sets of tree paths between same-component node pairs."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for eid, (u, v) in enumerate(g.edges):
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    paths = {}
    for s in range(g.n):
        seen = {s: frozenset()}
        queue = [s]
        while queue:
            x = queue.pop(0)
            for y, eid in adj[x]:
                if y not in seen:
                    seen[y] = seen[x] | {eid}
                    queue.append(y)
        for t, es in seen.items():
            if s < t:
                paths[(s, t)] = es
    return paths


class _GeneralCompletion:
    def __init__(self, inst: Instance, view: ForestView):
        self.g = inst.graph
        self.p = inst.p
        self.view = view
        self.paths = _component_paths(inst.graph)
        self.cost: dict[Slot, Cost] = {}
        self.lid: dict[Slot, Optional[int]] = {}
        self.links: list[Link] = list(inst.links)
        n = inst.graph.n
        for u in range(n):
            for v in range(u + 1, n):
                for t in range(1, inst.p + 1):
                    self.cost[(u, v, t)] = inst.slot_cost(u, v, t)
                    found = inst.find(u, v, t)
                    self.lid[(u, v, t)] = found.id if found else None
        self.slots = sorted(self.cost)
        # mutable S-table: (u, j, t) -> (entry node, cost of that entry)
        self.s: dict[tuple[int, int, int], tuple[int, Cost]] = {}
        for (u, j, t), z in view.s_table.items():
            self.s[(u, j, t)] = (z, self._cheapest_to(u, z, t))
        self.steps: list = []

    def _cheapest_to(self, u: int, z: int, t: int) -> Cost:
        best = INF
        for w in range(1, t + 1):
            c = self.cost[(min(u, z), max(u, z), w)]
            if c < best:
                best = c
        return best

    def _touch(self, slot: Slot):
        """Cost of `slot` dropped; refresh affected S entries if needed."""
        u0, v0, t0 = slot
        c = self.cost[slot]
        for u, z in ((u0, v0), (v0, u0)):
            if u not in self.view.leaves:
                continue
            j = self.view.comp_of[z]
            if j == self.view.comp_of[u]:
                continue
            for t in range(t0, self.p + 1):
                cur = self.s.get((u, j, t))
                if cur is None or c < cur[1]:
                    self.s[(u, j, t)] = (z, c)

    def _low(self, x: int, y: int, w: int) -> Cost:
        return self.cost[(min(x, y), max(x, y), w)]

    def _shadow_sources(self, f: Slot):
        """Slots e such that f is a shadow of e, under current costs/S."""
        u, v, t = f
        comp_of = self.view.comp_of
        out = []
        if comp_of[u] == comp_of[v]:
            pf = self.paths[(u, v)]
            for e in self.slots:
                a, b, w = e
                if w > t or comp_of[a] != comp_of[u] or comp_of[b] != comp_of[u]:
                    continue
                if e != f and pf <= self.paths[(min(a, b), max(a, b))]:
                    out.append(e)
            return out
        for leaf, y in ((u, v), (v, u)):
            if leaf not in self.view.leaves:
                continue
            j = comp_of[y]
            sf = self.s.get((leaf, j, t))
            if sf is None:
                continue
            pf = self.paths[(min(y, sf[0]), max(y, sf[0]))] if y != sf[0] else frozenset()
            for e in self.slots:
                a, b, w = e
                if w > t or e == f:
                    continue
                if leaf not in (a, b):
                    continue
                x = b if a == leaf else a
                if comp_of[x] != j:
                    continue
                se = self.s.get((leaf, j, w))
                if se is None:
                    continue
                pe = self.paths[(min(x, se[0]), max(x, se[0]))] if x != se[0] else frozenset()
                if pf <= pe:
                    out.append(e)
        return out

    def _require_id(self, s: Slot) -> int:
        if self.lid[s] is None:
            u, v, t = s
            link = Link(u, v, t, self.cost[s], id=len(self.links))
            self.links.append(link)
            self.lid[s] = link.id
        return self.lid[s]

    def _alternative_for(self, f: Slot) -> Optional[int]:
        """Cheapest entry link h = (u, S_t(u, V_j)) for a foliate fix."""
        u, v, t = f
        comp_of = self.view.comp_of
        for leaf, y in ((u, v), (v, u)):
            if leaf not in self.view.leaves or comp_of[leaf] == comp_of[y]:
                continue
            cur = self.s.get((leaf, comp_of[y], t))
            if cur is None:
                continue
            z, _ = cur
            best = None
            for w in range(1, t + 1):
                s2 = (min(leaf, z), max(leaf, z), w)
                if self.cost[s2] != INF and (
                    best is None or self.cost[s2] < self.cost[best]
                ):
                    best = s2
            if best is not None:
                return self._require_id(best)
        return None

    def run(self):
        n = self.g.n
        for t in range(1, self.p + 1):
            rank = [s for s in self.slots if s[2] == t]
            while True:
                changed = False
                for (u, z, _) in rank:
                    h = (u, z, t)
                    best = self.cost[h]
                    best_pair = None
                    for v in range(n):
                        if v == u or v == z:
                            continue
                        for w1 in range(1, t):
                            ce = self._low(u, v, w1)
                            if ce == INF:
                                continue
                            for w2 in range(1, t - w1 + 1):
                                cf = self._low(v, z, w2)
                                if cf == INF:
                                    continue
                                cand = ce + cf
                                e = (min(u, v), max(u, v), w1)
                                f = (min(v, z), max(v, z), w2)
                                if cand < best:
                                    best, best_pair = cand, (e, f)
                                elif cand == best and best_pair is not None:
                                    key = (self.lid[e], self.lid[f])
                                    old = (self.lid[best_pair[0]], self.lid[best_pair[1]])
                                    if key < old:
                                        best_pair = (e, f)
                    if best_pair is not None:
                        e, f = best_pair
                        self.cost[h] = best
                        self.steps.append(
                            TriangleFix(self._require_id(h), self.lid[e], self.lid[f])
                        )
                        self._touch(h)
                        changed = True
                if not changed:
                    break
            for (u, v, _) in rank:
                f = (u, v, t)
                best = self.cost[f]
                best_e = None
                for e in self._shadow_sources(f):
                    ce = self.cost[e]
                    if ce == INF:
                        continue
                    if ce < best or (ce == best and best_e is not None
                                     and self.lid[e] < self.lid[best_e]):
                        best, best_e = ce, e
                if best_e is not None:
                    alt = None
                    if self.view.comp_of[u] != self.view.comp_of[v]:
                        alt = self._alternative_for(f)
                    self.cost[f] = best
                    self.steps.append(
                        ShadowFix(self._require_id(f), self.lid[best_e], alt)
                    )
                    self._touch(f)

    def result(self, inst: Instance):
        new_links = tuple(
            Link(l.u, l.v, l.weight, self.cost[(l.u, l.v, l.weight)], l.id)
            for l in self.links
        )
        out = Instance(inst.graph, new_links, inst.k, inst.p)
        view = ForestView(
            self.view.comp_of,
            self.view.components,
            self.view.leaves,
            tuple(_classify(l, self.view.comp_of, self.view.leaves) for l in new_links),
            {key: zc[0] for key, zc in self.s.items()},
        )
        return out, ReductionTrace(tuple(self.steps)), view


def metric_completion_general(inst: Instance, view: ForestView):
    comp = _GeneralCompletion(inst, view)
    comp.run()
    return comp.result(inst)


def _is_2ec(g: MultiGraph, inst: Instance, chosen: Counter) -> bool:
    extra = []
    for lid, mult in chosen.items():
        extra.extend([inst.links[lid].pair] * mult)
    return is_k_edge_connected(g.with_extra_edges(extra), 2)


def lift_general(chosen: Counter, trace: ReductionTrace, inst: Instance) -> Counter:
    """Reverse replay with the foliate two-candidate exchange: a shadow fix
    of an external link replaces it by the source, falling back to the
    recorded cheapest-entry link when the source breaks 2-edge-connectivity."""
    chosen = Counter(chosen)
    for step in reversed(trace.steps):
        if isinstance(step, ShadowFix) and step.alternative is not None:
            while chosen.get(step.target, 0) > 0:
                chosen[step.target] -= 1
                if not chosen[step.target]:
                    del chosen[step.target]
                chosen[step.source] += 1
                if not _is_2ec(inst.graph, inst, chosen):
                    chosen[step.source] -= 1
                    if not chosen[step.source]:
                        del chosen[step.source]
                    chosen[step.alternative] += 1
        else:
            chosen = step.lift(chosen)
    return chosen


def _search(graph: MultiGraph, links: tuple[Link, ...], budget: int,
            ceiling: Optional[Cost]) -> Optional[tuple[Cost, Counter]]:
    """Best multiset of `links` (by current costs) 2-edge-connecting `graph`
    within `budget`, or None.  Returns (cost, multiset over `links` ids)."""
    kept, dropped = [], []
    for l in links:
        if l.cost != INF and l.weight <= max(budget, 1):
            kept.append(l)
        else:
            dropped.append(l.id)
    step_drop = LinkRestricted(tuple(dropped),
                               tuple((i, l.id) for i, l in enumerate(kept)))
    renumbered = tuple(Link(l.u, l.v, l.weight, l.cost, i) for i, l in enumerate(kept))
    inst0 = Instance(graph, renumbered, 2, max(budget, 1))
    part = inseparable_partition(inst0)
    inst1, step_c = contract_partition(inst0, part)
    if inst1.graph.n == 1:
        return Fraction(0), Counter()
    g1 = inst1.graph
    r = len(g1.components())
    deficiency = sum(max(0, 2 - g1.degree(v)) for v in range(g1.n))
    if deficiency > 2 * budget or (r >= 2 and budget < r) or budget <= 0:
        return None
    view = prepare_forest(inst1)
    inst2, trace_m, view = metric_completion_general(inst1, view)
    leaves = sorted(v for v in range(g1.n) if g1.degree(v) <= 1)
    u = leaves[0]
    corners = {v for v in range(g1.n) if g1.degree(v) != 2}
    targets = sorted((corners | view.s_nodes(u, budget)) - {u})
    candidates = [
        l for l in inst2.links
        if l.cost != INF and l.weight <= budget and u in (l.u, l.v)
        and l.other(u) in targets
    ]
    candidates.sort(key=lambda l: (l.cost, l.id))
    best: Optional[tuple[Cost, tuple, Counter]] = None
    for f in candidates:
        if ceiling is not None and f.cost > ceiling:
            continue
        sub_ceiling = None if ceiling is None else ceiling - f.cost
        if best is not None:
            room = best[0] - f.cost
            sub_ceiling = room if sub_ceiling is None else min(sub_ceiling, room)
        sub = _search(g1.with_extra_edges([f.pair]), inst2.links,
                      budget - f.weight, sub_ceiling)
        if sub is None:
            continue
        _, sub_chosen = sub
        total = Counter(sub_chosen)
        total[f.id] += 1
        lifted = lift_general(total, trace_m, inst2)
        lifted = step_c.lift(lifted)
        lifted = step_drop.lift(lifted)
        cost = sum((links[lid].cost * m for lid, m in lifted.items()), Fraction(0))
        ids = tuple(sorted(lifted.elements()))
        if best is None or cost < best[0] or (cost == best[0] and ids < best[1]):
            best = (cost, ids, lifted)
    if best is None:
        return None
    return best[0], best[2]


def branch_solve(inst: Instance) -> Solution:
    """Exact multiset-mode optimum for 2-edge-connecting a (possibly
    disconnected) graph under the weight budget."""
    if inst.k != 2:
        raise PreconditionError("branching solver is for target connectivity 2")
    res = _search(inst.graph, inst.links, inst.p, None)
    if res is None:
        return INFEASIBLE
    return solution_from_counter(inst, res[1])


def _dedupe(inst: Instance, chosen: Counter) -> Counter:
    """Remove duplicated links per the replacement rules: same-component
    duplicates are dropped; cross-component ones are dropped when a third
    connector exists, else swapped for an alternative cheapest t-link."""
    comp_of = {}
    for j, comp in enumerate(sorted(inst.graph.components(), key=min)):
        for v in comp:
            comp_of[v] = j
    chosen = Counter(chosen)
    while True:
        dup = next((lid for lid in sorted(chosen) if chosen[lid] >= 2), None)
        if dup is None:
            return chosen
        link = inst.links[dup]
        ci, cj = comp_of[link.u], comp_of[link.v]
        if ci == cj:
            chosen[dup] -= 1
            continue
        between = sum(
            m for lid, m in chosen.items()
            if {comp_of[inst.links[lid].u], comp_of[inst.links[lid].v]} == {ci, cj}
        )
        if between >= 3:
            chosen[dup] -= 1
            continue
        alt = None
        for l in inst.links:
            if l.id == dup or l.weight != link.weight or l.cost == INF:
                continue
            if {comp_of[l.u], comp_of[l.v]} != {ci, cj}:
                continue
            if l.cost <= link.cost and (alt is None or (l.cost, l.id) < (alt.cost, alt.id)):
                alt = l
        if alt is None:
            raise PreconditionError("duplicate link without an alternative connector")
        chosen[dup] -= 1
        chosen[alt.id] += 1


def solve_no_duplicates(inst: Instance) -> Solution:
    """Exact optimum over solutions that never repeat a stored link.  Links
    sharing an endpoint pair but differing in weight remain allowed."""
    if inst.k != 2:
        raise PreconditionError("branching solver is for target connectivity 2")
    comps = sorted(inst.graph.components(), key=min)
    r = len(comps)
    if r > inst.p:
        return INFEASIBLE
    comp_of = {}
    for j, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = j
    seed: list[int] = []
    for i in range(r):
        for j in range(i + 1, r):
            for t in range(1, inst.p + 1):
                cands = [
                    l for l in inst.links
                    if l.weight == t and l.cost != INF
                    and {comp_of[l.u], comp_of[l.v]} == {i, j}
                ]
                if not cands:
                    continue
                low = min(l.cost for l in cands)
                winners = [l for l in cands if l.cost == low]
                if len(winners) == 1:
                    seed.append(winners[0].id)
    seed.sort()
    best: Optional[tuple[Cost, tuple, Counter]] = None

    def try_subset(sub: tuple[int, ...]):
        nonlocal best
        weight = sum(inst.links[lid].weight for lid in sub)
        if weight > inst.p:
            return
        banned = set(seed)  # seed links outside sub, plus sub itself, go to cost inf
        banned -= set(sub)
        banned |= set(sub)
        links2 = tuple(
            Link(l.u, l.v, l.weight, INF if l.id in banned else l.cost, l.id)
            for l in inst.links
        )
        g2 = inst.graph.with_extra_edges([inst.links[lid].pair for lid in sub])
        budget = inst.p - weight
        if is_k_edge_connected(g2, 2):
            res: Optional[tuple[Cost, Counter]] = (Fraction(0), Counter())
        else:
            res = _search(g2, links2, budget, None if best is None else best[0])
        if res is None:
            return
        chosen = Counter(res[1])
        for lid in sub:
            chosen[lid] += 1
        chosen = _dedupe(inst, chosen)
        cost = sum(
            (inst.links[lid].cost * m for lid, m in chosen.items()), Fraction(0)
        )
        ids = tuple(sorted(chosen.elements()))
        if best is None or cost < best[0] or (cost == best[0] and ids < best[1]):
            best = (cost, ids, chosen)

    def enum(i: int, acc: list[int], weight: int):
        if weight > inst.p:
            return
        if i == len(seed):
            try_subset(tuple(acc))
            return
        enum(i + 1, acc, weight)
        acc.append(seed[i])
        enum(i + 1, acc, weight + inst.links[seed[i]].weight)
        acc.pop()

    enum(0, [], 0)
    if best is None:
        return INFEASIBLE
    return solution_from_counter(inst, best[2])
