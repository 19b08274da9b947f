"""Kernel extraction for edge-connectivity augmentation by one.

Pipeline: contract inseparable classes, build the cut representation, take
the metric completion, short-circuit on too many fringe nodes, drop links
not joining corner nodes, and collapse corner-free paths (tree) or chains of
2-circuits (cactus).  The result has O(p) nodes and O(p^3) links, and its
optimum lifts back through the recorded trace.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .cut_structure import ConstructionError, CutRepresentation, Kind, build_representation
from .graph import (
    INF,
    Instance,
    Link,
    MultiGraph,
    contract_partition,
    inseparable_partition,
)
from .metric import metric_completion
from .trace import LinkRestricted, PathContracted, ReductionTrace, TraceError


@dataclass(frozen=True)
class CornerSets:
    """Tree: r1 = leaves, r2 = branch nodes, passthrough = degree-2 nodes.
    Cactus: r1 = nodes on one circuit, r2 = nodes on three or more circuits
    or on two circuits not both 2-circuits, passthrough = the rest (exactly
    two 2-circuits)."""

    r1: frozenset[int]
    r2: frozenset[int]
    passthrough: frozenset[int]

    @property
    def corners(self) -> frozenset[int]:
        return self.r1 | self.r2


@dataclass(frozen=True)
class Kernel:
    instance: Instance
    trace: ReductionTrace
    infeasible: bool = False
    # pipeline internals, kept for the unit-weight emulation step
    rep: Optional[CutRepresentation] = None
    pre_path_instance: Optional[Instance] = None
    chains: tuple = field(default_factory=tuple)


def _two_circuits(g: MultiGraph) -> list[tuple[int, int]]:
    """Node pairs joined by exactly two parallel edges forming a block."""
    count: Counter = Counter(g.edges)
    return sorted(pair for pair, c in count.items() if c == 2)


def _circuit_incidence(g: MultiGraph) -> tuple[list[list[int]], list[bool]]:
    """Per node, indices of incident circuits; per circuit, 2-circuit flag."""
    from .cut_structure import circuits_of_cactus

    circuits = circuits_of_cactus(g)
    incident: list[list[int]] = [[] for _ in range(g.n)]
    is_two = []
    for i, (nodes, eids) in enumerate(circuits):
        for v in nodes:
            incident[v].append(i)
        is_two.append(len(eids) == 2)
    return incident, is_two


def corner_nodes(rep: CutRepresentation) -> CornerSets:
    g = rep.h
    if g.n == 1:
        return CornerSets(frozenset([0]), frozenset(), frozenset())
    if rep.kind is Kind.TREE:
        leaves = frozenset(v for v in range(g.n) if g.degree(v) <= 1)
        branch = frozenset(v for v in range(g.n) if g.degree(v) >= 3)
        mid = frozenset(range(g.n)) - leaves - branch
        return CornerSets(leaves, branch, mid)
    incident, is_two = _circuit_incidence(g)
    r1, r2, mid = set(), set(), set()
    for v in range(g.n):
        cs = incident[v]
        if len(cs) == 1:
            r1.add(v)
        elif len(cs) == 2 and all(is_two[c] for c in cs):
            mid.add(v)
        else:
            r2.add(v)
    return CornerSets(frozenset(r1), frozenset(r2), frozenset(mid))


@dataclass(frozen=True)
class Chain:
    """Maximal corner-free stretch: degree-2 path (tree) or run of 2-circuits
    (cactus) between the two corner endpoints."""

    ends: tuple[int, int]
    interior: tuple[int, ...]


def _find_chains(g: MultiGraph, rep_kind: Kind, corners: frozenset[int]) -> list[Chain]:
    if rep_kind is Kind.TREE:
        adj: dict[int, list[int]] = {v: [] for v in range(g.n)}
        for u, v in g.edges:
            adj[u].append(v)
            adj[v].append(u)
        step = lambda prev, cur: [w for w in adj[cur] if w != prev]
    else:
        two = _two_circuits(g)
        adj = {v: [] for v in range(g.n)}
        for u, v in two:
            adj[u].append(v)
            adj[v].append(u)
        step = lambda prev, cur: [w for w in adj[cur] if w != prev]
    chains = []
    seen_interior = set()
    for c in sorted(corners):
        for first in sorted(adj[c]):
            if first in corners or first in seen_interior:
                continue
            interior = []
            prev, cur = c, first
            while cur not in corners:
                interior.append(cur)
                nxt = step(prev, cur)
                if len(nxt) != 1:
                    raise ConstructionError(f"node {cur} is not on a plain chain")
                prev, cur = cur, nxt[0]
            if cur == c:
                raise ConstructionError("chain closes on its own endpoint")
            seen_interior.update(interior)
            chains.append(Chain((c, cur), tuple(interior)))
    return chains


def _contract_chains(g: MultiGraph, rep_kind: Kind, chains: list[Chain],
                     protected: frozenset[int] = frozenset()):
    """Collapse each chain without protected interior nodes to a single edge
    (tree) or 2-circuit (cactus).  Returns (graph, node map old -> new|None)."""
    drop: set[int] = set()
    replaced_edges: set[int] = set()
    extra: list[tuple[int, int]] = []
    edge_ids = {}
    for eid, e in enumerate(g.edges):
        edge_ids.setdefault(e, []).append(eid)
    for ch in chains:
        if not ch.interior or any(v in protected for v in ch.interior):
            continue
        drop.update(ch.interior)
        walk = [ch.ends[0], *ch.interior, ch.ends[1]]
        for x, y in zip(walk, walk[1:]):
            pair = (min(x, y), max(x, y))
            mult = 1 if rep_kind is Kind.TREE else 2
            ids = edge_ids[pair]
            replaced_edges.update(ids[:mult])
        a, b = sorted(ch.ends)
        extra.append((a, b))
        if rep_kind is Kind.CACTUS:
            extra.append((a, b))
    node_map: list[Optional[int]] = []
    nxt = 0
    for v in range(g.n):
        if v in drop:
            node_map.append(None)
        else:
            node_map.append(nxt)
            nxt += 1
    edges = [
        (node_map[u], node_map[v])
        for eid, (u, v) in enumerate(g.edges)
        if eid not in replaced_edges
    ]
    edges += [(node_map[a], node_map[b]) for a, b in extra]
    return MultiGraph.from_edges(nxt, edges), tuple(node_map)


def _trivial_kernel(p: int, trace: ReductionTrace) -> Kernel:
    inst = Instance(MultiGraph(1, ()), (), 2, p)
    return Kernel(inst, trace)


_SENTINEL_GRAPH = MultiGraph(2, ((0, 1),))


def _infeasible_kernel(p: int, trace: ReductionTrace) -> Kernel:
    return Kernel(Instance(_SENTINEL_GRAPH, (), 2, p), trace, infeasible=True)


def kernelize_by_one(inst: Instance) -> Kernel:
    part = inseparable_partition(inst)
    inst1, step_c = contract_partition(inst, part)
    trace = ReductionTrace((step_c,))
    if inst1.graph.n == 1:
        return _trivial_kernel(inst.p, trace)
    rep = build_representation(inst1)
    k2 = rep.implied_target
    inst2 = Instance(rep.h, inst1.links, k2, inst.p)
    inst3, trace_m = metric_completion(inst2, rep)
    trace = ReductionTrace(trace.steps + trace_m.steps)
    corners = corner_nodes(rep)
    # fringe nodes (leaves / single-circuit nodes) each need a distinct cut
    # covered, and every link touches at most two of them
    if len(corners.r1) > 2 * inst.p:
        return _infeasible_kernel(inst.p, trace)
    keep, dropped = [], []
    for link in inst3.links:
        if link.cost != INF and link.u in corners.corners and link.v in corners.corners:
            keep.append(link)
        else:
            dropped.append(link.id)
    link_map = tuple((i, link.id) for i, link in enumerate(keep))
    step_r = LinkRestricted(tuple(dropped), link_map)
    restricted = tuple(
        Link(l.u, l.v, l.weight, l.cost, i) for i, l in enumerate(keep)
    )
    inst4 = Instance(rep.h, restricted, k2, inst.p)
    chains = _find_chains(rep.h, rep.kind, corners.corners)
    g5, node_map = _contract_chains(rep.h, rep.kind, chains)
    links5 = tuple(
        Link(node_map[l.u], node_map[l.v], l.weight, l.cost, l.id)
        for l in restricted
    )
    # endpoints are corners, never dropped; normalize pair order after renaming
    links5 = tuple(
        Link(min(l.u, l.v), max(l.u, l.v), l.weight, l.cost, l.id) for l in links5
    )
    step_p = PathContracted(node_map, tuple((i, i) for i in range(len(links5))))
    trace = trace.extended(step_r, step_p)
    inst5 = Instance(g5, links5, k2, inst.p)
    return Kernel(inst5, trace, rep=rep, pre_path_instance=inst4,
                  chains=tuple(chains))


def lift_kernel_solution(chosen: Counter, trace: ReductionTrace) -> Counter:
    """Map a multiset of kernel link ids back to original link ids."""
    return trace.lift(chosen)


def unweight_kernel(kern: Kernel, original_links) -> Kernel:
    """Replace every weighted kernel link by the set of unit-weight original
    links it decomposes into, re-expanding any collapsed chain that hosts an
    endpoint of those links."""
    if kern.infeasible:
        return kern
    if any(l.weight != 1 for l in original_links):
        raise TraceError("emulation requires a unit-weight original instance")
    if kern.rep is None or kern.pre_path_instance is None:
        raise TraceError("kernel lacks the pipeline data needed for emulation")
    emulation: dict[int, tuple[int, ...]] = {}
    needed: set[int] = set()
    for link in kern.instance.links:
        lifted = kern.trace.lift(Counter({link.id: 1}))
        ids = tuple(sorted(lifted))
        emulation[link.id] = ids
        needed.update(ids)
    contracted_step = kern.trace.steps[0]
    node_map0 = contracted_step.node_map  # original node -> representation node
    rep_endpoint: dict[int, tuple[int, int]] = {}
    retained: set[int] = set()
    for oid in needed:
        link = original_links[oid]
        a, b = node_map0[link.u], node_map0[link.v]
        rep_endpoint[oid] = (a, b)
        retained.update((a, b))
    g6, node_map6 = _contract_chains(
        kern.rep.h, kern.rep.kind, list(kern.chains), protected=frozenset(retained)
    )
    picked: dict[tuple[int, int], tuple] = {}
    for oid in sorted(needed):
        a, b = rep_endpoint[oid]
        u, v = node_map6[a], node_map6[b]
        if u == v:
            raise TraceError(f"link {oid} collapsed to a loop during emulation")
        pair = (min(u, v), max(u, v))
        cost = original_links[oid].cost
        if pair not in picked or cost < picked[pair][0]:
            picked[pair] = (cost, oid)
    links, link_map, kept_ids = [], [], set()
    for i, (pair, (cost, oid)) in enumerate(sorted(picked.items())):
        links.append(Link(pair[0], pair[1], 1, cost, i))
        link_map.append((i, oid))
        kept_ids.add(oid)
    dropped = tuple(l.id for l in original_links if l.id not in kept_ids)
    inst = Instance(g6, tuple(links), kern.instance.k, kern.instance.p)
    trace = ReductionTrace((LinkRestricted(dropped, tuple(link_map)),))
    return Kernel(inst, trace, rep=kern.rep, chains=kern.chains)
