"""Equivalent tree / cactus representation of all minimum cuts.

For target k the contracted graph is replaced by a graph H whose minimum-cut
family matches the input's: the input itself for k in {2, 3}, otherwise a
tree (k even) or cactus (k odd) rebuilt from the enumerated cut family.
H may contain auxiliary nodes (ids >= n_real) that carry no links; cut
families are compared after projecting those out.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .graph import (
    CutFamily,
    Instance,
    MultiGraph,
    PreconditionError,
    canonical_cut,
    edge_connectivity,
    enumerate_min_cuts,
    inseparable_partition,
    local_edge_connectivity,
)


class Kind(Enum):
    TREE = "tree"
    CACTUS = "cactus"


class ConstructionError(ValueError):
    """The enumerated cut family does not fit the expected structure."""


@dataclass(frozen=True)
class CutRepresentation:
    h: MultiGraph
    kind: Kind
    n_real: int  # nodes 0..n_real-1 are instance nodes, the rest auxiliary

    @property
    def implied_target(self) -> int:
        return 2 if self.kind is Kind.TREE else 3


def _blocks(g: MultiGraph) -> list[tuple[frozenset[int], tuple[int, ...]]]:
    """Biconnected components as (node set, edge id tuple), parallel edges kept
    apart (a parallel pair forms its own block)."""
    incident: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for eid, (u, v) in enumerate(g.edges):
        incident[u].append((v, eid))
        incident[v].append((u, eid))
    import sys

    depth = [-1] * g.n
    low = [0] * g.n
    stack: list[int] = []
    blocks: list[tuple[frozenset[int], tuple[int, ...]]] = []

    def emit(up_to: int):
        eids = []
        while True:
            eid = stack.pop()
            eids.append(eid)
            if eid == up_to:
                break
        nodes = set()
        for eid in eids:
            nodes.update(g.edges[eid])
        blocks.append((frozenset(nodes), tuple(sorted(eids))))

    def dfs(v: int, parent_eid: int):
        for w, eid in incident[v]:
            if eid == parent_eid:
                continue
            if depth[w] == -1:
                stack.append(eid)
                depth[w] = depth[v] + 1
                low[w] = depth[w]
                dfs(w, eid)
                low[v] = min(low[v], low[w])
                if low[w] >= depth[v]:
                    emit(eid)
            elif depth[w] < depth[v]:
                stack.append(eid)
                low[v] = min(low[v], depth[w])

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * g.n + 100))
    try:
        for root in range(g.n):
            if depth[root] == -1 and incident[root]:
                depth[root] = 0
                dfs(root, -1)
    finally:
        sys.setrecursionlimit(old_limit)
    return blocks


def is_cactus(g: MultiGraph) -> bool:
    """2-edge-connected with every block a circuit (2-circuits allowed)."""
    if g.n == 1:
        return False
    if not g.is_connected():
        return False
    if any(g.degree(v) < 2 for v in range(g.n)):
        return False
    for nodes, eids in _blocks(g):
        if len(eids) == 1:
            return False  # bridge
        if len(nodes) == 2:
            if len(eids) != 2:
                return False  # >= 3 parallel edges share two circuits
            continue
        if len(eids) != len(nodes):
            return False
        deg: dict[int, int] = {}
        for eid in eids:
            for x in g.edges[eid]:
                deg[x] = deg.get(x, 0) + 1
        if any(d != 2 for d in deg.values()):
            return False
    return True


def circuits_of_cactus(g: MultiGraph) -> list[tuple[frozenset[int], tuple[int, ...]]]:
    """Blocks of a cactus; each is a circuit."""
    if not is_cactus(g):
        raise ValueError("graph is not a cactus")
    return _blocks(g)


def _crossing(a: frozenset, b: frozenset) -> bool:
    # the fourth quadrant always holds node 0, which is in neither set
    return bool(a & b) and bool(a - b) and bool(b - a)


def _laminar_parent(sets: list[frozenset], a: frozenset) -> Optional[frozenset]:
    """Smallest proper superset of a within sets (None at top level)."""
    best = None
    for s in sets:
        if s != a and a <= s and (best is None or len(s) < len(best)):
            best = s
    return best


class _NodeAllocator:
    def __init__(self, n_real: int):
        self.next_aux = n_real
        self.assigned: dict[frozenset, int] = {}

    def node_for(self, a: frozenset, free: Optional[int]) -> int:
        if a in self.assigned:
            return self.assigned[a]
        if free is None:
            nid = self.next_aux
            self.next_aux += 1
        else:
            nid = free
        self.assigned[a] = nid
        return nid


def _free_node(family: list[frozenset], a: frozenset) -> Optional[int]:
    covered: set[int] = set()
    maximal = []
    for s in family:
        if s != a and s < a:
            maximal.append(s)
    for s in maximal:
        if not any(s < t for t in maximal):
            covered |= s
    free = sorted(a - covered)
    if len(free) > 1:
        raise ConstructionError(
            f"nodes {free} are separated by no minimum cut; contract first"
        )
    return free[0] if free else None


def _build_tree(family: list[frozenset], n: int) -> MultiGraph:
    """Tree from a laminar family of root-free cut sides (aux nodes allowed)."""
    for a in family:
        for b in family:
            if _crossing(a, b):
                raise ConstructionError("crossing cuts in an odd-valued cut family")
    order = sorted(family, key=lambda s: (min(s), -len(s), sorted(s)))
    alloc = _NodeAllocator(n)
    for a in order:
        alloc.node_for(a, _free_node(family, a))
    edges = []
    for a in order:
        parent = _laminar_parent(family, a)
        top = 0 if parent is None else alloc.assigned[parent]
        edges.append((alloc.assigned[a], top))
    return MultiGraph.from_edges(alloc.next_aux, edges)


def _circuit_classes(family: list[frozenset]):
    """Group cut sides into circuit classes: connected components of the
    relation 'crossing, or disjoint with the union also a cut side'."""
    fam_set = set(family)
    idx = {a: i for i, a in enumerate(family)}
    parent = list(range(len(family)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, a in enumerate(family):
        for b in family[i + 1:]:
            related = _crossing(a, b) or (not (a & b) and (a | b) in fam_set)
            if related:
                ra, rb = find(i), find(idx[b])
                if ra != rb:
                    parent[rb] = ra
    groups: dict[int, list[frozenset]] = {}
    for i, a in enumerate(family):
        groups.setdefault(find(i), []).append(a)
    return [sorted(g, key=lambda s: (min(s), len(s), sorted(s)))
            for g in groups.values() if len(g) >= 2]


def _order_parts(parts: list[frozenset], fam_set: set) -> list[frozenset]:
    """Arrange the parts of a circuit class on a path: consecutive parts have
    their union in the cut family."""
    adj: dict[frozenset, list[frozenset]] = {p: [] for p in parts}
    for i, a in enumerate(parts):
        for b in parts[i + 1:]:
            if (a | b) in fam_set:
                adj[a].append(b)
                adj[b].append(a)
    ends = [p for p in parts if len(adj[p]) == 1]
    if len(parts) == 1:
        raise ConstructionError("degenerate single-part circuit class")
    if len(ends) != 2 or any(len(adj[p]) > 2 for p in parts):
        raise ConstructionError("circuit class parts do not form a path")
    start = min(ends, key=lambda s: (min(s), sorted(s)))
    order = [start]
    prev = None
    while len(order) < len(parts):
        nxt = [q for q in adj[order[-1]] if q is not prev]
        if len(nxt) != 1:
            raise ConstructionError("circuit class parts do not form a path")
        prev = order[-1]
        order.append(nxt[0])
    return order


def _build_cactus(family: list[frozenset], n: int) -> MultiGraph:
    fam_set = set(family)
    classes = _circuit_classes(family)
    class_info = []
    interval_sets: set[frozenset] = set()
    all_parts: set[frozenset] = set()
    for cls in classes:
        parts = [a for a in cls if not any(b < a for b in cls)]
        order = _order_parts(parts, fam_set)
        intervals = set()
        for i in range(len(order)):
            acc: frozenset = frozenset()
            for j in range(i, len(order)):
                acc = acc | order[j]
                intervals.add(acc)
        if not intervals <= fam_set:
            raise ConstructionError("circuit class misses an interval cut")
        if not set(cls) <= intervals:
            raise ConstructionError("circuit class member is not an interval")
        class_info.append((order, intervals))
        interval_sets |= intervals
        all_parts |= set(order)
    pool = [a for a in family if a not in interval_sets]

    hosts = sorted(all_parts | set(pool), key=lambda s: (min(s), len(s), sorted(s)))
    alloc = _NodeAllocator(n)
    for a in hosts:
        alloc.node_for(a, _free_node(family, a))

    def attach_node(a: frozenset, own_intervals: set) -> int:
        """Node hosting the region directly above the set a."""
        if a in alloc.assigned and a not in own_intervals:
            return alloc.assigned[a]
        parent = _laminar_parent([s for s in hosts if s not in own_intervals] , a)
        if parent is None:
            return 0
        return alloc.assigned[parent]

    edges: list[tuple[int, int]] = []
    for a in pool:
        top = attach_node(a, own_intervals={a})
        edges.append((alloc.assigned[a], top))
        edges.append((alloc.assigned[a], top))
    for order, intervals in class_info:
        full = frozenset().union(*order)
        if full in all_parts and full not in set(order):
            top = alloc.assigned[full]
        else:
            top = attach_node(full, own_intervals=intervals)
        cycle = [top] + [alloc.assigned[p] for p in order] + [top]
        for x, y in zip(cycle, cycle[1:]):
            edges.append((x, y))
    return MultiGraph.from_edges(alloc.next_aux, edges)


def project_cut_family(fam: CutFamily, n_real: int) -> frozenset[frozenset[int]]:
    """Restrict each cut side to the real nodes and recanonicalize."""
    out = set()
    for side in fam.cuts:
        restricted = frozenset(v for v in side if v < n_real)
        out.add(canonical_cut(restricted, n_real))
    return frozenset(out)


def build_representation(inst: Instance, max_nodes: int = 20) -> CutRepresentation:
    g, k = inst.graph, inst.k
    kind = Kind.TREE if k % 2 == 0 else Kind.CACTUS
    if g.n == 1:
        return CutRepresentation(g, kind, n_real=1)
    lam = edge_connectivity(g)
    if lam < k - 1:
        raise PreconditionError(f"graph is only {lam}-edge-connected, need {k - 1}")
    part = inseparable_partition(inst)
    if any(len(c) > 1 for c in part.classes):
        bad = next(c for c in part.classes if len(c) > 1)
        raise PreconditionError(f"k-inseparable pair present: {sorted(bad)[:2]}")
    if k == 2:
        if len(g.edges) != g.n - 1 or not g.is_connected():
            raise ConstructionError("contracted 1-connected graph must be a tree")
        return CutRepresentation(g, Kind.TREE, n_real=g.n)
    if k == 3:
        if not is_cactus(g):
            raise ConstructionError("contracted 2-connected graph must be a cactus")
        return CutRepresentation(g, Kind.CACTUS, n_real=g.n)
    fam = enumerate_min_cuts(g, max_nodes)
    if fam.value != k - 1:
        raise PreconditionError(
            f"minimum cut is {fam.value}, expected {k - 1} for augmentation to {k}"
        )
    full = frozenset(range(g.n))
    family = sorted((full - side for side in fam.cuts),
                    key=lambda s: (min(s), len(s), sorted(s)))
    h = _build_tree(family, g.n) if kind is Kind.TREE else _build_cactus(family, g.n)
    rep = CutRepresentation(h, kind, n_real=g.n)
    got = project_cut_family(enumerate_min_cuts(h, max(h.n, max_nodes)), g.n)
    if got != fam.cuts:
        raise ConstructionError("reconstructed representation has a different cut family")
    return rep
