"""Multigraph substrate: connectivity queries, inseparable partitions,
contraction, and exhaustive minimum-cut enumeration."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Union

INF = float("inf")

Cost = Union[Fraction, float]  # float only ever holds INF


class SizeError(ValueError):
    """Raised when an exhaustive routine is asked to exceed its node threshold."""


class PreconditionError(ValueError):
    """Raised when an instance violates a pipeline precondition."""


@dataclass(frozen=True)
class MultiGraph:
    """Undirected multigraph on nodes 0..n-1, edges stored as sorted pairs.

    Parallel edges are allowed; self-loops are not. The edge id is the index
    into ``edges``.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range or unsorted")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "MultiGraph":
        return cls(n, tuple((min(u, v), max(u, v)) for u, v in edges))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def components(self) -> list[frozenset[int]]:
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            comp = []
            queue = deque([start])
            seen[start] = True
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in self.adjacency[x]:
                    if not seen[y]:
                        seen[y] = True
                        queue.append(y)
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def with_extra_edges(self, extra: Iterable[tuple[int, int]]) -> "MultiGraph":
        return MultiGraph.from_edges(self.n, list(self.edges) + list(extra))

    def without_node(self, v: int) -> "MultiGraph":
        """Graph on the same id space with v isolated (its edges removed)."""
        return MultiGraph(self.n, tuple(e for e in self.edges if v not in e))

    def cut_size(self, side: frozenset[int]) -> int:
        return sum(1 for u, v in self.edges if (u in side) != (v in side))


def local_edge_connectivity(g: MultiGraph, s: int, t: int) -> int:
    """Max number of edge-disjoint s-t paths (unit capacity per parallel edge)."""
    cap: dict[tuple[int, int], int] = {}
    for u, v in g.edges:
        cap[(u, v)] = cap.get((u, v), 0) + 1
        cap[(v, u)] = cap.get((v, u), 0) + 1
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in set(g.edges):
        adj[u].append(v)
        adj[v].append(u)
    flow = 0
    while True:
        parent: list[Optional[int]] = [None] * g.n
        parent[s] = s
        queue = deque([s])
        while queue and parent[t] is None:
            x = queue.popleft()
            for y in adj[x]:
                if parent[y] is None and cap.get((x, y), 0) > 0:
                    parent[y] = x
                    queue.append(y)
        if parent[t] is None:
            return flow
        # bottleneck along the path
        path = []
        y = t
        while y != s:
            x = parent[y]
            path.append((x, y))
            y = x
        delta = min(cap[(x, y)] for x, y in path)
        for x, y in path:
            cap[(x, y)] -= delta
            cap[(y, x)] += delta
        flow += delta


def edge_connectivity(g: MultiGraph) -> Cost:
    """Minimum cut value; 0 for disconnected graphs, INF for a single node
    (no cut exists)."""
    if g.n <= 1:
        return INF
    if not g.is_connected():
        return 0
    return min(local_edge_connectivity(g, 0, t) for t in range(1, g.n))


def min_cut_witness(g: MultiGraph) -> tuple[int, frozenset[int]]:
    """Edge connectivity together with a node side achieving it."""
    if g.n <= 1:
        raise ValueError("single-node graph has no cut")
    comps = g.components()
    if len(comps) > 1:
        return 0, min(comps, key=min)
    best_t, best = None, None
    for t in range(1, g.n):
        lam = local_edge_connectivity(g, 0, t)
        if best is None or lam < best:
            best, best_t = lam, t
    # recover the 0-side of a min 0-t cut by BFS on the residual graph
    cap: dict[tuple[int, int], int] = {}
    for u, v in g.edges:
        cap[(u, v)] = cap.get((u, v), 0) + 1
        cap[(v, u)] = cap.get((v, u), 0) + 1
    # rerun max flow to saturation
    t = best_t
    while True:
        parent: list[Optional[int]] = [None] * g.n
        parent[0] = 0
        queue = deque([0])
        while queue and parent[t] is None:
            x = queue.popleft()
            for y in range(g.n):
                if parent[y] is None and cap.get((x, y), 0) > 0:
                    parent[y] = x
                    queue.append(y)
        if parent[t] is None:
            side = frozenset(i for i in range(g.n) if parent[i] is not None)
            return best, side
        path = []
        y = t
        while y != 0:
            x = parent[y]
            path.append((x, y))
            y = x
        delta = min(cap[(x, y)] for x, y in path)
        for x, y in path:
            cap[(x, y)] -= delta
            cap[(y, x)] += delta


def is_k_edge_connected(g: MultiGraph, k: int) -> bool:
    if k < 1:
        raise ValueError("k must be >= 1")
    if g.n <= 1:
        return True
    if not g.is_connected():
        return False
    # fast reject: a node of degree < k gives a small cut
    if any(g.degree(v) < k for v in range(g.n)):
        return False
    return all(local_edge_connectivity(g, 0, t) >= k for t in range(1, g.n))


@dataclass(frozen=True)
class Link:
    """Candidate new edge with a budget weight and a rational (or infinite) cost."""

    u: int
    v: int
    weight: int
    cost: Cost
    id: int

    def __post_init__(self):
        if self.u >= self.v:
            raise ValueError("link endpoints must satisfy u < v")
        if self.weight < 1:
            raise ValueError("link weight must be >= 1")
        if self.cost != INF and self.cost < 0:
            raise ValueError("link cost must be nonnegative")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


@dataclass(frozen=True)
class Instance:
    """Augmentation instance: graph, stored links, target k, weight budget p.

    At most one link is stored per (node pair, weight); any absent
    combination is an implicit link of cost INF.
    """

    graph: MultiGraph
    links: tuple[Link, ...]
    k: int
    p: int

    def __post_init__(self):
        if self.k < 1 or self.p < 0:
            raise ValueError("need k >= 1 and p >= 0")
        seen = set()
        for i, link in enumerate(self.links):
            if link.id != i:
                raise ValueError("link ids must equal their index")
            if link.v >= self.graph.n:
                raise ValueError(f"link endpoint {link.v} out of range")
            if link.weight > self.p:
                raise ValueError("link weight exceeds budget p")
            key = (link.u, link.v, link.weight)
            if key in seen:
                raise ValueError(f"duplicate link slot {key}")
            seen.add(key)

    @cached_property
    def slots(self) -> dict[tuple[int, int, int], Link]:
        return {(l.u, l.v, l.weight): l for l in self.links}

    def find(self, u: int, v: int, t: int) -> Optional[Link]:
        if u > v:
            u, v = v, u
        return self.slots.get((u, v, t))

    def slot_cost(self, u: int, v: int, t: int) -> Cost:
        link = self.find(u, v, t)
        return INF if link is None else link.cost


@dataclass(frozen=True)
class Partition:
    classes: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for cls in self.classes:
            if seen & cls:
                raise ValueError("partition classes overlap")
            seen |= cls

    def class_of(self, v: int) -> frozenset[int]:
        for cls in self.classes:
            if v in cls:
                return cls
        raise KeyError(v)


@dataclass(frozen=True)
class CutFamily:
    """All minimum cuts, canonicalized to the side containing the smallest node."""

    value: int
    cuts: frozenset[frozenset[int]]


def canonical_cut(side: Iterable[int], n: int) -> frozenset[int]:
    side = frozenset(side)
    if not side or len(side) >= n:
        raise ValueError("cut side must be a nonempty proper subset")
    lowest = min(min(side), min(set(range(n)) - side))
    return side if lowest in side else frozenset(range(n)) - side


def enumerate_min_cuts(g: MultiGraph, max_nodes: int = 20) -> CutFamily:
    """Exhaustive scan over canonical subsets containing node 0."""
    if g.n < 2:
        raise ValueError("need at least 2 nodes to have a cut")
    if g.n > max_nodes:
        raise SizeError(f"enumeration limited to {max_nodes} nodes, got {g.n}")
    if not g.is_connected():
        raise PreconditionError("enumerate_min_cuts requires a connected graph")
    bits = [(1 << u, 1 << v) for u, v in g.edges]
    best = None
    cuts: list[int] = []
    for x in range(1 << (g.n - 1)):
        side = (x << 1) | 1
        if side == (1 << g.n) - 1:
            continue
        d = sum(1 for bu, bv in bits if bool(side & bu) != bool(side & bv))
        if best is None or d < best:
            best, cuts = d, [side]
        elif d == best:
            cuts.append(side)
    fam = frozenset(
        frozenset(i for i in range(g.n) if side & (1 << i)) for side in cuts
    )
    return CutFamily(value=best, cuts=fam)


def contract_partition(inst: Instance, partition: Partition):
    """Contract every class of the partition to a single node.

    Returns (new instance, Contracted step). New node ids follow the order of
    each class's smallest member; per (pair, weight) parallel link bundle only
    a cheapest representative survives (ties: smallest original id).
    Self-loops created by contraction are dropped.
    """
    from .trace import Contracted

    classes = sorted(partition.classes, key=min)
    if sum(len(c) for c in classes) != inst.graph.n:
        raise ValueError("partition must cover all nodes")
    node_map = [0] * inst.graph.n
    for new_id, cls in enumerate(classes):
        for v in cls:
            node_map[v] = new_id
    new_n = len(classes)
    new_edges = []
    for u, v in inst.graph.edges:
        a, b = node_map[u], node_map[v]
        if a != b:
            new_edges.append((min(a, b), max(a, b)))
    graph = MultiGraph(new_n, tuple(new_edges))
    best: dict[tuple[int, int, int], Link] = {}
    for link in inst.links:
        a, b = node_map[link.u], node_map[link.v]
        if a == b:
            continue
        key = (min(a, b), max(a, b), link.weight)
        prev = best.get(key)
        if prev is None or (link.cost, link.id) < (prev.cost, prev.id):
            best[key] = link
    survivors = []
    new_links = []
    for new_id, key in enumerate(sorted(best, key=lambda k: best[k].id)):
        old = best[key]
        u, v, t = key
        new_links.append(Link(u, v, t, old.cost, new_id))
        survivors.append((new_id, old.id))
    new_inst = Instance(graph, tuple(new_links), inst.k, inst.p)
    step = Contracted(node_map=tuple(node_map), survivors=tuple(survivors))
    return new_inst, step


def contract_instance(inst: Instance, s: frozenset[int]):
    """Contract the node set S to a single node, leaving the rest untouched."""
    if not s:
        raise ValueError("cannot contract an empty set")
    rest = [frozenset([v]) for v in range(inst.graph.n) if v not in s]
    return contract_partition(inst, Partition(tuple(sorted([frozenset(s)] + rest, key=min))))


def inseparable_partition(inst: Instance) -> Partition:
    """Maximal k-inseparable classes (k edge-disjoint paths between members)."""
    g, k = inst.graph, inst.k
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = g.components()
    comp_of = {}
    for comp in comps:
        for v in comp:
            comp_of[v] = comp
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if comp_of[u] is not comp_of[v]:
                continue
            if find(u) == find(v):
                continue
            if local_edge_connectivity(g, u, v) >= k:
                parent[find(v)] = find(u)
    groups: dict[int, set[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), set()).add(v)
    classes = sorted((frozenset(s) for s in groups.values()), key=min)
    return Partition(tuple(classes))
