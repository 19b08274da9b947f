"""Node-connectivity 1 -> 2 by reduction to edge connectivity.

Every cut node v is split: one satellite v_i per component of G - v, joined
to v by a special edge; edges and links into the i-th component move to v_i.
A 2-node-connecting link set always makes the split graph 2-edge-connected,
so the edge pipeline applies unchanged and its answer is a lower bound.
The converse fails for cut nodes with three or more branches, so the lower
bound is not always attained; see solve_node_1_2.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .graph import Instance, Link, MultiGraph, PreconditionError
from .solver import Solution, solution_from_counter, solve


@dataclass(frozen=True)
class SplitMap:
    """Original node ids survive unchanged; satellites take fresh ids."""

    n_original: int
    satellite_of: tuple[int, ...]  # satellite id - n_original -> its cut node
    special_edges: tuple[tuple[int, int], ...]


def cut_nodes(g: MultiGraph) -> list[int]:
    """Nodes whose removal disconnects the (connected) graph."""
    base = len(g.components())
    out = []
    for v in range(g.n):
        rest = g.without_node(v)
        others = [c for c in rest.components() if c != frozenset([v])]
        if len(others) > base:
            out.append(v)
    return out


def split_cut_nodes(inst: Instance) -> tuple[Instance, SplitMap]:
    g = inst.graph
    if g.n > 1 and not g.is_connected():
        raise PreconditionError("node-connectivity augmentation needs a connected graph")
    edges = list(g.edges)
    links = list(inst.links)
    n = g.n
    satellites: list[int] = []
    special: list[tuple[int, int]] = []
    for v in cut_nodes(g):
        cur = MultiGraph.from_edges(n, edges)
        rest = cur.without_node(v)
        comps = sorted(
            (c for c in rest.components() if c != frozenset([v])), key=min
        )
        ids = {}
        for c in comps:
            ids[c] = n
            satellites.append(v)
            special.append((v, n))
            n += 1

        def side(u: int) -> int:
            for c in comps:
                if u in c:
                    return ids[c]
            raise AssertionError(f"node {u} unreachable from cut node {v}")

        edges = [
            e if v not in e else tuple(sorted((e[0] if e[1] == v else e[1],
                                               side(e[0] if e[1] == v else e[1]))))
            for e in edges
        ]
        edges += special[-len(comps):]
        remapped = []
        for l in links:
            if v in (l.u, l.v):
                other = l.other(v)
                a, b = sorted((other, side(other)))
                remapped.append(Link(a, b, l.weight, l.cost, l.id))
            else:
                remapped.append(l)
        links = remapped
    out = Instance(MultiGraph.from_edges(n, edges), tuple(links), 2, inst.p)
    return out, SplitMap(g.n, tuple(satellites), tuple(special))


def solve_node_1_2(inst: Instance) -> Solution:
    """Split cut nodes, run the edge solver, map the chosen links back.

    Known gap: when some cut node has >= 3 branches, links can pair the
    branches into two groups whose satellites form one 2-edge-connected
    split graph while every cycle of the augmented original still passes
    through the cut node.  The reduction then returns a cheaper link set
    that is not 2-node-connecting.  With <= 2 branches per cut node the
    reduction is exact.
    """
    split, _ = split_cut_nodes(inst)
    sol = solve(split)
    if not sol.is_optimal:
        return sol
    # link ids are preserved by the splitting, so the chosen ids apply as-is
    return solution_from_counter(inst, Counter(dict(sol.chosen)))
