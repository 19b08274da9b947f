"""Instance text format, JSON serialization, and seeded generators.

Format (DIMACS-inspired, one record per line, `c` lines are comments):

    p aug <n> <m> <L> <k> <p>
    e <u> <v>
    l <u> <v> <t> <cost>

where cost is an integer, `num/den`, or `inf`.  All randomness flows through
the documented splitmix generator so other implementations can reproduce the
instances byte for byte.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction
from typing import Optional

from .graph import INF, Cost, Instance, Link, MultiGraph, edge_connectivity
from .rng import SplitMix64
from .solver import Solution


class ParseError(ValueError):
    pass


def _parse_cost(token: str, lineno: int) -> Cost:
    if token == "inf":
        return INF
    try:
        if "/" in token:
            num, den = token.split("/")
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(int(token))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"line {lineno}: bad cost {token!r}") from exc
    if value < 0:
        raise ParseError(f"line {lineno}: negative cost {token!r}")
    return value


def parse_instance(text: str) -> Instance:
    header = None
    edges: list[tuple[int, int]] = []
    raw_links: list[tuple[int, int, int, Cost, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None:
                raise ParseError(f"line {lineno}: duplicate header")
            if len(parts) != 7 or parts[1] != "aug":
                raise ParseError(f"line {lineno}: header must be 'p aug n m L k p'")
            try:
                header = tuple(int(x) for x in parts[2:])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: non-integer header field") from exc
        elif parts[0] == "e":
            if header is None:
                raise ParseError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise ParseError(f"line {lineno}: edge needs two endpoints")
            u, v = int(parts[1]), int(parts[2])
            if u == v:
                raise ParseError(f"line {lineno}: self-loop {u}")
            if not (0 <= u < header[0] and 0 <= v < header[0]):
                raise ParseError(f"line {lineno}: node id out of range")
            edges.append((min(u, v), max(u, v)))
        elif parts[0] == "l":
            if header is None:
                raise ParseError(f"line {lineno}: link before header")
            if len(parts) != 5:
                raise ParseError(f"line {lineno}: link needs 'l u v t cost'")
            u, v, t = int(parts[1]), int(parts[2]), int(parts[3])
            if u == v:
                raise ParseError(f"line {lineno}: self-loop link {u}")
            if not (0 <= u < header[0] and 0 <= v < header[0]):
                raise ParseError(f"line {lineno}: node id out of range")
            if not 1 <= t <= header[4]:
                raise ParseError(f"line {lineno}: weight {t} outside 1..{header[4]}")
            cost = _parse_cost(parts[4], lineno)
            raw_links.append((min(u, v), max(u, v), t, cost, lineno))
        else:
            raise ParseError(f"line {lineno}: unknown record {parts[0]!r}")
    if header is None:
        raise ParseError("missing 'p aug' header")
    n, m, num_links, k, p = header
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges, found {len(edges)}")
    if len(raw_links) != num_links:
        raise ParseError(f"header declares {num_links} links, found {len(raw_links)}")
    slots: dict[tuple[int, int, int], tuple[Cost, int]] = {}
    for u, v, t, cost, lineno in raw_links:
        key = (u, v, t)
        if key in slots:
            print(f"warning: line {lineno}: duplicate link {key}, keeping cheaper",
                  file=sys.stderr)
            if cost >= slots[key][0]:
                continue
        slots[key] = (cost, lineno)
    links = tuple(
        Link(u, v, t, cost, i)
        for i, ((u, v, t), (cost, _)) in enumerate(sorted(slots.items()))
    )
    return Instance(MultiGraph(n, tuple(sorted(edges))), links, k, p)


def _cost_token(c: Cost) -> str:
    if c == INF:
        return "inf"
    frac = Fraction(c)
    return f"{frac.numerator}/{frac.denominator}"


def serialize_instance(inst: Instance) -> str:
    lines = [
        f"p aug {inst.graph.n} {len(inst.graph.edges)} {len(inst.links)} "
        f"{inst.k} {inst.p}"
    ]
    for u, v in inst.graph.edges:
        lines.append(f"e {u} {v}")
    for l in inst.links:
        lines.append(f"l {l.u} {l.v} {l.weight} {_cost_token(l.cost)}")
    return "\n".join(lines) + "\n"


def solution_to_dict(inst: Instance, sol: Solution, violations=()) -> dict:
    if not sol.is_optimal:
        return {"status": "infeasible"}
    links = []
    for lid, mult in sol.chosen:
        l = inst.links[lid]
        for _ in range(mult):
            links.append({"u": l.u, "v": l.v, "t": l.weight,
                          "cost": _cost_token(l.cost)})
    return {
        "status": "optimal",
        "cost": _cost_token(sol.total_cost),
        "weight": sol.total_weight,
        "links": links,
        "violations": list(violations),
    }


def serialize_solution(inst: Instance, sol: Solution) -> str:
    return json.dumps(solution_to_dict(inst, sol), sort_keys=True)


def parse_solution(inst: Instance, text: str) -> Solution:
    data = json.loads(text)
    if data.get("status") != "optimal":
        from .solver import INFEASIBLE

        return INFEASIBLE
    from collections import Counter

    chosen: Counter = Counter()
    for item in data.get("links", []):
        u, v, t = int(item["u"]), int(item["v"]), int(item["t"])
        link = inst.find(min(u, v), max(u, v), t)
        if link is None:
            raise ParseError(f"solution references unknown link {(u, v, t)}")
        chosen[link.id] += 1
    from .solver import solution_from_counter

    return solution_from_counter(inst, chosen)


def _random_cost(rng: SplitMix64, max_num: int, max_den: int) -> Fraction:
    return Fraction(rng.below(max_num + 1), rng.below(max_den) + 1)


def _random_tree_edges(rng: SplitMix64, n: int) -> list[tuple[int, int]]:
    return [(rng.below(i), i) for i in range(1, n)]


def _random_cactus_edges(rng: SplitMix64, n: int) -> list[tuple[int, int]]:
    if n == 1:
        return []
    edges: list[tuple[int, int]] = []
    grown = 1
    while grown < n:
        attach = rng.below(grown)
        size = min(2 + rng.below(3), n - grown + 1)  # circuit length 2..4
        if size == 2:
            edges += [(attach, grown), (attach, grown)]
            grown += 1
        else:
            path = [attach] + list(range(grown, grown + size - 1))
            for a, b in zip(path, path[1:]):
                edges.append((a, b))
            edges.append((attach, path[-1]))
            grown += size - 1
    return edges


def _random_forest_edges(rng: SplitMix64, n: int, parts: int) -> list[tuple[int, int]]:
    edges: list[tuple[int, int]] = []
    prev: list[list[int]] = [[j] for j in range(parts)]
    for v in range(parts, n):
        j = rng.below(parts)
        edges.append((prev[j][rng.below(len(prev[j]))], v))
        prev[j].append(v)
    return edges


def generate_random(kind: str, n: int, p: int, k: int, seed: int,
                    cost_range: tuple[int, int] = (10, 10),
                    link_fraction: float = 0.15,
                    components: Optional[int] = None) -> Instance:
    if n < 1 or p < 1 or k < 2:
        raise ValueError("need n >= 1, p >= 1, k >= 2")
    rng = SplitMix64(seed)
    if kind == "tree":
        if k != 2:
            raise ValueError("tree instances target k=2")
        edges = _random_tree_edges(rng, n)
    elif kind == "cactus":
        if k != 3:
            raise ValueError("cactus instances target k=3")
        edges = _random_cactus_edges(rng, n)
    elif kind == "forest":
        if k != 2:
            raise ValueError("forest instances target k=2")
        parts = components if components is not None else 1 + rng.below(min(3, n))
        edges = _random_forest_edges(rng, n, parts)
    elif kind == "general":
        edges = _random_general_edges(rng, n, k)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    g = MultiGraph.from_edges(n, edges)
    max_num, max_den = cost_range
    millionths = int(link_fraction * 1_000_000)
    links = []
    for u in range(n):
        for v in range(u + 1, n):
            for t in range(1, p + 1):
                if rng.chance(millionths):
                    links.append(
                        Link(u, v, t, _random_cost(rng, max_num, max_den), len(links))
                    )
    return Instance(g, tuple(links), k, p)


def _random_general_edges(rng: SplitMix64, n: int, k: int) -> list[tuple[int, int]]:
    """Random multigraph, resampled until exactly (k-1)-edge-connected."""
    if n == 1:
        return []
    for _ in range(10_000):
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                mult = rng.below(3) if k > 2 else (1 if rng.chance(400_000) else 0)
                edges += [(u, v)] * mult
        g = MultiGraph.from_edges(n, edges)
        if edge_connectivity(g) == k - 1:
            return edges
    raise ValueError(f"could not sample a {k - 1}-edge-connected graph on {n} nodes")
