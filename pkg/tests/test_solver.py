"""End-to-end solve() and solution verification."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from ecaug.graph import INF, Instance, Link, MultiGraph
from ecaug.oracle import brute_force_solve
from ecaug.rng import SplitMix64
from ecaug.solver import (INFEASIBLE, solve, structural_min_cuts,
                          verify_solution)


def test_structural_cuts_of_tree():
    g = MultiGraph.from_edges(4, [(0, 1), (1, 2), (1, 3)])
    cuts = structural_min_cuts(g, 2)
    assert sorted(sorted(c) for c in cuts) == [[1, 2, 3], [2], [3]]


def test_structural_cuts_of_cactus():
    g = MultiGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    cuts = structural_min_cuts(g, 3)
    assert sorted(sorted(c) for c in cuts) == [[1], [1, 2], [2]]


def test_solve_path_simple():
    g = MultiGraph.from_edges(3, [(0, 1), (1, 2)])
    links = (Link(0, 2, 1, Fraction(3), 0),)
    sol = solve(Instance(g, links, 2, 1))
    assert sol.is_optimal
    assert sol.total_cost == Fraction(3)
    assert sol.ids() == (0,)


def test_solve_reports_infeasible_without_links():
    g = MultiGraph.from_edges(3, [(0, 1), (1, 2)])
    assert solve(Instance(g, (), 2, 1)) is INFEASIBLE or \
        not solve(Instance(g, (), 2, 1)).is_optimal


def test_solve_respects_budget():
    g = MultiGraph.from_edges(3, [(0, 1), (1, 2)])
    # both cuts need their own link, total weight 2 > p = 1
    links = (Link(0, 1, 1, Fraction(1), 0), Link(1, 2, 1, Fraction(1), 1))
    sol = solve(Instance(g, links, 2, 1))
    assert not sol.is_optimal


def test_verify_solution_flags_uncovered_cut():
    g = MultiGraph.from_edges(3, [(0, 1), (1, 2)])
    links = (Link(0, 1, 1, Fraction(1), 0),)
    inst = Instance(g, links, 2, 1)
    from ecaug.solver import solution_from_counter
    from collections import Counter

    sol = solution_from_counter(inst, Counter({0: 1}))
    report = verify_solution(inst, sol)
    assert not report.valid
    assert report.violated_cuts


def random_instance(seed, n, p, k):
    rng = SplitMix64(seed)
    for _ in range(300):
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                mult = rng.below(3) if k > 2 else (1 if rng.chance(400_000) else 0)
                edges += [(u, v)] * mult
        g = MultiGraph.from_edges(n, edges)
        from ecaug.graph import edge_connectivity

        if edge_connectivity(g) == k - 1:
            break
    else:
        return None
    links = []
    for u in range(n):
        for v in range(u + 1, n):
            for t in range(1, p + 1):
                if rng.chance(350_000):
                    c = Fraction(rng.below(9), rng.below(4) + 1)
                    links.append(Link(u, v, t, c, len(links)))
    return Instance(g, tuple(links), k, p)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 1_000_000), st.integers(3, 6), st.integers(1, 3),
       st.sampled_from([2, 3, 4, 5]))
def test_solve_matches_oracle(seed, n, p, k):
    inst = random_instance(seed, n, p, k)
    if inst is None:
        return
    got = solve(inst)
    want = brute_force_solve(inst, mode="multiset")
    assert got.is_optimal == want.is_optimal
    if got.is_optimal:
        assert got.total_cost == want.total_cost
        assert verify_solution(inst, got).valid
