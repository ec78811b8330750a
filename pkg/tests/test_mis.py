"""Independent set solver tests against brute-force subset enumeration."""

import math
import random

import numpy as np
import pytest

from turanpin.graphs import (
    Graph,
    complete_bipartite,
    cycle_graph,
    is_triangle_free,
    iter_bits,
    path_graph,
    star_graph,
)
from turanpin.mis import (
    MisResult,
    clique_cover_bound,
    greedy_independent_set,
    max_independent_set,
    shearer_floor,
)


def brute_alpha(g):
    """Exhaustive check of all 2^n subsets, vectorized over numpy."""
    n = g.n
    if n == 0:
        return 0
    masks = np.arange(1 << n, dtype=np.uint32)
    ok = np.ones(1 << n, dtype=bool)
    for v in range(n):
        has_v = (masks >> v) & 1 == 1
        hits_nbr = (masks & np.uint32(g.adj[v])) != 0
        ok &= ~(has_v & hits_nbr)
    sizes = np.zeros(1 << n, dtype=np.uint8)
    for v in range(n):
        sizes += ((masks >> v) & 1).astype(np.uint8)
    return int(sizes[ok].max())


def random_graph(n, p, rng):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


PETERSEN = Graph.from_edges(
    10,
    [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]
    + [(5, 7), (7, 9), (9, 6), (6, 8), (8, 5)]
    + [(0, 5), (1, 6), (2, 7), (3, 8), (4, 9)],
)


class TestExactSolver:
    def test_c5(self):
        r = max_independent_set(cycle_graph(5))
        assert r.size == 2 and r.exact and not r.budget_exhausted

    def test_empty(self):
        for n in (0, 1, 6, 40):
            r = max_independent_set(Graph.empty(n))
            assert r.size == n and r.exact

    def test_petersen(self):
        # alpha known to be 4; confirmed by the brute oracle too
        r = max_independent_set(PETERSEN)
        assert r.size == 4 and r.exact
        assert brute_alpha(PETERSEN) == 4

    def test_agrees_with_brute_force_corpus(self):
        rng = random.Random(1601)
        for i in range(200):
            n = rng.randrange(1, 17)
            g = random_graph(n, rng.random(), rng)
            r = max_independent_set(g)
            assert r.exact
            assert r.size == brute_alpha(g), f"instance {i}"

    def test_witness_is_independent_and_sized(self):
        rng = random.Random(2)
        for _ in range(100):
            g = random_graph(rng.randrange(1, 14), rng.random(), rng)
            r = max_independent_set(g)
            assert r.witness.bit_count() == r.size
            for v in iter_bits(r.witness):
                assert g.adj[v] & r.witness == 0

    def test_result_interval(self):
        r = max_independent_set(cycle_graph(9))
        assert r.as_interval() == (4, 4)


class TestBudget:
    def test_exhaustion_brackets_truth(self):
        rng = random.Random(31)
        for _ in range(80):
            n = rng.randrange(4, 15)
            g = random_graph(n, rng.uniform(0.1, 0.5), rng)
            truth = brute_alpha(g)
            r = max_independent_set(g, budget=rng.randrange(1, 5))
            assert r.size <= truth <= r.upper_bound
            assert r.witness.bit_count() == r.size

    def test_exhaustion_is_flagged_not_raised(self):
        r = max_independent_set(cycle_graph(7), budget=1)
        assert r.budget_exhausted and not r.exact

    def test_nodes_explored_counted(self):
        r = max_independent_set(PETERSEN)
        assert 0 < r.nodes_explored <= 10_000


class TestCliqueCover:
    def test_upper_bounds_alpha(self):
        rng = random.Random(4)
        for _ in range(150):
            g = random_graph(rng.randrange(1, 13), rng.random(), rng)
            assert clique_cover_bound(g) >= brute_alpha(g)

    def test_empty_graph(self):
        assert clique_cover_bound(Graph.empty(5)) == 5


class TestGreedy:
    def test_empty_takes_everything(self):
        rng = np.random.default_rng(0)
        assert greedy_independent_set(Graph.empty(4), rng) == 0b1111

    def test_bipartite_takes_large_side(self):
        # min-degree rule always starts on the bigger side and keeps it
        rng = np.random.default_rng(1)
        for _ in range(20):
            m = greedy_independent_set(complete_bipartite(3, 2), rng)
            assert m == 0b00111

    def test_c5_maximal_sets_have_size_two(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            assert greedy_independent_set(cycle_graph(5), rng).bit_count() == 2

    def test_output_is_maximal_independent(self):
        pyrng = random.Random(7)
        rng = np.random.default_rng(7)
        for _ in range(100):
            g = random_graph(pyrng.randrange(1, 15), pyrng.random(), pyrng)
            m = greedy_independent_set(g, rng)
            for v in iter_bits(m):
                assert g.adj[v] & m == 0
            # maximality: every vertex outside sees the set
            for v in range(g.n):
                if not (m >> v) & 1:
                    assert g.adj[v] & m != 0

    def test_accepts_stdlib_rng(self):
        m = greedy_independent_set(path_graph(5), random.Random(0))
        assert m.bit_count() == 3


class TestShearerFloor:
    def test_anchor_values(self):
        assert shearer_floor(7, 0) == 7
        assert shearer_floor(8, 1) == 4.0

    def test_c5_value(self):
        assert shearer_floor(5, 2) == pytest.approx(5 * (2 * math.log(2) - 1), rel=1e-14)
        assert max_independent_set(cycle_graph(5)).size >= shearer_floor(5, 2)

    def test_negative_degree_rejected(self):
        with pytest.raises(ValueError):
            shearer_floor(5, -1)

    def test_floor_holds_on_triangle_free_corpus(self):
        # exact guarantee, no tolerance: alpha >= n * psi(2e/n) for triangle-free g
        rng = random.Random(9)
        done = 0
        while done < 150:
            n = rng.randrange(1, 15)
            g = random_graph(n, rng.uniform(0, 0.35), rng)
            if not is_triangle_free(g):
                continue
            done += 1
            r = max_independent_set(g)
            assert r.exact
            floor = shearer_floor(n, 2 * g.edge_count / n if n else 0)
            assert r.size >= floor or math.isclose(r.size, floor)

    def test_star_is_tightish(self):
        # stars have many leaves; the floor must stay below leaf count
        g = star_graph(9)
        floor = shearer_floor(10, 2 * 9 / 10)
        assert max_independent_set(g).size == 9 >= floor
