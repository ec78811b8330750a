"""Exact maximum independent set on bitset graphs, plus the greedy heuristic.

The solver is a branch and bound search: peel vertices of degree at most one
(always safe to take), split into connected components at the root, bound
each subproblem by a greedy clique cover, and branch on a maximum-degree
vertex.  Work is metered in search nodes; when the budget runs out the
result degrades to a certified interval instead of an answer.
"""

from __future__ import annotations

from dataclasses import dataclass

from turanpin.bounds import psi
from turanpin.graphs import Graph, iter_bits

DEFAULT_NODE_BUDGET = 10_000_000


@dataclass(frozen=True)
class MisResult:
    """Outcome of an independence-number computation.

    ``size`` is exact iff ``exact`` is set; otherwise it is the best set
    found and ``upper_bound`` comes from the root clique-cover relaxation,
    so alpha always lies in [size, upper_bound].
    """

    size: int
    witness: int
    exact: bool
    nodes_explored: int
    budget_exhausted: bool
    upper_bound: int

    def as_interval(self) -> tuple[int, int]:
        return (self.size, self.upper_bound)


def _components(adj, full: int) -> list[int]:
    comps = []
    rem = full
    while rem:
        comp = rem & -rem
        frontier = comp
        while frontier:
            grown = 0
            for v in iter_bits(frontier):
                grown |= adj[v]
            frontier = grown & rem & ~comp
            comp |= frontier
        comps.append(comp)
        rem &= ~comp
    return comps


def clique_cover_bound(g: Graph, cand: int | None = None) -> int:
    """Greedy clique cover size of the induced subgraph: an upper bound on alpha."""
    if cand is None:
        cand = (1 << g.n) - 1
    return _cover_bound(g.adj, cand)


def _cover_bound(adj, cand: int) -> int:
    bound = 0
    rem = cand
    while rem:
        low = rem & -rem
        v = low.bit_length() - 1
        rem ^= low
        common = adj[v] & rem
        while common:
            ulow = common & -common
            u = ulow.bit_length() - 1
            rem ^= ulow
            common = common & adj[u] & ~ulow
        bound += 1
    return bound


def _greedy_seed(adj, cand: int) -> int:
    # deterministic min-degree greedy, used to warm-start the incumbent
    mask = 0
    while cand:
        v = min(iter_bits(cand), key=lambda u: (adj[u] & cand).bit_count())
        mask |= 1 << v
        cand &= ~((1 << v) | adj[v])
    return mask


def max_independent_set(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> MisResult:
    """Largest independent set of g, exact if the search finishes in budget.

    On budget exhaustion the returned size is still attained by ``witness``
    and ``upper_bound`` is still valid, so callers get a true interval.
    """
    n, adj = g.n, g.adj
    full = (1 << n) - 1

    counter = [0]
    exhausted = [False]
    best = [0, 0]  # size, mask for the component being searched

    def dfs(cand: int, cur_size: int, cur_mask: int) -> None:
        if exhausted[0]:
            return
        counter[0] += 1
        if counter[0] > budget:
            exhausted[0] = True
            return
        # take every vertex of induced degree <= 1; restart after each
        # degree-1 take since removing its neighbor changes other degrees
        while cand:
            again = False
            scan = cand
            while scan:
                low = scan & -scan
                scan ^= low
                nb = adj[low.bit_length() - 1] & cand
                k = nb.bit_count()
                if k == 0:
                    cand ^= low
                    cur_mask |= low
                    cur_size += 1
                elif k == 1:
                    cand &= ~(low | nb)
                    cur_mask |= low
                    cur_size += 1
                    again = True
                    break
            if not again:
                break
        if not cand:
            if cur_size > best[0]:
                best[0], best[1] = cur_size, cur_mask
            return
        if cur_size + _cover_bound(adj, cand) <= best[0]:
            return
        v = max(iter_bits(cand), key=lambda u: (adj[u] & cand).bit_count())
        bit = 1 << v
        dfs(cand & ~(bit | adj[v]), cur_size + 1, cur_mask | bit)
        dfs(cand ^ bit, cur_size, cur_mask)

    total_size = 0
    total_mask = 0
    for comp in _components(adj, full):
        seed = _greedy_seed(adj, comp)
        best[0], best[1] = seed.bit_count(), seed
        dfs(comp, 0, 0)
        total_size += best[0]
        total_mask |= best[1]

    # paranoia: never hand back a witness that is not independent
    for v in iter_bits(total_mask):
        if adj[v] & total_mask:
            raise RuntimeError("solver produced a non-independent witness")
    if total_mask.bit_count() != total_size:
        raise RuntimeError("witness size disagrees with reported size")

    done = not exhausted[0]
    return MisResult(
        size=total_size,
        witness=total_mask,
        exact=done,
        nodes_explored=counter[0],
        budget_exhausted=not done,
        upper_bound=total_size if done else _cover_bound(adj, full),
    )


def _rand_index(rng, k: int) -> int:
    # accepts numpy Generator or random.Random
    if hasattr(rng, "integers"):
        return int(rng.integers(k))
    return rng.randrange(k)


def greedy_independent_set(g: Graph, rng) -> int:
    """Maximal independent set by repeated min-degree pick, random tie-break."""
    adj = g.adj
    cand = (1 << g.n) - 1
    mask = 0
    while cand:
        verts = list(iter_bits(cand))
        degs = [(adj[v] & cand).bit_count() for v in verts]
        dmin = min(degs)
        ties = [v for v, d in zip(verts, degs) if d == dmin]
        v = ties[_rand_index(rng, len(ties))]
        mask |= 1 << v
        cand &= ~((1 << v) | adj[v])
    return mask


def shearer_floor(n_vertices: int, avg_degree: float) -> float:
    """n * psi(d): every triangle-free graph with these parameters has alpha at least this."""
    if avg_degree < 0:
        raise ValueError("average degree must be nonnegative")
    return n_vertices * psi(avg_degree)
