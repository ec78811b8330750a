"""Random triangle-free graph models.

Three generators share a seedable numpy RNG discipline:

  * the sequential process that adds uniformly random open pairs (non-edges
    closing no triangle) until a target step count or until none remain;
  * independent-coin random graphs (not triangle-free in general, kept for
    degree/independence comparisons);
  * a fixed-edge-count uniform sampler over triangle-free graphs, realized
    by a Metropolis edge-swap chain, with an exact rejection sampler at
    n <= 7 as the gold standard.

Per-trial generators derive from a master seed and index path through
numpy's SeedSequence, so parallel trials reproduce bit for bit.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from turanpin.graphs import (
    Graph,
    complete_bipartite,
    index_to_pair,
    iter_bits,
    pair_count,
    pair_to_index,
)
from turanpin.mis import DEFAULT_NODE_BUDGET, max_independent_set

TO_COMPLETION = "to-completion"

_REJECTION_MAX_N = 7


def derive_rng(master_seed: int, *indices: int) -> np.random.Generator:
    """Deterministic per-trial stream: Generator(PCG64(SeedSequence([seed, *idx])))."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *map(int, indices)]))


def stream_key(master_seed: int, *indices: int) -> int:
    """64-bit label for the derived stream, usable as a per-trial record key."""
    seq = np.random.SeedSequence([int(master_seed), *map(int, indices)])
    return int(seq.generate_state(1, dtype=np.uint64)[0])


class ProcessState:
    """Growing triangle-free graph plus its open-pair bookkeeping.

    ``open_pairs[0:open_count]`` lists exactly the non-edges whose addition
    closes no triangle; ``slot[k]`` inverts it (-1 when pair k is closed or
    already an edge).  Removal is swap-with-last, so one step costs time
    proportional to the number of newly blocked pairs.
    """

    __slots__ = ("n", "rows", "open_pairs", "slot", "step")

    def __init__(self, n: int):
        self.n = n
        self.rows = [0] * n
        self.open_pairs = list(range(pair_count(n)))
        self.slot = list(range(pair_count(n)))
        self.step = 0

    @property
    def open_count(self) -> int:
        return len(self.open_pairs)

    def _drop(self, k: int) -> None:
        s = self.slot[k]
        if s == -1:
            return
        last = self.open_pairs[-1]
        self.open_pairs[s] = last
        self.slot[last] = s
        self.open_pairs.pop()
        self.slot[k] = -1

    def add_pair(self, k: int) -> None:
        """Add the open pair k as an edge and retire newly blocked pairs."""
        if self.slot[k] == -1:
            raise ValueError(f"pair {k} is not open")
        u, v = index_to_pair(k, self.n)
        rows = self.rows
        if rows[u] & rows[v]:
            raise RuntimeError("open-pair bookkeeping admitted a triangle")
        self._drop(k)
        # pairs {u,w} for pin neighbors w of v (and symmetrically) now close
        for w in iter_bits(rows[v]):
            self._drop(pair_to_index(u, w, self.n))
        for w in iter_bits(rows[u]):
            self._drop(pair_to_index(v, w, self.n))
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        self.step += 1

    def step_random(self, rng: np.random.Generator) -> int:
        k = self.open_pairs[int(rng.integers(len(self.open_pairs)))]
        self.add_pair(k)
        return k

    def graph(self) -> Graph:
        return Graph(self.n, list(self.rows), validate=False)

    def recomputed_open(self) -> set[int]:
        """Open set rebuilt from scratch; for invariant checking."""
        out = set()
        for k in range(pair_count(self.n)):
            u, v = index_to_pair(k, self.n)
            if not self.rows[u] >> v & 1 and not self.rows[u] & self.rows[v]:
                out.add(k)
        return out


@dataclass(frozen=True)
class ProcessRun:
    """One realization of the process with its addition order."""

    graph: Graph
    trace: tuple[int, ...]
    steps_requested: int | None
    completed: bool  # no open pairs remain
    truncated: bool  # asked for more steps than the run could take


def triangle_free_process(n: int, steps=TO_COMPLETION, rng=None) -> ProcessRun:
    """Add uniform random open pairs, ``steps`` times or to completion.

    A completed run is maximal: every remaining non-edge closes a triangle.
    Requesting more steps than the trajectory allows is not an error; the
    run stops at termination and sets ``truncated``.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    to_end = steps == TO_COMPLETION or steps is None
    if not to_end:
        steps = int(steps)
        if not 0 <= steps <= pair_count(n):
            raise ValueError(f"steps must lie in [0, {pair_count(n)}], got {steps}")
    state = ProcessState(n)
    trace = []
    target = None if to_end else steps
    while state.open_count and (target is None or state.step < target):
        trace.append(state.step_random(rng))
    return ProcessRun(
        graph=state.graph(),
        trace=tuple(trace),
        steps_requested=None if to_end else steps,
        completed=state.open_count == 0,
        truncated=(not to_end) and state.open_count == 0 and state.step < steps,
    )


def erdos_renyi(n: int, p: float, rng=None) -> Graph:
    """Independent coin per pair; makes no triangle-freeness promise."""
    if not 0 <= p <= 1:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    if rng is None:
        rng = np.random.default_rng(0)
    total = pair_count(n)
    hits = np.nonzero(rng.random(total) < p)[0]
    return Graph.from_edges(n, [index_to_pair(int(k), n) for k in hits])


def _bipartite_seed(n: int, edges: int) -> Graph:
    """First ``edges`` crossing pairs of the balanced split, lexicographically."""
    full = complete_bipartite((n + 1) // 2, n // 2, n=n)
    take = itertools.islice(full.edges(), edges)
    return Graph.from_edges(n, list(take))


def sample_uniform_triangle_free(
    n: int,
    edges: int,
    chain_steps: int | None = None,
    rng=None,
) -> Graph:
    """Approximately uniform triangle-free graph with exactly ``edges`` edges.

    Metropolis chain: propose swapping one uniform edge for one uniform
    non-edge, accept iff still triangle-free.  The proposal is symmetric on
    the fixed-size state space, so the stationary law is uniform on the
    chain's component.  Component connectivity is validated empirically
    (see the rejection sampler), not proven.  Default burn-in is
    50 * n * edges proposals.
    """
    cap = (n * n) // 4
    if not 0 <= edges <= cap:
        raise ValueError(f"no triangle-free graph on {n} vertices has {edges} edges (max {cap})")
    if rng is None:
        rng = np.random.default_rng(0)
    if chain_steps is None:
        chain_steps = 50 * n * edges
    g = _bipartite_seed(n, edges)
    if edges == 0 or chain_steps == 0:
        return g
    chain = MetropolisChain(g, rng)
    chain.run(chain_steps)
    return chain.graph()


class MetropolisChain:
    """Edge-swap walker over triangle-free graphs with a fixed edge count."""

    def __init__(self, start: Graph, rng: np.random.Generator, batch: int = 4096):
        self.n = start.n
        self.rows = list(start.adj)
        total = pair_count(self.n)
        eset = set(start.edge_indices())
        self.edges = sorted(eset)
        self.nonedges = [k for k in range(total) if k not in eset]
        self.epos = {k: i for i, k in enumerate(self.edges)}
        self.npos = {k: i for i, k in enumerate(self.nonedges)}
        self.rng = rng
        self.batch = batch
        self.accepted = 0
        self.proposed = 0

    def graph(self) -> Graph:
        return Graph(self.n, list(self.rows), validate=False)

    def run(self, proposals: int) -> None:
        ne, nn = len(self.edges), len(self.nonedges)
        if ne == 0 or nn == 0:
            return
        left = proposals
        while left:
            m = min(left, self.batch)
            eslots = self.rng.integers(0, ne, size=m)
            nslots = self.rng.integers(0, nn, size=m)
            for i in range(m):
                self._propose(int(eslots[i]), int(nslots[i]))
            left -= m
        self.proposed += proposals

    def _propose(self, eslot: int, nslot: int) -> None:
        rows = self.rows
        e = self.edges[eslot]
        f = self.nonedges[nslot]
        eu, ev = index_to_pair(e, self.n)
        fu, fv = index_to_pair(f, self.n)
        rows[eu] &= ~(1 << ev)
        rows[ev] &= ~(1 << eu)
        if rows[fu] & rows[fv]:
            rows[eu] |= 1 << ev
            rows[ev] |= 1 << eu
            return
        rows[fu] |= 1 << fv
        rows[fv] |= 1 << fu
        self.edges[eslot] = f
        self.nonedges[nslot] = e
        self.epos[f] = eslot
        self.npos[e] = nslot
        del self.epos[e]
        del self.npos[f]
        self.accepted += 1


def exact_rejection_sample(n: int, edges: int, rng=None, max_tries: int = 10**7) -> Graph:
    """Exactly uniform: draw edge sets uniformly, accept iff triangle-free.

    Only for n <= 7, where acceptance stays workable; the Metropolis chain
    is validated against this sampler and against full enumeration.
    """
    if n > _REJECTION_MAX_N:
        raise ValueError(f"rejection sampling is limited to n <= {_REJECTION_MAX_N}")
    cap = (n * n) // 4
    if not 0 <= edges <= cap:
        raise ValueError(f"no triangle-free graph on {n} vertices has {edges} edges (max {cap})")
    if rng is None:
        rng = np.random.default_rng(0)
    total = pair_count(n)
    for _ in range(max_tries):
        ids = rng.choice(total, size=edges, replace=False)
        rows = [0] * n
        ok = True
        for k in ids:
            u, v = index_to_pair(int(k), n)
            if rows[u] & rows[v]:
                ok = False
                break
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        if ok:
            return Graph(n, rows, validate=False)
    raise RuntimeError("rejection sampler exceeded its retry limit")


def enumerate_labeled_triangle_free(n: int, edges: int):
    """Yield every labeled triangle-free graph with the given edge count."""
    if n > _REJECTION_MAX_N:
        raise ValueError(f"exhaustive enumeration is limited to n <= {_REJECTION_MAX_N}")
    for combo in itertools.combinations(range(pair_count(n)), edges):
        rows = [0] * n
        ok = True
        for k in combo:
            u, v = index_to_pair(k, n)
            if rows[u] & rows[v]:
                ok = False
                break
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        if ok:
            yield Graph(n, rows, validate=False)


def count_labeled_triangle_free(n: int, edges: int) -> int:
    return sum(1 for _ in enumerate_labeled_triangle_free(n, edges))


@dataclass(frozen=True)
class SampleStats:
    """Scalar summary of one sampled graph, JSON-lines friendly."""

    edge_count: int
    avg_degree: float
    max_degree: int
    alpha_lo: int
    alpha_hi: int
    alpha_exact: bool
    seed: int | None = None

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "seed": self.seed,
                "edge_count": self.edge_count,
                "avg_degree": self.avg_degree,
                "max_degree": self.max_degree,
                "alpha_lo": self.alpha_lo,
                "alpha_hi": self.alpha_hi,
                "alpha_exact": self.alpha_exact,
            },
            sort_keys=True,
        )


def model_stats(g: Graph, mis_budget: int = DEFAULT_NODE_BUDGET, seed: int | None = None) -> SampleStats:
    """Degrees exactly, independence number exactly or as a budget interval."""
    res = max_independent_set(g, budget=mis_budget)
    degs = g.degrees()
    return SampleStats(
        edge_count=g.edge_count,
        avg_degree=2 * g.edge_count / g.n if g.n else 0.0,
        max_degree=max(degs) if degs else 0,
        alpha_lo=res.size,
        alpha_hi=res.upper_bound,
        alpha_exact=res.exact,
        seed=seed,
    )
