"""Conflict structure around a pinned triangle-free graph.

Adding a set I of vertex pairs to a triangle-free pin P can create a
triangle in exactly three ways, classified by how many added pairs the
triangle uses:

  one    the added pair's endpoints share a P-neighbor ("b1" pairs);
  two    two added pairs share a vertex and their outer endpoints form a
         P-edge ("b2" adjacency between pairs);
  three  the added pairs themselves contain a triangle ("b3").

So G = P + I is triangle-free iff I avoids b1, is independent under b2
adjacency, and is triangle-free as a graph.  This module builds these
objects; the pair-vertex universe (all of C([n],2)) is never materialized,
only its restriction to a given candidate set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from turanpin.graphs import (
    DimensionMismatchError,
    Graph,
    find_triangle,
    index_to_pair,
    is_triangle_free,
    iter_bits,
    pair_count,
    pair_to_index,
    subgraph_of,
)


def build_b1(p: Graph) -> set[int]:
    """Pair ids whose endpoints have a common neighbor in p.

    Adding such a pair closes a triangle with two p-edges.  The size is at
    most the cherry count of p (each violating pair sits inside some
    neighborhood, and neighborhoods are independent sets here).
    """
    tri = find_triangle(p)
    if tri is not None:
        raise ValueError(f"pin must be triangle-free, found triangle {tri}")
    out: set[int] = set()
    for w in range(p.n):
        row = p.adj[w]
        for u in iter_bits(row):
            for dv in iter_bits(row >> (u + 1)):
                out.add(pair_to_index(u, u + 1 + dv, p.n))
    return out


def b2_neighbors(p: Graph, e1: int) -> list[int]:
    """Pairs that together with e1 and one p-edge would close a triangle.

    For e1 = {u, v}: every {u, w} with w a p-neighbor of v (w != u), and
    every {v, w} with w a p-neighbor of u (w != v).  Symmetric as a
    relation; never contains e1 itself; free of duplicates.
    """
    u, v = index_to_pair(e1, p.n)
    out = []
    for w in iter_bits(p.adj[v] & ~(1 << u)):
        out.append(pair_to_index(u, w, p.n))
    for w in iter_bits(p.adj[u] & ~(1 << v)):
        out.append(pair_to_index(v, w, p.n))
    out.sort()
    return out


def b2_edge_total(p: Graph) -> int:
    """Edge count of the full pair-conflict graph, summed over all pairs.

    Each p-edge contributes one conflict per outside vertex, so this comes
    out to e(p) * (n - 2); kept as a computed quantity so tests can compare
    against that closed form instead of assuming it.
    """
    return sum(len(b2_neighbors(p, k)) for k in range(pair_count(p.n))) // 2


@dataclass(frozen=True)
class AuxSlice:
    """Conflict graph restricted to surviving candidate pairs.

    ``s_prime`` lists candidate pair ids (sorted) that avoid both the pin's
    own edges and the b1 set; ``b2_adj`` is the b2 adjacency among them as
    bitsets over positions in ``s_prime``.
    """

    n: int
    base: Graph
    forbidden: frozenset[int]
    s_prime: tuple[int, ...]
    b2_adj: tuple[int, ...]

    def slice_graph(self) -> Graph:
        return Graph(len(self.s_prime), self.b2_adj, validate=False)

    def slice_edge_count(self) -> int:
        return sum(row.bit_count() for row in self.b2_adj) // 2

    def pairs_from_mask(self, mask: int) -> list[tuple[int, int]]:
        """Decode a vertex mask of the slice graph back to vertex pairs."""
        return [index_to_pair(self.s_prime[i], self.n) for i in iter_bits(mask)]

    def to_debug_json(self) -> str:
        degs = [row.bit_count() for row in self.b2_adj]
        hist: dict[int, int] = {}
        for d in degs:
            hist[d] = hist.get(d, 0) + 1
        return json.dumps(
            {
                "n": self.n,
                "base_edges": self.base.edge_count,
                "forbidden_size": len(self.forbidden),
                "slice_size": len(self.s_prime),
                "slice_edges": self.slice_edge_count(),
                "slice_degree_histogram": {str(k): hist[k] for k in sorted(hist)},
            },
            indent=2,
        )


def build_aux_slice(p: Graph, s: Iterable[int], check_claims: bool = True) -> AuxSlice:
    """Restrict the conflict structure to candidate pairs s.

    s must be the edge set (as pair ids) of a triangle-free graph.  The
    returned slice drops pairs that are p-edges or b1 pairs, then wires the
    b2 adjacency among the survivors.  With ``check_claims`` the slice is
    re-verified to be triangle-free, which holds for every pin.
    """
    n = p.n
    s_ids = set(s)
    s_graph = Graph.from_edges(n, [index_to_pair(k, n) for k in s_ids])
    tri = find_triangle(s_graph)
    if tri is not None:
        raise ValueError(f"candidate pair set spans triangle {tri}")
    forbidden = frozenset(build_b1(p) | set(p.edge_indices()))
    s_prime = tuple(sorted(s_ids - forbidden))
    pos = {k: i for i, k in enumerate(s_prime)}
    rows = [0] * len(s_prime)
    for i, k in enumerate(s_prime):
        for f in b2_neighbors(p, k):
            j = pos.get(f)
            if j is not None:
                rows[i] |= 1 << j
    out = AuxSlice(
        n=n,
        base=p,
        forbidden=forbidden,
        s_prime=s_prime,
        b2_adj=tuple(rows),
    )
    if check_claims:
        tri = find_triangle(out.slice_graph())
        if tri is not None:  # cannot happen for a triangle-free pin
            raise RuntimeError(f"conflict slice has triangle at positions {tri}")
    return out


@dataclass(frozen=True)
class AdmissibilityReport:
    """Verdict on G versus pin P, with the reason when it fails.

    ``admissible`` is the direct check (P contained in G and G triangle
    free).  The three condition fields describe the added pairs I = G - P:
    a b1 hit, a b2-adjacent pair of added pairs, or a triangle inside I.
    Their conjunction provably equals triangle-freeness of P + I, and the
    builder re-checks that equality on every call.
    """

    admissible: bool
    contains_base: bool
    triangle_free: bool
    added_pairs: tuple[int, ...]
    failed_conditions: tuple[str, ...]
    b1_violation: int | None
    b2_violation: tuple[int, int] | None
    b3_violation: tuple[int, int, int] | None

    def __bool__(self) -> bool:
        return self.admissible

    def to_json_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "contains_base": self.contains_base,
            "triangle_free": self.triangle_free,
            "added_pair_count": len(self.added_pairs),
            "failed_conditions": list(self.failed_conditions),
            "b1_violation": self.b1_violation,
            "b2_violation": list(self.b2_violation) if self.b2_violation else None,
            "b3_violation": list(self.b3_violation) if self.b3_violation else None,
        }


def is_admissible(p: Graph, g: Graph) -> AdmissibilityReport:
    """Check g against pin p and explain any failure.

    Also exercises the decomposition argument: the three added-pair
    conditions must agree with a direct triangle test on p plus the added
    pairs, in both directions.
    """
    if p.n != g.n:
        raise DimensionMismatchError(f"vertex counts differ: {p.n} != {g.n}")
    if not is_triangle_free(p):
        raise ValueError("pin must be triangle-free")
    n = p.n
    contains = subgraph_of(p, g)
    added = tuple(sorted(set(g.edge_indices()) - set(p.edge_indices())))
    added_edges = [index_to_pair(k, n) for k in added]

    b1 = build_b1(p)
    b1_hit = next((k for k in added if k in b1), None)

    added_set = set(added)
    b2_hit = None
    for k in added:
        for f in b2_neighbors(p, k):
            if f in added_set:
                b2_hit = (k, f)
                break
        if b2_hit:
            break

    b3_hit = find_triangle(Graph.from_edges(n, added_edges))

    failed = tuple(
        name
        for name, hit in (("b1", b1_hit), ("b2", b2_hit), ("b3", b3_hit))
        if hit is not None
    )

    union_ok = is_triangle_free(p.with_edges(added_edges))
    if union_ok != (not failed):
        raise RuntimeError(
            "condition decomposition disagrees with the direct triangle test"
        )

    g_ok = union_ok if contains else is_triangle_free(g)
    return AdmissibilityReport(
        admissible=contains and g_ok,
        contains_base=contains,
        triangle_free=g_ok,
        added_pairs=added,
        failed_conditions=failed,
        b1_violation=b1_hit,
        b2_violation=b2_hit,
        b3_violation=b3_hit,
    )
