"""Bitset-backed labeled simple graphs on vertex set {0, ..., n-1}.

Adjacency is stored as one Python int per vertex: bit w of ``adj[v]`` is set
iff vw is an edge.  Arbitrary-precision ints make the same code work for any
n; the hot paths (triangle tests, neighborhood intersections) stay single
machine ops for n <= 64 and word-parallel beyond.

Graphs are immutable after construction and safe to share across workers.
Vertex pairs {u, v} with u < v are encoded as flat indices in lexicographic
order ("pair index") so that sets of candidate edges can live in plain
int-keyed containers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator


class GraphFormatError(ValueError):
    """Raised for malformed graph files (bad header, bad vertex, loop)."""


class DimensionMismatchError(ValueError):
    """Raised when two graphs expected on the same vertex set differ in n."""


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable simple graph with bitset adjacency rows."""

    __slots__ = ("n", "adj", "_edge_count")

    def __init__(self, n: int, adj: Iterable[int] = (), validate: bool = True):
        rows = tuple(adj) if adj else tuple([0] * n)
        if validate:
            if n < 0:
                raise ValueError("vertex count must be >= 0")
            if len(rows) != n:
                raise ValueError(f"expected {n} adjacency rows, got {len(rows)}")
            full = (1 << n) - 1
            for v, row in enumerate(rows):
                if row >> n:
                    raise ValueError(f"adjacency row {v} has bits beyond vertex {n - 1}")
                if row & (1 << v):
                    raise ValueError(f"self-loop at vertex {v}")
                row &= full
            for v, row in enumerate(rows):
                for w in iter_bits(row):
                    if not rows[w] & (1 << v):
                        raise ValueError(f"asymmetric adjacency between {v} and {w}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adj", rows)
        object.__setattr__(self, "_edge_count", None)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n, validate=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, rows, validate=False)

    @property
    def edge_count(self) -> int:
        count = self._edge_count
        if count is None:
            count = sum(row.bit_count() for row in self.adj) // 2
            object.__setattr__(self, "_edge_count", count)
        return count

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] & (1 << v))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def neighbors(self, v: int) -> Iterator[int]:
        return iter_bits(self.adj[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in iter_bits(self.adj[u] >> (u + 1)):
                yield (u, v + u + 1)

    def edge_indices(self) -> Iterator[int]:
        """Edges as flat pair indices, increasing."""
        for u, v in self.edges():
            yield pair_to_index(u, v, self.n)

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        """New graph with the given edges added."""
        rows = list(self.adj)
        for u, v in extra:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(self.n, rows, validate=False)

    def padded(self, n: int) -> "Graph":
        """Embed into a larger vertex set by appending isolated vertices."""
        if n < self.n:
            raise ValueError("cannot shrink a graph by padding")
        return Graph(n, list(self.adj) + [0] * (n - self.n), validate=False)

    def degree_summary(self) -> "DegreeSummary":
        degs = self.degrees()
        e = self.edge_count
        avg = Fraction(2 * e, self.n) if self.n else Fraction(0)
        return DegreeSummary(
            degrees=degs,
            min_degree=min(degs) if degs else 0,
            max_degree=max(degs) if degs else 0,
            avg_degree=avg,
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


@dataclass(frozen=True)
class DegreeSummary:
    """Degree list with min/max and the exact average 2e/n."""

    degrees: list[int]
    min_degree: int
    max_degree: int
    avg_degree: Fraction

    @property
    def avg_degree_float(self) -> float:
        return float(self.avg_degree)


# ---------------------------------------------------------------------------
# Pair indexing: {u, v} with u < v  <->  flat index in [0, n(n-1)/2)


def pair_to_index(u: int, v: int, n: int) -> int:
    """Flat index of the unordered pair {u, v}, lexicographic in (u, v)."""
    if u > v:
        u, v = v, u
    if u == v or v >= n or u < 0:
        raise ValueError(f"invalid pair ({u}, {v}) for n={n}")
    return u * n - u * (u + 1) // 2 + (v - u - 1)

def index_to_pair(k: int, n: int) -> tuple[int, int]:
    """Inverse of :func:`pair_to_index`."""
    total = n * (n - 1) // 2
    if not 0 <= k < total:
        raise ValueError(f"pair index {k} out of range for n={n}")
    # u is the largest value with u*n - u(u+1)/2 <= k; isqrt gets within one.
    disc = (2 * n - 1) ** 2 - 8 * k
    u = (2 * n - 1 - math.isqrt(disc)) // 2
    while u * n - u * (u + 1) // 2 > k:
        u -= 1
    while (u + 1) * n - (u + 1) * (u + 2) // 2 <= k:
        u += 1
    v = k - (u * n - u * (u + 1) // 2) + u + 1
    return (u, v)


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


# ---------------------------------------------------------------------------
# Triangle primitives


def find_triangle(g: Graph) -> tuple[int, int, int] | None:
    """Some triangle (u, v, w), or None.  Checks every edge's endpoint rows."""
    adj = g.adj
    for u in range(g.n):
        row = adj[u] >> (u + 1)
        for v in iter_bits(row):
            common = adj[u] & adj[u + 1 + v]
            if common:
                w = (common & -common).bit_length() - 1
                return (u, u + 1 + v, w)
    return None


def is_triangle_free(g: Graph) -> bool:
    """True iff no three vertices are pairwise adjacent."""
    return find_triangle(g) is None


def count_cherries(g: Graph) -> int:
    """Number of two-edge paths: sum over vertices of C(deg, 2)."""
    return sum(math.comb(d, 2) for d in g.degrees())


def cherry_identity_holds(g: Graph) -> bool:
    """Edge count plus cherry count equals half the sum of squared degrees."""
    return 2 * (g.edge_count + count_cherries(g)) == sum(d * d for d in g.degrees())


def subgraph_of(p: Graph, g: Graph) -> bool:
    """Labeled containment: every edge of p is an edge of g (no relabeling)."""
    if p.n != g.n:
        raise DimensionMismatchError(f"vertex counts differ: {p.n} != {g.n}")
    return all(prow & ~grow == 0 for prow, grow in zip(p.adj, g.adj))


def components(g: Graph) -> list[int]:
    """Connected components as vertex bitmasks, ordered by lowest vertex."""
    comps = []
    rem = (1 << g.n) - 1
    while rem:
        comp = rem & -rem
        frontier = comp
        while frontier:
            grown = 0
            for v in iter_bits(frontier):
                grown |= g.adj[v]
            frontier = grown & rem & ~comp
            comp |= frontier
        comps.append(comp)
        rem &= ~comp
    return comps


# ---------------------------------------------------------------------------
# Small named constructions used throughout tests and demos


def cycle_graph(k: int, n: int | None = None) -> Graph:
    """Cycle on vertices 0..k-1, optionally padded with isolated vertices."""
    g = Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])
    return g.padded(n) if n is not None else g


def path_graph(k: int, n: int | None = None) -> Graph:
    """Path with k vertices (k - 1 edges)."""
    g = Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)])
    return g.padded(n) if n is not None else g


def star_graph(m: int, n: int | None = None) -> Graph:
    """Star with center 0 and m leaves."""
    g = Graph.from_edges(m + 1, [(0, i) for i in range(1, m + 1)])
    return g.padded(n) if n is not None else g


def complete_bipartite(a: int, b: int, n: int | None = None) -> Graph:
    """Complete bipartite graph with parts 0..a-1 and a..a+b-1."""
    g = Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    return g.padded(n) if n is not None else g


def matching_graph(k: int, n: int | None = None) -> Graph:
    """Perfect matching on 2k vertices: edges (0,1), (2,3), ..."""
    g = Graph.from_edges(2 * k, [(2 * i, 2 * i + 1) for i in range(k)])
    return g.padded(n) if n is not None else g


def balanced_bipartition(n: int) -> tuple[int, int]:
    """Default split as vertex masks: {0..ceil(n/2)-1} versus the rest."""
    a = (n + 1) // 2
    left = (1 << a) - 1
    right = ((1 << n) - 1) ^ left
    return left, right


def crossing_pairs(left_mask: int, right_mask: int, n: int) -> list[int]:
    """Pair indices of all pairs with one endpoint on each side."""
    out = []
    for u in iter_bits(left_mask):
        for v in iter_bits(right_mask):
            out.append(pair_to_index(u, v, n))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# graph6 encoding (bit-exact standard format) and plain edge lists


def _g6_encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return chr(126) + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= 68719476735:
        return chr(126) + chr(126) + "".join(
            chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0)
        )
    raise ValueError("graph too large for graph6")


def _g6_decode_n(s: str) -> tuple[int, int]:
    """Return (n, chars consumed)."""
    if not s:
        raise GraphFormatError("empty graph6 string")
    if s[0] != "~":
        return ord(s[0]) - 63, 1
    if len(s) >= 2 and s[1] != "~":
        if len(s) < 4:
            raise GraphFormatError("truncated graph6 size field")
        n = 0
        for c in s[1:4]:
            n = (n << 6) | (ord(c) - 63)
        return n, 4
    if len(s) < 8:
        raise GraphFormatError("truncated graph6 size field")
    n = 0
    for c in s[2:8]:
        n = (n << 6) | (ord(c) - 63)
    return n, 8


def to_graph6(g: Graph) -> str:
    """Standard graph6 line: size field then the upper triangle, column-major."""
    n = g.n
    bits = []
    for v in range(1, n):
        col = g.adj[v]
        for u in range(v):
            bits.append(1 if col & (1 << u) else 0)
    while len(bits) % 6:
        bits.append(0)
    chunks = []
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i : i + 6]:
            val = (val << 1) | b
        chunks.append(chr(val + 63))
    return _g6_encode_n(n) + "".join(chunks)


def from_graph6(line: str) -> Graph:
    """Decode one graph6 line (optional ``>>graph6<<`` header tolerated)."""
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    n, consumed = _g6_decode_n(s)
    body = s[consumed:]
    need = pair_count(n)
    nbytes = (need + 5) // 6
    if len(body) != nbytes:
        raise GraphFormatError(
            f"graph6 body has {len(body)} chars, expected {nbytes} for n={n}"
        )
    bits = []
    for c in body:
        val = ord(c) - 63
        if not 0 <= val < 64:
            raise GraphFormatError(f"invalid graph6 character {c!r}")
        for s6 in (5, 4, 3, 2, 1, 0):
            bits.append((val >> s6) & 1)
    if any(bits[need:]):
        raise GraphFormatError("nonzero padding bits in graph6 body")
    rows = [0] * n
    i = 0
    for v in range(1, n):
        for u in range(v):
            if bits[i]:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            i += 1
    return Graph(n, rows, validate=False)


def to_edge_list_text(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def from_edge_list_text(text: str) -> Graph:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("empty edge-list file")
    header = lines[0].split()
    if len(header) != 2:
        raise GraphFormatError(f"malformed header {lines[0]!r}, expected 'n m'")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError as exc:
        raise GraphFormatError(f"malformed header {lines[0]!r}") from exc
    if n < 0 or m < 0:
        raise GraphFormatError(f"negative counts in header {lines[0]!r}")
    if len(lines) - 1 != m:
        raise GraphFormatError(f"header promises {m} edges, file has {len(lines) - 1}")
    rows = [0] * n
    seen = set()
    dupes = 0
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"malformed edge line {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphFormatError(f"malformed edge line {ln!r}") from exc
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range in edge ({u}, {v}), n={n}")
        key = (min(u, v), max(u, v))
        if key in seen:
            dupes += 1
            continue
        seen.add(key)
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    if dupes:
        warnings.warn(f"deduplicated {dupes} repeated edge(s)", stacklevel=2)
    return Graph(n, rows, validate=False)


def write_graph(g: Graph, path, fmt: str | None = None) -> None:
    """Write a graph file; format inferred from the extension unless given."""
    fmt = fmt or _infer_format(path)
    with open(path, "w") as fh:
        if fmt == "graph6":
            fh.write(to_graph6(g) + "\n")
        elif fmt == "edge-list":
            fh.write(to_edge_list_text(g))
        else:
            raise ValueError(f"unknown graph format {fmt!r}")


def read_graph(path, fmt: str | None = None) -> Graph:
    """Read a graph file; format inferred from the extension unless given."""
    fmt = fmt or _infer_format(path)
    with open(path) as fh:
        text = fh.read()
    if fmt == "graph6":
        for line in text.splitlines():
            if line.strip():
                return from_graph6(line)
        raise GraphFormatError(f"no graph6 line in {path}")
    if fmt == "edge-list":
        return from_edge_list_text(text)
    raise ValueError(f"unknown graph format {fmt!r}")


def _infer_format(path) -> str:
    name = str(path)
    if name.endswith((".g6", ".graph6")):
        return "graph6"
    if name.endswith((".el", ".edges", ".txt")):
        return "edge-list"
    raise ValueError(f"cannot infer graph format from {name!r}; pass fmt=")
