"""Exact values, bounds, and random models for pinned triangle-free extremal problems.

Given a triangle-free graph P on labeled vertices {0, ..., n-1}, the central
quantity is the largest edge count of a triangle-free graph on the same
vertex set that contains P as a labeled subgraph.  The package computes this
exactly for small instances, brackets it with closed-form bounds for large
ones, builds certified near-extremal graphs, and samples from two random
triangle-free models.
"""

from turanpin.graphs import (
    DimensionMismatchError,
    Graph,
    GraphFormatError,
    complete_bipartite,
    count_cherries,
    cycle_graph,
    find_triangle,
    from_graph6,
    is_triangle_free,
    matching_graph,
    path_graph,
    read_graph,
    star_graph,
    subgraph_of,
    to_graph6,
    write_graph,
)

__version__ = "0.1.0"

__all__ = [
    "DimensionMismatchError",
    "Graph",
    "GraphFormatError",
    "complete_bipartite",
    "count_cherries",
    "cycle_graph",
    "find_triangle",
    "from_graph6",
    "is_triangle_free",
    "matching_graph",
    "path_graph",
    "read_graph",
    "star_graph",
    "subgraph_of",
    "to_graph6",
    "write_graph",
]
