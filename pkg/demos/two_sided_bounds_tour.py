"""Tour of the two-sided pinned bounds on a handful of pins.

For each pin P we print the certified lower bound (when its slack is
positive), the exact pinned maximum from the search oracle, and the
independence upper bound n*alpha/2.  The exact value always lands inside
the sandwich.

Run: python demos/two_sided_bounds_tour.py
"""

from turanpin.bounds import bounds_report
from turanpin.graphs import Graph, cycle_graph, path_graph, star_graph, to_graph6
from turanpin.oracle import exact_ex
from turanpin.randmodels import derive_rng, triangle_free_process

N = 10

pins = [
    ("empty", Graph(N)),
    ("one edge", Graph.from_edges(N, [(0, 1)])),
    ("star K_{1,6}", star_graph(6, n=N)),
    ("path P_6", path_graph(6, n=N)),
    ("cycle C_5", cycle_graph(5, n=N)),
    ("random process pin", triangle_free_process(N, steps=8, rng=derive_rng(7)).graph),
]

print(f"n = {N}, Mantel cap = {N * N // 4}")
print(f"{'pin':>20}  {'e(P)':>4}  {'alpha':>5}  {'lower':>8}  {'exact':>5}  {'upper':>5}")
for name, p in pins:
    rep = bounds_report(p)
    res = exact_ex(p)
    lower = f"{rep.lower_bound:8.3f}" if rep.lower_bound_defined else "   undef"
    assert res.proved
    if rep.lower_bound_defined:
        assert rep.lower_bound <= res.value + 1e-9
    assert res.value <= float(rep.upper_bound)
    print(
        f"{name:>20}  {p.edge_count:>4}  {rep.alpha_hi:>5}  {lower}  "
        f"{res.value:>5}  {float(rep.upper_bound):>5.1f}"
    )
    print(f"{'':>20}  witness {to_graph6(res.witness)}")
