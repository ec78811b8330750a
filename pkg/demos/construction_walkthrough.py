"""Step-by-step trace of the bipartite-slice construction for one pin.

The pipeline: forbid the pairs with a common pin-neighbor (B1), restrict
the balanced complete bipartite pair set to the survivors (S'), solve a
maximum independent set in the pair-conflict graph restricted to S', and
add the chosen pairs to the pin.  The result is triangle-free, contains
the pin, and its size clears the psi-based floor when that is defined.

Run: python demos/construction_walkthrough.py
"""

from turanpin.conflict import build_aux_slice, build_b1, is_admissible
from turanpin.construct import certify, construct_admissible, formula_floor
from turanpin.graphs import (
    balanced_bipartition,
    count_cherries,
    crossing_pairs,
    cycle_graph,
    to_graph6,
)
from turanpin.mis import max_independent_set

p = cycle_graph(5, n=12)
n = p.n
print(f"pin: C_5 padded to n={n}   e(P)={p.edge_count}   cherries={count_cherries(p)}")

b1 = build_b1(p)
print(f"B1 (pairs sharing a pin neighbor): {len(b1)} pairs, cap is the cherry count")

left, right = balanced_bipartition(n)
s = crossing_pairs(left, right, n)
aux = build_aux_slice(p, s)
print(f"S: balanced bipartite pair set of size {len(s)} = floor(n^2/4)")
print(f"S' after dropping pin edges and B1: {len(aux.s_prime)} pairs")
print(f"conflict edges inside the slice: {aux.slice_edge_count()} (slice is triangle-free)")

mis = max_independent_set(aux.slice_graph())
assert mis.exact
print(f"max independent set in the slice: {mis.size} pairs")

result = construct_admissible(p, mode="exact-mis")
cert = certify(result, p)
assert cert.all_ok
floor = formula_floor(p)
print(f"constructed graph: {result.g.edge_count} edges = e(P) + {result.i_size} added pairs")
print(f"psi floor on added pairs: {floor:.3f}" if floor is not None else "psi floor undefined")
print(f"graph6: {to_graph6(result.g)}")

report = is_admissible(p, result.g)
print(f"admissibility re-check: {bool(report)} (conditions failed: {list(report.failed_conditions)})")
