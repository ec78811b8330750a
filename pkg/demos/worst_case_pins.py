"""Which pin with at most m edges is hardest to extend?

Enumerates all pins with <= m edges up to isomorphism, solves each one
exactly, and prints the table sorted by value.  At m=5, n=10 the 5-cycle
beats the 5-edge star: spreading the pin's edges around a cycle costs the
extender more than concentrating them in a star.

Run: python demos/worst_case_pins.py
"""

from turanpin.graphs import cycle_graph, star_graph, to_graph6
from turanpin.oracle import canonical_key, worst_case_ex

M, N = 5, 10

result = worst_case_ex(M, N)
print(f"pins with <= {M} edges, ambient n = {N}, Mantel cap {N * N // 4}")
print(f"minimum pinned value: {result.value}  (minimizer {to_graph6(result.minimizer)})\n")

cycle_key = canonical_key(cycle_graph(5))
star_key = canonical_key(star_graph(5))
print(f"{'pin (graph6)':>14} {'support':>7} {'edges':>5} {'value':>5}  note")
for row in sorted(result.rows, key=lambda r: (r.value, r.edges)):
    key = canonical_key(row.pin)
    note = "5-cycle" if key == cycle_key else "5-edge star" if key == star_key else ""
    print(f"{to_graph6(row.pin):>14} {row.support:>7} {row.edges:>5} {row.value:>5}  {note}")
