"""The closed-form volume and lattice-point formulas, checked against the
brute-force counter on the spot.

Both formulas sum over weak compositions j of |E| - n that dominate the
shifted outdegree vector, weighting a flow count at netflow (j - out, 0):

  volume:  multinomial(|E|-n; j) * a_1^{j_1} ... a_n^{j_n}
  count:   prod_i multiset_coeff(a_i - in(i), j_i)

Run:  python demos/02_closed_form_formulas.py
"""

from flowpoly import (
    FlowInstance,
    NetflowVector,
    complete_graph,
    count_flows,
    degree_stats,
    dominant_compositions,
    in_plus_c_netflow,
    lidskii_count,
    lidskii_count_c_form,
    lidskii_volume,
    normalized_volume_oracle,
)

k4 = complete_graph(4)
stats = degree_stats(k4)
m, n = k4.edge_count, k4.vertex_count - 1
print(f"complete graph: m = {m} edges, n = {n} non-sink vertices")
print(f"out - 1 = {stats.out_shift}")
print(f"compositions of {m - n} dominating {stats.out_shift}:")
for j in dominant_compositions(m - n, stats.out_shift):
    print(f"  {j}")
print()

a = NetflowVector((1, 1, 0, -2))
print(f"netflow {a.entries}")
print(f"  volume formula : {lidskii_volume(k4, a)}")
print(f"  volume oracle  : {normalized_volume_oracle(FlowInstance(k4, a))}")
print(f"  count formula  : {lidskii_count(k4, a)}")
print(f"  count oracle   : {count_flows(FlowInstance(k4, a))}")
print()

# The c-form: fix positive integers c and evaluate the count at the netflow
# a_i = indeg(i) - 1 + c_i using rising factorials in c alone.
for c in ((1, 1, 1), (3, 2, 2)):
    a = in_plus_c_netflow(k4, c)
    print(f"c = {c}  ->  netflow {a.entries}")
    print(f"  c-form formula : {lidskii_count_c_form(k4, c)}")
    print(f"  count oracle   : {count_flows(FlowInstance(k4, a))}")
print()

# The count formula needs the generalized (signed) multiset coefficient
# when a_i - in(i) goes nonpositive; this tiny graph is the sharpest case.
from flowpoly import DirectedMultigraph, multiset_coeff

tight = DirectedMultigraph(3, ((1, 2), (1, 2), (2, 3), (2, 3)))
zero = NetflowVector((0, 0, 0))
print("double path, zero netflow: one flow, and the formula's two terms")
print(f"  multiset_coeff(-1, 1) = {multiset_coeff(-1, 1)} (signed!)")
print(f"  count formula = {lidskii_count(tight, zero)}")
print(f"  count oracle  = {count_flows(FlowInstance(tight, zero))}")
