"""Flow polytopes from scratch: build a graph, count its integer flows,
enumerate them, and read off the Ehrhart polynomial and normalized volume.

Run:  python demos/01_counting_and_ehrhart.py
"""

from flowpoly import (
    FlowInstance,
    NetflowVector,
    complete_graph,
    count_flows,
    degree_stats,
    ehrhart_polynomial,
    enumerate_flows,
    format_graph,
    normalized_volume_oracle,
)

k4 = complete_graph(4)
print("The complete graph on four vertices, all edges oriented upward:")
print(format_graph(k4))

stats = degree_stats(k4)
print(f"outdegrees {stats.outdeg}, indegrees {stats.indeg}")
print(f"shifted statistics: out-1 = {stats.out_shift}, in-1 = {stats.in_shift}")
print()

# One unit of flow enters at vertex 1 and leaves at vertex 4.  The integer
# flows are exactly the directed 1 -> 4 paths.
inst = FlowInstance(k4, NetflowVector((1, 0, 0, -1)))
print("netflow (1, 0, 0, -1): one unit from vertex 1 to vertex 4")
print(f"integer flows: {count_flows(inst)}")
for flow in enumerate_flows(inst):
    edges = [k4.edges[e] for e, v in enumerate(flow) if v]
    print(f"  {flow}   path {edges}")
print()

# Dilating the netflow t-fold gives a polynomial count: the Ehrhart
# polynomial of the flow polytope.
poly = ehrhart_polynomial(inst)
print(f"Ehrhart coefficients (low degree first): {poly.coefficient_strings()}")
print("values at t = 0..5:", [poly.value_at(t) for t in range(6)])
print("direct counts     :", [count_flows(inst.dilate(t)) for t in range(6)])
print()

# The leading coefficient carries the volume: degree! * leading is the
# normalized volume, the count of smallest lattice simplices.
print(f"normalized volume at (1,0,0,-1): {normalized_volume_oracle(inst)}")
bigger = FlowInstance(k4, NetflowVector((1, 1, 0, -2)))
print(f"normalized volume at (1,1,0,-2): {normalized_volume_oracle(bigger)}")
print(f"flow count at        (1,1,0,-2): {count_flows(bigger)}")
