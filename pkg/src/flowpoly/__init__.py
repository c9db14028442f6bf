"""Exact-arithmetic toolkit for flow polytopes: Kostant flow counting,
Ehrhart polynomials, closed-form volume and lattice-point formulas,
reduction trees, and unimodular dissections, all cross-checkable against
brute-force oracles."""

from .multigraph import (
    DegreeStats,
    DirectedMultigraph,
    GraphFormatError,
    NetflowVector,
    apply_incidence,
    attach_source,
    build_gm,
    complete_graph,
    degree_stats,
    format_graph,
    incidence_matrix,
    parse_graph,
    path_graph,
    read_graph,
    strip_source,
    write_graph,
)
from .kostant import (
    EhrhartPolynomial,
    FlowCounter,
    FlowInstance,
    count_flows,
    ehrhart_polynomial,
    enumerate_flows,
    iter_flows,
    normalized_volume_oracle,
)
from .lidskii import (
    dominant_compositions,
    dominates,
    in_plus_c_netflow,
    lidskii_count,
    lidskii_count_c_form,
    lidskii_volume,
    multinomial,
    multiset_coeff,
    rising_factorial_over_fact,
)
from .geometry import (
    AmbientLattice,
    SimplexCell,
    VerificationReport,
    contains_flow,
    integral_kernel_basis,
    is_unimodular,
    path_flow_vertices,
    simplex_is_unimodular,
    unit_source_sink_netflow,
    verify_dissection,
    verify_in_vector_bijection,
    verify_integral_equivalence,
)
from .reduction import (
    DEFAULT_NODE_CAP,
    LeafShapeError,
    NodeCapExceeded,
    NoncrossingTree,
    PhiMap,
    ProvenancedGraph,
    ReductionStep,
    ReductionTree,
    canonical_reduction_tree,
    census_from_json,
    census_to_json,
    enumerate_noncrossing_trees,
    export_dot,
    iter_reduction_leaves,
    leaf_census,
    phi_map,
    reduce_at_vertex,
    reduction_tree_with_source,
    unimodular_dissection,
    zero_vertex_dissection_children,
)

__version__ = "0.1.0"
