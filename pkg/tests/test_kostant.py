"""Brute-force counting oracle, Ehrhart interpolation, normalized volume."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from flowpoly.kostant import (
    EhrhartPolynomial,
    FlowCounter,
    FlowInstance,
    count_flows,
    ehrhart_polynomial,
    enumerate_flows,
    normalized_volume_oracle,
)
from flowpoly.multigraph import DirectedMultigraph, NetflowVector, complete_graph, path_graph
from flowpoly.verify import iter_family


def source_sink_paths(graph):
    """Independent reference: directed paths first vertex -> last vertex,
    as edge index sets."""
    paths = []

    def walk(v, used):
        if v == graph.last_vertex:
            paths.append(frozenset(used))
            return
        for e in graph.out_edges_at(v):
            walk(graph.edges[e][1], used + [e])

    walk(graph.first_vertex, [])
    return paths


def inst(graph, entries):
    return FlowInstance(graph, NetflowVector(tuple(entries)))


class TestCountFlows:
    def test_k4_unit_flow_counts_paths(self):
        k4 = complete_graph(4)
        expected = len(source_sink_paths(k4))
        assert expected == 4
        assert count_flows(inst(k4, (1, 0, 0, -1))) == 4
        assert count_flows(inst(k4, (1, 0, 0, -1)), memoize=False) == 4

    def test_zero_netflow_single_flow(self):
        for g in (complete_graph(4), path_graph(3), complete_graph(5)):
            zero = (0,) * g.vertex_count
            assert count_flows(inst(g, zero)) == 1

    def test_k4_seven_flows(self):
        assert count_flows(inst(complete_graph(4), (1, 1, 0, -2))) == 7

    def test_infeasible_is_zero(self):
        # vertex 2 has supply but no outgoing edge
        g = DirectedMultigraph(3, ((1, 3),))
        assert count_flows(inst(g, (1, 1, -2))) == 0
        # negative interior demand that nothing can absorb
        assert count_flows(inst(path_graph(3), (0, -1, 1))) == 0

    def test_outside_nice_chamber(self):
        # netflow with a negative interior entry still counts exactly
        g = DirectedMultigraph(3, ((1, 2), (1, 2), (2, 3), (2, 3)))
        assert count_flows(inst(g, (1, -1, 0))) == 2
        assert count_flows(inst(g, (1, -1, 0)), memoize=False) == 2

    def test_memoized_matches_naive_exhaustively(self):
        # small exhaustive slice of the agreement invariant
        from itertools import product

        for g in iter_family(4, 6):
            counter = FlowCounter(g)
            n = g.vertex_count - 1
            for head in product(range(3), repeat=n):
                a = NetflowVector.completing(head)
                assert counter.count(a) == count_flows(FlowInstance(g, a), memoize=False)

    @settings(deadline=None, max_examples=40)
    @given(st.data())
    def test_memoized_matches_naive_random(self, data):
        graphs = list(iter_family(5, 8))
        g = data.draw(st.sampled_from(graphs))
        head = data.draw(
            st.lists(st.integers(0, 3), min_size=g.vertex_count - 1, max_size=g.vertex_count - 1)
        )
        a = NetflowVector.completing(head)
        assert count_flows(FlowInstance(g, a)) == count_flows(FlowInstance(g, a), memoize=False)


class TestEnumerateFlows:
    def test_single_edge(self):
        g = DirectedMultigraph(2, ((1, 2),))
        assert enumerate_flows(inst(g, (1, -1))) == [(1,)]

    def test_k4_paths(self):
        k4 = complete_graph(4)
        flows = enumerate_flows(inst(k4, (1, 0, 0, -1)))
        assert len(flows) == 4
        expected = {frozenset(i for i, v in enumerate(f) if v) for f in flows}
        assert expected == set(source_sink_paths(k4))
        assert all(set(f) <= {0, 1} for f in flows)

    def test_zero_flow(self):
        k4 = complete_graph(4)
        assert enumerate_flows(inst(k4, (0, 0, 0, 0))) == [(0,) * 6]

    def test_length_matches_count(self):
        for g in (complete_graph(4), path_graph(4)):
            for head in ((1, 1, 0), (2, 0, 1), (0, 0, 0)):
                a = NetflowVector.completing(head)
                assert len(enumerate_flows(FlowInstance(g, a))) == count_flows(FlowInstance(g, a))


class TestEhrhart:
    def test_k4_unit(self):
        poly = ehrhart_polynomial(inst(complete_graph(4), (1, 0, 0, -1)))
        assert poly.coefficients == (Fraction(1), Fraction(11, 6), Fraction(1), Fraction(1, 6))
        # binomial(t+3, 3)
        for t in range(8):
            assert poly.value_at(t) == (t + 1) * (t + 2) * (t + 3) // 6

    def test_point_polytope(self):
        g = DirectedMultigraph(2, ((1, 2),))
        assert ehrhart_polynomial(inst(g, (1, -1))).coefficients == (Fraction(1),)

    def test_path_constant(self):
        poly = ehrhart_polynomial(inst(path_graph(3), (1, 0, -1)))
        assert poly.coefficients == (Fraction(1),)

    def test_degree_drop_with_zero_entries(self):
        # zero netflow entries shrink the polytope: degree falls below the
        # |E| - |V| + 1 bound and trailing coefficients trim away
        poly = ehrhart_polynomial(inst(complete_graph(4), (0, 0, 1, -1)))
        assert poly.coefficients == (Fraction(1),)

    def test_disconnected_rejected(self):
        g = DirectedMultigraph(4, ((1, 2), (3, 4)))
        with pytest.raises(ValueError):
            ehrhart_polynomial(inst(g, (1, -1, 1, -1)))

    def test_empty_polytope_zero_polynomial(self):
        poly = ehrhart_polynomial(inst(path_graph(3), (0, -1, 1)))
        assert poly.is_zero
        assert poly(5) == 0

    def test_out_of_sample_dilations(self):
        for g in (complete_graph(4), complete_graph(5)):
            bound = g.edge_count - g.vertex_count + 1
            a = NetflowVector.completing((1, 2) + (1,) * (g.vertex_count - 3))
            poly = ehrhart_polynomial(FlowInstance(g, a))
            for t in (bound + 1, bound + 2):
                assert poly.value_at(t) == count_flows(FlowInstance(g, a.dilate(t)))

    def test_string_round_trip(self):
        poly = ehrhart_polynomial(inst(complete_graph(4), (1, 0, 0, -1)))
        assert EhrhartPolynomial.from_strings(poly.coefficient_strings()) == poly


class TestNormalizedVolume:
    def test_k4_unit(self):
        assert normalized_volume_oracle(inst(complete_graph(4), (1, 0, 0, -1))) == 1

    def test_k4_example(self):
        assert normalized_volume_oracle(inst(complete_graph(4), (1, 1, 0, -2))) == 4

    def test_point_volume_one(self):
        g = DirectedMultigraph(2, ((1, 2),))
        assert normalized_volume_oracle(inst(g, (1, -1))) == 1

    def test_empty_volume_zero(self):
        assert normalized_volume_oracle(inst(path_graph(3), (0, -1, 1))) == 0

    def test_parallel_edge_permutation_invariance(self):
        a = (2, 1, 0, -3)
        g1 = DirectedMultigraph(4, ((1, 2), (1, 4), (1, 4), (2, 4), (2, 4), (3, 4)))
        g2 = DirectedMultigraph(4, ((1, 4), (1, 4), (1, 2), (2, 4), (2, 4), (3, 4)))
        assert normalized_volume_oracle(inst(g1, a)) == normalized_volume_oracle(inst(g2, a))
