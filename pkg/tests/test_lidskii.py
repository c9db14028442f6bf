"""Closed-form evaluators, coefficients, dominance-constrained compositions."""

from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from flowpoly.kostant import FlowCounter, FlowInstance, count_flows
from flowpoly.lidskii import (
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
from flowpoly.multigraph import DirectedMultigraph, NetflowVector, complete_graph, path_graph
from flowpoly.verify import iter_family


class TestMultisetCoeff:
    def test_examples(self):
        assert multiset_coeff(3, 2) == 6
        assert multiset_coeff(5, 0) == 1
        assert multiset_coeff(1, 3) == 1

    def test_generalized_values(self):
        # rising-factorial reading; signed for negative first argument
        assert multiset_coeff(-1, 0) == 1
        assert multiset_coeff(-1, 1) == -1
        assert multiset_coeff(0, 3) == 0
        assert multiset_coeff(-2, 4) == 0  # product crosses zero
        assert multiset_coeff(-3, 2) == 3

    def test_rejects_negative_k(self):
        with pytest.raises(ValueError):
            multiset_coeff(2, -1)

    def test_matches_rising_factorial(self):
        for c in range(0, 21):
            for j in range(0, 21):
                assert multiset_coeff(c, j) == rising_factorial_over_fact(c, j)

    @given(st.integers(-30, 30), st.integers(0, 12))
    def test_matches_rising_factorial_everywhere(self, c, j):
        assert multiset_coeff(c, j) == rising_factorial_over_fact(c, j)


class TestRisingFactorial:
    def test_examples(self):
        assert rising_factorial_over_fact(1, 2) == 1
        assert rising_factorial_over_fact(3, 3) == 10
        for c in (-4, 0, 1, 7):
            assert rising_factorial_over_fact(c, 0) == 1


class TestDominantCompositions:
    def test_k4_example(self):
        assert dominant_compositions(3, (2, 1, 0)) == [(2, 1, 0), (3, 0, 0)]

    def test_zero_total(self):
        assert dominant_compositions(0, (0, 0, 0)) == [(0, 0, 0)]

    def test_two_parts(self):
        assert dominant_compositions(2, (1, 1)) == [(1, 1), (2, 0)]

    def test_rejects_mismatched_total(self):
        with pytest.raises(ValueError):
            dominant_compositions(3, (1, 1))

    @settings(deadline=None, max_examples=60)
    @given(st.integers(1, 4), st.data())
    def test_closure_against_brute_force(self, n, data):
        lower = data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
        total = sum(lower)
        got = set(dominant_compositions(total, lower))
        every = [
            j for j in product(range(total + 1), repeat=n) if sum(j) == total
        ]
        for j in every:
            assert (j in got) == dominates(j, lower)

    def test_lexicographic_order(self):
        got = dominant_compositions(4, (2, 1, 1))
        assert got == sorted(got)


class TestMultinomial:
    def test_values(self):
        assert multinomial(3, (2, 1, 0)) == 3
        assert multinomial(3, (3, 0, 0)) == 1
        assert multinomial(4, (2, 2)) == 6


class TestLidskiiVolume:
    def test_k4_unit(self):
        assert lidskii_volume(complete_graph(4), (1, 0, 0, -1)) == 1

    def test_k4_example(self):
        assert lidskii_volume(complete_graph(4), (1, 1, 0, -2)) == 4

    def test_path_always_one(self):
        for a in ((1, 1, -2), (3, 2, -5), (2, 0, -2)):
            assert lidskii_volume(path_graph(3), a) == 1

    def test_precondition_errors(self):
        with pytest.raises(ValueError, match="connected"):
            lidskii_volume(DirectedMultigraph(4, ((1, 2), (3, 4))), (1, 0, 1, -2))
        with pytest.raises(ValueError, match="vertex 2"):
            lidskii_volume(DirectedMultigraph(3, ((1, 2), (1, 3))), (1, 0, -1))
        with pytest.raises(ValueError, match="nice chamber"):
            lidskii_volume(complete_graph(4), (1, -1, 1, -1))


class TestLidskiiCount:
    def test_k4_unit(self):
        assert lidskii_count(complete_graph(4), (1, 0, 0, -1)) == 4

    def test_k4_two(self):
        assert lidskii_count(complete_graph(4), (0, 1, 2, -3)) == 2

    def test_path_always_one(self):
        for a in ((1, 1, -2), (0, 2, -2), (3, 0, -3)):
            assert lidskii_count(path_graph(3), a) == 1

    def test_small_entry_regression(self):
        # needs the signed multiset coefficient: the (2,0) composition term
        # must be partly cancelled by the (1,1) term
        g = DirectedMultigraph(3, ((1, 2), (1, 2), (2, 3), (2, 3)))
        a = NetflowVector((0, 0, 0))
        assert count_flows(FlowInstance(g, a)) == 1
        assert lidskii_count(g, a) == 1


class TestCForm:
    def test_k4_ones(self):
        assert lidskii_count_c_form(complete_graph(4), (1, 1, 1)) == 2

    def test_k4_322(self):
        assert lidskii_count_c_form(complete_graph(4), (3, 2, 2)) == 22
        assert count_flows(FlowInstance(complete_graph(4), NetflowVector((2, 2, 3, -7)))) == 22

    def test_path(self):
        assert lidskii_count_c_form(path_graph(3), (5, 7)) == 1

    def test_rejects_nonpositive_c(self):
        with pytest.raises(ValueError):
            lidskii_count_c_form(complete_graph(4), (1, 0, 1))

    def test_matches_count_at_shifted_netflow(self):
        for g in (complete_graph(4), complete_graph(3), path_graph(4)):
            counter = FlowCounter(g)
            n = g.vertex_count - 1
            for c in product((1, 2, 3), repeat=n):
                a = in_plus_c_netflow(g, c)
                assert lidskii_count_c_form(g, c, counter=counter) == lidskii_count(g, a, counter=counter)


@settings(deadline=None, max_examples=30)
@given(st.data())
def test_count_formula_matches_oracle_random(data):
    graphs = list(iter_family(5, 7))
    g = data.draw(st.sampled_from(graphs))
    n = g.vertex_count - 1
    head = data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    a = NetflowVector.completing(head)
    assert lidskii_count(g, a) == count_flows(FlowInstance(g, a))
