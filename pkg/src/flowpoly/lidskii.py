"""Closed-form volume and lattice-point evaluators for flow polytopes in
the nice chamber, as sums over dominance-constrained weak compositions
weighted by flow counts at shifted netflows.

The three evaluators share the same composition set: weak compositions j of
|E| - n (n the number of non-sink vertices) whose prefix sums dominate the
shifted outdegree vector.  They differ only in the per-composition weight:

  lidskii_volume        multinomial(|E|-n; j) * prod a_i^{j_i}
  lidskii_count         prod multiset_coeff(a_i - in(i), j_i)
  lidskii_count_c_form  prod rising_factorial_over_fact(c_i, j_i)

Each weight multiplies a flow count at netflow (j - out, 0), delegated to
the brute-force counter so the formula side and the oracle side stay
independent.
"""

from __future__ import annotations

from math import comb, factorial
from typing import Sequence

from .kostant import FlowCounter
from .multigraph import DirectedMultigraph, NetflowVector, degree_stats


def multiset_coeff(n: int, k: int) -> int:
    """binom(n+k-1, k) in the generalized sense n(n+1)...(n+k-1) / k!.

    For n >= 1 this counts multisets of size k from n types.  For n <= 0 it
    is zero when the rising product crosses zero and signed otherwise
    (e.g. n=-1, k=1 gives -1); those signed values are exactly what keeps
    the lattice-point formula an identity at netflows with small entries."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return 1
    if n >= 1:
        return comb(n + k - 1, k)
    if n <= 0 <= n + k - 1:
        return 0
    prod = 1
    for t in range(k):
        prod *= n + t
    return prod // factorial(k)


def rising_factorial_over_fact(c: int, j: int) -> int:
    """c(c+1)...(c+j-1) / j!, the rising factorial normalized by j!.
    Identical to multiset_coeff(c, j) for every integer c (cross-asserted in
    the tests); kept as its own entry point because the c-form count
    evaluator is stated in these terms."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    prod = 1
    for t in range(j):
        prod *= c + t
    quot, rem = divmod(prod, factorial(j))
    if rem:
        raise ArithmeticError(f"rising factorial {prod} not divisible by {j}!")
    return quot


def dominates(parts: Sequence[int], lower: Sequence[int]) -> bool:
    """Prefix-sum dominance: every prefix of parts sums to at least the
    corresponding prefix of lower."""
    acc = 0
    for p, b in zip(parts, lower):
        acc += p - b
        if acc < 0:
            return False
    return True


def dominant_compositions(total: int, lower: Sequence[int]) -> list[tuple[int, ...]]:
    """All weak compositions of `total` into len(lower) parts that dominate
    `lower`, in ascending lexicographic order."""
    lower = tuple(int(x) for x in lower)
    if total < 0:
        raise ValueError("total must be nonnegative")
    if sum(lower) != total:
        raise ValueError(f"lower bounds sum to {sum(lower)}, expected {total}")
    n = len(lower)
    prefix_lower = []
    acc = 0
    for b in lower:
        acc += b
        prefix_lower.append(acc)
    out: list[tuple[int, ...]] = []
    parts = [0] * n

    def rec(k: int, assigned: int):
        if k == n - 1:
            last = total - assigned
            if last >= 0:
                parts[k] = last
                out.append(tuple(parts))
            return
        low = max(0, prefix_lower[k] - assigned)
        for v in range(low, total - assigned + 1):
            parts[k] = v
            rec(k + 1, assigned + v)

    if n == 0:
        return [()] if total == 0 else []
    rec(0, 0)
    return out


def multinomial(total: int, parts: Sequence[int]) -> int:
    result = 1
    remaining = total
    for p in parts:
        result *= comb(remaining, p)
        remaining -= p
    return result


def _check_preconditions(graph: DirectedMultigraph, netflow: NetflowVector | None):
    if not graph.is_connected():
        raise ValueError("graph must be connected")
    stats = degree_stats(graph)
    for v, d in zip(stats.vertices[:-1], stats.outdeg[:-1]):
        if d == 0:
            raise ValueError(f"vertex {v} has no outgoing edge")
    if netflow is not None:
        if len(netflow) != graph.vertex_count:
            raise ValueError("netflow length does not match the graph")
        if not netflow.nice_chamber:
            bad = next(i for i, e in enumerate(netflow.entries[:-1]) if e < 0)
            raise ValueError(f"netflow entry {bad} is negative; nice chamber required")
    return stats


def _shifted_count(graph, counter, j, out_shift) -> int:
    netflow = tuple(ji - oi for ji, oi in zip(j, out_shift)) + (0,)
    return counter.count(netflow)


def lidskii_volume(
    graph: DirectedMultigraph,
    netflow,
    *,
    counter: FlowCounter | None = None,
) -> int:
    """Normalized volume of the flow polytope, by the closed formula."""
    a = NetflowVector.coerce(netflow)
    stats = _check_preconditions(graph, a)
    out = stats.out_shift
    n = graph.vertex_count - 1
    m = graph.edge_count
    if counter is None:
        counter = FlowCounter(graph)
    total = 0
    for j in dominant_compositions(m - n, out):
        weight = multinomial(m - n, j)
        for ai, ji in zip(a.entries, j):
            weight *= ai**ji
        if weight:
            total += weight * _shifted_count(graph, counter, j, out)
    return total


def lidskii_count(
    graph: DirectedMultigraph,
    netflow,
    *,
    counter: FlowCounter | None = None,
) -> int:
    """Number of integer flows, by the closed formula."""
    a = NetflowVector.coerce(netflow)
    stats = _check_preconditions(graph, a)
    out = stats.out_shift
    in_shift = stats.in_shift
    n = graph.vertex_count - 1
    m = graph.edge_count
    if counter is None:
        counter = FlowCounter(graph)
    total = 0
    for j in dominant_compositions(m - n, out):
        weight = 1
        for ai, ii, ji in zip(a.entries, in_shift, j):
            weight *= multiset_coeff(ai - ii, ji)
            if not weight:
                break
        if weight:
            total += weight * _shifted_count(graph, counter, j, out)
    return total


def lidskii_count_c_form(
    graph: DirectedMultigraph,
    c: Sequence[int],
    *,
    counter: FlowCounter | None = None,
) -> int:
    """Flow count at netflow a_i = indeg(i) - 1 + c_i, written directly in
    terms of the positive vector c via rising factorials."""
    stats = _check_preconditions(graph, None)
    n = graph.vertex_count - 1
    c = tuple(int(x) for x in c)
    if len(c) != n:
        raise ValueError(f"c must have {n} entries, got {len(c)}")
    for i, ci in enumerate(c):
        if ci < 1:
            raise ValueError(f"c[{i}] = {ci} must be positive")
    out = stats.out_shift
    m = graph.edge_count
    if counter is None:
        counter = FlowCounter(graph)
    total = 0
    for j in dominant_compositions(m - n, out):
        weight = 1
        for ci, ji in zip(c, j):
            weight *= rising_factorial_over_fact(ci, ji)
        if weight:
            total += weight * _shifted_count(graph, counter, j, out)
    return total


def in_plus_c_netflow(graph: DirectedMultigraph, c: Sequence[int]) -> NetflowVector:
    """Netflow with entries indeg(i) - 1 + c_i at non-sink vertices and the
    balancing sink value."""
    stats = degree_stats(graph)
    first = tuple(ii + ci for ii, ci in zip(stats.in_shift, c))
    return NetflowVector.completing(first)
