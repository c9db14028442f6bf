"""Ground-truth lattice-point machinery for flow polytopes: brute-force
flow counting and enumeration, exact Ehrhart polynomials by rational
interpolation, and normalized volume read off the Ehrhart leading term.

Everything here is exact integer / rational arithmetic.  The counter is a
depth-first assignment of edge values in canonical edge order; vertices are
processed in increasing order so all inflow into a vertex is known when its
outgoing edges are assigned.  The memoized variant collapses states on
(next vertex, residual netflow suffix) and must agree with the naive
enumeration, which the tests check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterator, Sequence

from .multigraph import DirectedMultigraph, NetflowVector


@dataclass(frozen=True)
class FlowInstance:
    graph: DirectedMultigraph
    netflow: NetflowVector

    def __post_init__(self):
        object.__setattr__(self, "netflow", NetflowVector.coerce(self.netflow))
        if len(self.netflow) != self.graph.vertex_count:
            raise ValueError(
                f"netflow has {len(self.netflow)} entries for {self.graph.vertex_count} vertices"
            )

    def dilate(self, t: int) -> "FlowInstance":
        return FlowInstance(self.graph, self.netflow.dilate(t))


_SLOT_BITS = 16
_SLOT_OFFSET = 1 << 15
_SLOT_MASK = (1 << _SLOT_BITS) - 1
_PACK_LIMIT = _SLOT_OFFSET - 2

# (interior targets, sink multiplicity) -> {b: transitions}; see FlowCounter
_SHARED_TRANSITIONS: dict[tuple, dict[int, tuple[tuple[int, int], ...]]] = {}


class FlowCounter:
    """Reusable exact counter for integer flows on one graph.

    The memo table is keyed on (vertex position, residual netflow suffix)
    and persists across calls, so evaluating many netflow vectors on the
    same graph shares work.  The suffix excludes the sink: once every other
    vertex is balanced the sink is balanced too, because netflow entries
    sum to zero.  Suffixes are packed into one integer, 16 offset bits per
    vertex, unless the values are too large for that, in which case a plain
    tuple-state recursion takes over.
    """

    def __init__(self, graph: DirectedMultigraph):
        self.graph = graph
        nv = graph.vertex_count
        lo = graph.first_vertex
        # Per non-sink position: interior targets as (suffix slot, multiplicity)
        # where slot indexes the residual suffix beyond the current vertex,
        # plus the multiplicity of direct edges to the sink.
        self._targets: list[tuple[tuple[tuple[int, int], ...], int]] = []
        for pos in range(nv - 1):
            counts: dict[int, int] = {}
            for a, b in graph.edges:
                if a - lo == pos:
                    counts[b - lo] = counts.get(b - lo, 0) + 1
            sink_mult = counts.pop(nv - 1, 0)
            interior = tuple((tpos - pos - 1, mult) for tpos, mult in sorted(counts.items()))
            self._targets.append((interior, sink_mult))
        self._memo: dict[int, int] = {}
        # transition lists depend only on the per-vertex target signature, so
        # they are shared across counters (e.g. across source multiplicities)
        self._dist: list[dict[int, tuple[tuple[int, int], ...]]] = [
            _SHARED_TRANSITIONS.setdefault(sig, {}) for sig in self._targets
        ]
        self._memo_wide: dict[tuple, int] = {}
        self._results: dict[tuple[int, ...], int] = {}

    def count(self, netflow) -> int:
        key = netflow.entries if isinstance(netflow, NetflowVector) else tuple(netflow)
        hit = self._results.get(key)
        if hit is not None:
            return hit
        entries = NetflowVector.coerce(netflow).entries
        if len(entries) != self.graph.vertex_count:
            raise ValueError("netflow length does not match the graph")
        supply = sum(e for e in entries if e > 0)
        if supply + max(abs(e) for e in entries) >= _PACK_LIMIT:
            value = self._count_wide(0, entries[:-1])
        else:
            packed = 0
            for k, e in enumerate(entries[:-1]):
                packed |= (e + _SLOT_OFFSET) << (_SLOT_BITS * k)
            value = self._count(0, packed)
        self._results[key] = value
        return value

    def _count(self, pos: int, packed: int) -> int:
        if not packed:
            return 1
        b = (packed & _SLOT_MASK) - _SLOT_OFFSET
        if b < 0:
            return 0
        interior, sink_mult = self._targets[pos]
        if not interior:
            # all outflow, if any, goes straight to the sink
            if sink_mult:
                ways = comb(b + sink_mult - 1, sink_mult - 1)
            elif b == 0:
                ways = 1
            else:
                return 0
            return ways * self._count(pos + 1, packed >> _SLOT_BITS)
        key = (packed << 12) | pos
        memo = self._memo
        hit = memo.get(key)
        if hit is not None:
            return hit
        rest = packed >> _SLOT_BITS
        total = 0
        count = self._count
        for delta, weight in self._dist[pos].get(b) or self._transitions(pos, b):
            sub = count(pos + 1, rest + delta)
            if sub:
                total += weight * sub
        memo[key] = total
        return total

    def _transitions(self, pos: int, b: int) -> tuple[tuple[int, int], ...]:
        """All ways to send b units out of the vertex at `pos`, grouped by
        distinct target: (packed suffix increment, edge-level splittings)."""
        interior, sink_mult = self._targets[pos]
        out: list[tuple[int, int]] = []

        def rec(idx: int, acc: int, remaining: int, weight: int):
            if idx == len(interior):
                if sink_mult:
                    out.append((acc, weight * comb(remaining + sink_mult - 1, sink_mult - 1)))
                elif remaining == 0:
                    out.append((acc, weight))
                return
            slot, mult = interior[idx]
            shift = _SLOT_BITS * slot
            if idx == len(interior) - 1 and not sink_mult:
                # last group absorbs the rest
                rec(idx + 1, acc + (remaining << shift), 0,
                    weight * (comb(remaining + mult - 1, mult - 1) if mult > 1 else 1))
                return
            for x in range(remaining + 1):
                rec(idx + 1, acc + (x << shift), remaining - x,
                    weight * (comb(x + mult - 1, mult - 1) if mult > 1 else 1))

        rec(0, 0, b, 1)
        result = tuple(out)
        self._dist[pos][b] = result
        return result

    def _count_wide(self, pos: int, w: tuple[int, ...]) -> int:
        """Tuple-state recursion for netflows too large to pack."""
        if not w:
            return 1
        b = w[0]
        if b < 0:
            return 0
        interior, sink_mult = self._targets[pos]
        if not interior:
            if sink_mult:
                ways = comb(b + sink_mult - 1, sink_mult - 1)
            elif b == 0:
                ways = 1
            else:
                return 0
            return ways * self._count_wide(pos + 1, w[1:])
        key = (pos, w)
        hit = self._memo_wide.get(key)
        if hit is not None:
            return hit
        rest = w[1:]
        total = 0
        suffix = len(rest)
        for delta, weight in self._wide_transitions(pos, b, suffix):
            child = tuple(x + y for x, y in zip(rest, delta))
            sub = self._count_wide(pos + 1, child)
            if sub:
                total += weight * sub
        self._memo_wide[key] = total
        return total

    def _wide_transitions(self, pos: int, b: int, suffix: int):
        interior, sink_mult = self._targets[pos]
        out = []

        def rec(idx: int, delta: tuple[int, ...], remaining: int, weight: int):
            if idx == len(interior):
                if sink_mult:
                    out.append((delta, weight * comb(remaining + sink_mult - 1, sink_mult - 1)))
                elif remaining == 0:
                    out.append((delta, weight))
                return
            slot, mult = interior[idx]
            if idx == len(interior) - 1 and not sink_mult:
                grown = delta[:slot] + (remaining,) + delta[slot + 1:]
                rec(idx + 1, grown, 0,
                    weight * (comb(remaining + mult - 1, mult - 1) if mult > 1 else 1))
                return
            for x in range(remaining + 1):
                grown = delta[:slot] + (x,) + delta[slot + 1:]
                rec(idx + 1, grown, remaining - x,
                    weight * (comb(x + mult - 1, mult - 1) if mult > 1 else 1))

        rec(0, (0,) * suffix, b, 1)
        return out


def count_flows(inst: FlowInstance, *, memoize: bool = True) -> int:
    """Number of integer flows: nonnegative integer edge values whose net
    outflow at each vertex matches the netflow entry.  Returns 0 for
    infeasible instances; works for netflows outside the nice chamber."""
    if memoize:
        return FlowCounter(inst.graph).count(inst.netflow)
    return sum(1 for _ in iter_flows(inst))


def iter_flows(inst: FlowInstance) -> Iterator[tuple[int, ...]]:
    """Depth-first enumeration of all integer flows, edge values assigned in
    canonical per-vertex order, each yielded as a vector indexed by edge."""
    graph = inst.graph
    lo = graph.first_vertex
    nv = graph.vertex_count
    entries = inst.netflow.entries
    out_edges = [graph.out_edges_at(v) for v in graph.vertices]
    flow = [0] * graph.edge_count
    inflow = [0] * nv

    def at_vertex(pos: int) -> Iterator[tuple[int, ...]]:
        if pos == nv - 1:
            if entries[pos] + inflow[pos] == 0:
                yield tuple(flow)
            return
        b = entries[pos] + inflow[pos]
        if b < 0:
            return
        idxs = out_edges[pos]
        if not idxs:
            if b == 0:
                yield from at_vertex(pos + 1)
            return
        yield from assign(pos, idxs, 0, b)

    def assign(pos: int, idxs, k: int, remaining: int) -> Iterator[tuple[int, ...]]:
        e = idxs[k]
        head = graph.edges[e][1] - lo
        if k == len(idxs) - 1:
            flow[e] = remaining
            inflow[head] += remaining
            yield from at_vertex(pos + 1)
            inflow[head] -= remaining
            flow[e] = 0
            return
        for val in range(remaining + 1):
            flow[e] = val
            inflow[head] += val
            yield from assign(pos, idxs, k + 1, remaining - val)
            inflow[head] -= val
        flow[e] = 0

    yield from at_vertex(0)


def enumerate_flows(inst: FlowInstance) -> list[tuple[int, ...]]:
    return list(iter_flows(inst))


@dataclass(frozen=True)
class EhrhartPolynomial:
    """Exact polynomial with rational coefficients, low degree first.
    The empty tuple is the zero polynomial (empty polytope)."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading_coefficient(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return self.coefficients[-1]

    def __call__(self, t) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return acc

    def value_at(self, t: int) -> int:
        val = self(t)
        if val.denominator != 1:
            raise ValueError(f"polynomial is not integer-valued at {t}: {val}")
        return val.numerator

    def coefficient_strings(self) -> list[str]:
        return [str(c) for c in self.coefficients]

    @staticmethod
    def from_strings(strings: Sequence[str]) -> "EhrhartPolynomial":
        return EhrhartPolynomial(tuple(Fraction(s) for s in strings))


_LAGRANGE_BASIS: dict[int, tuple[list[list[int]], list[int], int]] = {}


def _lagrange_basis(degree: int):
    """Numerator polynomials and denominators for interpolation at nodes
    0..degree, plus the common denominator, all integer."""
    cached = _LAGRANGE_BASIS.get(degree)
    if cached is not None:
        return cached
    nodes = range(degree + 1)
    numerators = []
    denominators = []
    for t in nodes:
        poly = [1]
        for s in nodes:
            if s == t:
                continue
            poly = [
                (-s) * (poly[k] if k < len(poly) else 0) + (poly[k - 1] if k else 0)
                for k in range(len(poly) + 1)
            ]
        numerators.append(poly)
        den = 1
        for s in nodes:
            if s != t:
                den *= t - s
        denominators.append(den)
    common = 1
    for d in denominators:
        g = _gcd(common, abs(d))
        common = common // g * abs(d)
    result = (numerators, denominators, common)
    _LAGRANGE_BASIS[degree] = result
    return result


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a else 1


def ehrhart_polynomial(inst: FlowInstance, *, counter: FlowCounter | None = None) -> EhrhartPolynomial:
    """Unique polynomial of degree at most |E| - |V| + 1 matching the flow
    counts of the dilated netflow at t = 0, 1, ..., that bound, via exact
    rational Lagrange interpolation.  Infeasible instances give the zero
    polynomial."""
    graph = inst.graph
    if not graph.is_connected():
        raise ValueError("ehrhart_polynomial requires a connected graph")
    bound = graph.edge_count - graph.vertex_count + 1
    if counter is None:
        counter = FlowCounter(graph)
    if counter.count(inst.netflow) == 0:
        # empty polytope; the dilates are empty too
        return EhrhartPolynomial(())
    values = [counter.count(inst.netflow.dilate(t)) for t in range(bound + 1)]
    numerators, denominators, common = _lagrange_basis(bound)
    coeffs = []
    for k in range(bound + 1):
        num = 0
        for t in range(bound + 1):
            num += values[t] * numerators[t][k] * (common // denominators[t])
        coeffs.append(Fraction(num, common))
    return EhrhartPolynomial(tuple(coeffs))


def normalized_volume_oracle(inst: FlowInstance, *, counter: FlowCounter | None = None) -> int:
    """d! times the Ehrhart leading coefficient, d the actual degree, which
    is the volume normalized so a smallest lattice simplex has volume 1.
    A point gives 1, an empty polytope 0."""
    poly = ehrhart_polynomial(inst, counter=counter)
    if poly.is_zero:
        return 0
    d = poly.degree
    vol = poly.leading_coefficient * factorial(d)
    if vol.denominator != 1 or vol.numerator < 0:
        raise ArithmeticError(f"normalized volume came out as {vol}, expected a nonnegative integer")
    return vol.numerator
