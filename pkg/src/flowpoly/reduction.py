"""Graph-rewriting machinery that subdivides flow polytopes: bipartite
noncrossing trees, single reductions at a vertex with edge provenance,
canonical reduction trees (with or without an attached source), leaf
censuses, and the dissection of the source-augmented polytope into
unimodular simplices.

A reduction at vertex i replaces ordered sub-multisets I (incoming) and O
(outgoing) of edges at i by, for every noncrossing tree T on left vertices
I + [i] and right vertices O, the edge set {tail(I_p) -> head(O_q)} over
tree edges, where the appended left vertex maps an out-edge to itself.
Every derived edge remembers the set s(e) of root edges it sums, so the
linear map back into root coordinates (c_d = sum over e with d in s(e)) is
available at every node.

Noncrossing trees on ordered parts of sizes (l, r) are exactly the
staircases: left vertex p covers a contiguous interval of right vertices,
consecutive intervals overlap in a single right vertex.  Enumerating the
l-1 overlap points as a weakly increasing sequence in 1..r gives all
binom(l+r-2, l-1) of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Sequence

from .geometry import SimplexCell, path_flow_vertices
from .multigraph import DirectedMultigraph, attach_source, degree_stats

DEFAULT_NODE_CAP = 10**6


class NodeCapExceeded(RuntimeError):
    """Raised when a reduction pipeline would materialize too many graphs."""


class LeafShapeError(RuntimeError):
    """A reduction-tree leaf is not of the expected all-edges-to-the-sink
    shape; this indicates a bug in the reduction pipeline."""


# --- noncrossing trees -------------------------------------------------------


@dataclass(frozen=True)
class NoncrossingTree:
    """Spanning tree of the complete bipartite graph on ordered left
    vertices 1..left_size and right vertices 1..right_size with no pair of
    edges (p, q), (t, u) such that p < t and q > u."""

    left_size: int
    right_size: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted((int(p), int(q)) for p, q in self.edges)))
        problem = self.structure_error()
        if problem:
            raise ValueError(problem)

    def structure_error(self) -> str | None:
        l, r = self.left_size, self.right_size
        if l < 1 or r < 1:
            return "both sides must be nonempty"
        if len(set(self.edges)) != len(self.edges):
            return "repeated tree edge"
        if len(self.edges) != l + r - 1:
            return f"spanning tree on {l}+{r} vertices needs {l + r - 1} edges, got {len(self.edges)}"
        for p, q in self.edges:
            if not (1 <= p <= l and 1 <= q <= r):
                return f"tree edge ({p},{q}) out of range"
        for p, q in self.edges:
            for t, u in self.edges:
                if p < t and q > u:
                    return f"edges ({p},{q}) and ({t},{u}) cross"
        # connectivity via union-find over l + r vertices
        parent = list(range(l + r))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for p, q in self.edges:
            a, b = find(p - 1), find(l + q - 1)
            if a != b:
                parent[a] = b
        if len({find(x) for x in range(l + r)}) != 1:
            return "tree is not connected"
        return None

    def edges_at_left(self, p: int) -> int:
        return sum(1 for pp, _ in self.edges if pp == p)

    @staticmethod
    def from_breaks(left_size: int, right_size: int, breaks: Sequence[int]) -> "NoncrossingTree":
        """Staircase with the given weakly increasing overlap points."""
        edges = []
        lo = 1
        for p in range(1, left_size + 1):
            hi = breaks[p - 1] if p < left_size else right_size
            edges.extend((p, q) for q in range(lo, hi + 1))
            lo = hi
        return NoncrossingTree(left_size, right_size, tuple(edges))


@lru_cache(maxsize=4096)
def enumerate_noncrossing_trees(left_size: int, right_size: int) -> tuple[NoncrossingTree, ...]:
    """All noncrossing spanning trees for the given ordered sizes, in
    lexicographic order of their overlap points."""
    if left_size < 1 or right_size < 1:
        raise ValueError("both sides must have at least one vertex")
    return tuple(
        NoncrossingTree.from_breaks(left_size, right_size, breaks)
        for breaks in combinations_with_replacement(range(1, right_size + 1), left_size - 1)
    )


# --- provenanced graphs and reductions ---------------------------------------


@dataclass(frozen=True)
class ProvenancedGraph:
    """A multigraph whose edges each carry the set of root edges they sum."""

    graph: DirectedMultigraph
    provenance: tuple[frozenset[int], ...]
    root: DirectedMultigraph

    def __post_init__(self):
        object.__setattr__(self, "provenance", tuple(frozenset(s) for s in self.provenance))
        if len(self.provenance) != self.graph.edge_count:
            raise ValueError("one provenance set per edge required")
        limit = self.root.edge_count
        for k, s in enumerate(self.provenance):
            if not s:
                raise ValueError(f"edge {k} has empty provenance")
            if min(s) < 0 or max(s) >= limit:
                raise ValueError(f"edge {k} references root edges outside 0..{limit - 1}")

    @staticmethod
    def as_root(graph: DirectedMultigraph) -> "ProvenancedGraph":
        return ProvenancedGraph(graph, tuple(frozenset((e,)) for e in range(graph.edge_count)), graph)

    def provenance_paths_ok(self) -> bool:
        """Every s(e) must order into a directed root path tail(e) -> head(e)."""
        for (tail, head), s in zip(self.graph.edges, self.provenance):
            at = tail
            remaining = set(s)
            while remaining:
                step = next((d for d in remaining if self.root.edges[d][0] == at), None)
                if step is None:
                    return False
                at = self.root.edges[step][1]
                remaining.discard(step)
            if at != head:
                return False
        return True


@dataclass(frozen=True)
class PhiMap:
    """Linear map from a node's edge coordinates to the root's, summing
    each node coordinate into all the root edges it covers."""

    root_size: int
    node_size: int
    provenance: tuple[frozenset[int], ...]

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.node_size:
            raise ValueError(f"vector has {len(vec)} coordinates, node has {self.node_size} edges")
        out = [0] * self.root_size
        for e, s in enumerate(self.provenance):
            v = vec[e]
            if v:
                for d in s:
                    out[d] += v
        return tuple(out)

    @property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(1 if d in self.provenance[e] else 0 for e in range(self.node_size))
            for d in range(self.root_size)
        )


def phi_map(node: ProvenancedGraph) -> PhiMap:
    return PhiMap(node.root.edge_count, node.graph.edge_count, node.provenance)


def reduce_at_vertex(
    node: ProvenancedGraph,
    vertex: int,
    incoming: Sequence[int],
    outgoing: Sequence[int],
    tree: NoncrossingTree,
) -> ProvenancedGraph:
    """Single reduction: delete the chosen incoming/outgoing edges at the
    vertex and add, per tree edge, the sum edge tail(I_p) -> head(O_q); the
    appended left vertex keeps an out-edge as itself.  Provenance sets are
    united and must be disjoint."""
    graph = node.graph
    if not (graph.first_vertex < vertex < graph.last_vertex):
        raise ValueError(f"vertex {vertex} is not interior")
    incoming = tuple(int(i) for i in incoming)
    outgoing = tuple(int(i) for i in outgoing)
    for idx in incoming:
        if not (0 <= idx < graph.edge_count) or graph.edges[idx][1] != vertex:
            raise ValueError(f"edge {idx} is not an incoming edge at vertex {vertex}")
    for idx in outgoing:
        if not (0 <= idx < graph.edge_count) or graph.edges[idx][0] != vertex:
            raise ValueError(f"edge {idx} is not an outgoing edge at vertex {vertex}")
    if len(set(incoming)) != len(incoming) or len(set(outgoing)) != len(outgoing):
        raise ValueError("repeated edge index")
    if tree.left_size != len(incoming) + 1 or tree.right_size != len(outgoing):
        raise ValueError(
            f"tree shape ({tree.left_size},{tree.right_size}) does not match "
            f"|I|+1={len(incoming) + 1}, |O|={len(outgoing)}"
        )
    removed = set(incoming) | set(outgoing)
    kept = [
        (graph.edges[k], node.provenance[k])
        for k in range(graph.edge_count)
        if k not in removed
    ]
    appended = tree.left_size
    new = []
    for p, q in tree.edges:
        out_idx = outgoing[q - 1]
        if p == appended:
            new.append((graph.edges[out_idx], node.provenance[out_idx]))
        else:
            in_idx = incoming[p - 1]
            s_in = node.provenance[in_idx]
            s_out = node.provenance[out_idx]
            if s_in & s_out:
                raise ValueError(
                    f"provenance sets of edges {in_idx} and {out_idx} overlap; "
                    "a root edge cannot repeat along a path"
                )
            new.append(((graph.edges[in_idx][0], graph.edges[out_idx][1]), s_in | s_out))
    combined = sorted(kept + new, key=lambda item: item[0])
    edges = tuple(e for e, _ in combined)
    provenance = tuple(s for _, s in combined)
    return ProvenancedGraph(
        DirectedMultigraph(graph.vertex_count, edges, graph.first_vertex),
        provenance,
        node.root,
    )


def _ordered_incident(
    graph: DirectedMultigraph, vertex: int, *, incoming: bool, skip_source: bool = False
) -> tuple[int, ...]:
    """Incident edge indices ordered by decreasing edge length, ties by
    ascending index."""
    if incoming:
        idxs = [k for k, (a, b) in enumerate(graph.edges) if b == vertex]
        if skip_source:
            idxs = [k for k in idxs if graph.edges[k][0] != graph.first_vertex]
    else:
        idxs = [k for k, (a, b) in enumerate(graph.edges) if a == vertex]
    return tuple(sorted(idxs, key=lambda k: (graph.edges[k][0] - graph.edges[k][1], k)))


# --- reduction trees ----------------------------------------------------------


@dataclass(frozen=True)
class ReductionStep:
    vertex: int
    incoming: tuple[int, ...]
    outgoing: tuple[int, ...]
    tree: NoncrossingTree


class ReductionTreeNode:
    __slots__ = ("graph", "parent", "children", "step")

    def __init__(self, graph: ProvenancedGraph, parent=None, step: ReductionStep | None = None):
        self.graph = graph
        self.parent = parent
        self.children: list[ReductionTreeNode] = []
        self.step = step

    @property
    def is_leaf(self) -> bool:
        return not self.children


class ReductionTree:
    """Materialized reduction tree; children of each node are in the
    noncrossing-tree enumeration order, so traversal is deterministic."""

    def __init__(self, root: ReductionTreeNode, schedule: tuple[int, ...]):
        self.root = root
        self.schedule = schedule

    def nodes(self) -> Iterator[ReductionTreeNode]:
        queue = [self.root]
        while queue:
            node = queue.pop(0)
            yield node
            queue.extend(node.children)

    def leaves(self) -> list[ReductionTreeNode]:
        return [n for n in self.nodes() if n.is_leaf]

    @property
    def node_count(self) -> int:
        return sum(1 for _ in self.nodes())


class _Budget:
    __slots__ = ("cap", "used")

    def __init__(self, cap: int):
        self.cap = cap
        self.used = 0

    def spend(self, k: int = 1):
        self.used += k
        if self.used > self.cap:
            raise NodeCapExceeded(
                f"reduction exceeded the node cap of {self.cap}; "
                "raise node_cap to continue"
            )


def _require_reducible(graph: DirectedMultigraph) -> None:
    if not graph.is_connected():
        raise ValueError("graph must be connected")
    stats = degree_stats(graph)
    for v, d in zip(stats.vertices[:-1], stats.outdeg[:-1]):
        if d == 0:
            raise ValueError(f"vertex {v} has no outgoing edge")


def _expansions(node: ProvenancedGraph, vertex: int, skip_source: bool):
    graph = node.graph
    inc = _ordered_incident(graph, vertex, incoming=True, skip_source=skip_source)
    out = _ordered_incident(graph, vertex, incoming=False)
    for tree in enumerate_noncrossing_trees(len(inc) + 1, len(out)):
        yield ReductionStep(vertex, inc, out, tree), reduce_at_vertex(node, vertex, inc, out, tree)


def _schedule(graph: DirectedMultigraph) -> tuple[int, ...]:
    """Interior vertices above 1 in decreasing order: n, n-1, ..., 2."""
    return tuple(range(graph.last_vertex - 1, 1, -1))


def _build_tree(root: ProvenancedGraph, skip_source: bool, node_cap: int) -> ReductionTree:
    budget = _Budget(node_cap)
    budget.spend()
    root_node = ReductionTreeNode(root)
    level = [root_node]
    schedule = _schedule(root.graph)
    for vertex in schedule:
        next_level = []
        for nd in level:
            for step, child_pg in _expansions(nd.graph, vertex, skip_source):
                budget.spend()
                child = ReductionTreeNode(child_pg, nd, step)
                nd.children.append(child)
                next_level.append(child)
        level = next_level
    return ReductionTree(root_node, schedule)


def canonical_reduction_tree(
    graph: DirectedMultigraph, *, node_cap: int = DEFAULT_NODE_CAP
) -> ReductionTree:
    """Reduction tree using the full incoming and outgoing edge multisets at
    vertices n, n-1, ..., 2, each ordered by decreasing edge length.  All
    leaves have every edge pointing at the sink."""
    if graph.first_vertex != 1:
        raise ValueError("canonical reduction expects a graph on vertices 1..n+1")
    _require_reducible(graph)
    return _build_tree(ProvenancedGraph.as_root(graph), skip_source=False, node_cap=node_cap)


def reduction_tree_with_source(
    graph: DirectedMultigraph, c: Sequence[int], *, node_cap: int = DEFAULT_NODE_CAP
) -> ReductionTree:
    """Canonical-style reduction tree rooted at the source-augmented graph.
    Incoming multisets exclude the source edges, so deleting everything
    incident to the source at each node recovers the plain canonical tree
    node for node."""
    if graph.first_vertex != 1:
        raise ValueError("expected a graph on vertices 1..n+1")
    _require_reducible(graph)
    root = ProvenancedGraph.as_root(attach_source(graph, c))
    return _build_tree(root, skip_source=True, node_cap=node_cap)


def iter_reduction_leaves(
    graph: DirectedMultigraph,
    c: Sequence[int] | None = None,
    *,
    node_cap: int = DEFAULT_NODE_CAP,
) -> Iterator[ProvenancedGraph]:
    """Leaves of the canonical reduction tree (or its source-augmented
    variant when c is given), streamed depth first in the same order the
    materialized tree would produce, without storing the tree."""
    if graph.first_vertex != 1:
        raise ValueError("expected a graph on vertices 1..n+1")
    _require_reducible(graph)
    if c is None:
        root = ProvenancedGraph.as_root(graph)
        skip_source = False
    else:
        root = ProvenancedGraph.as_root(attach_source(graph, c))
        skip_source = True
    schedule = _schedule(root.graph)
    budget = _Budget(node_cap)
    budget.spend()

    def walk(node: ProvenancedGraph, depth: int) -> Iterator[ProvenancedGraph]:
        if depth == len(schedule):
            yield node
            return
        for _, child in _expansions(node, schedule[depth], skip_source):
            budget.spend()
            yield from walk(child, depth + 1)

    yield from walk(root, 0)


# --- leaf censuses -----------------------------------------------------------


def _leaf_composition(graph: DirectedMultigraph) -> tuple[int, ...]:
    """Composition j for a leaf with j_i + 1 parallel edges from i to the
    sink (ignoring source edges); raises LeafShapeError otherwise."""
    sink = graph.last_vertex
    counts = {i: 0 for i in range(1, sink)}
    for a, b in graph.edges:
        if graph.first_vertex == 0 and a == 0:
            if b == sink:
                raise LeafShapeError("leaf has a source edge pointing at the sink")
            continue
        if b != sink:
            raise LeafShapeError(f"leaf edge ({a},{b}) does not point at the sink")
        counts[a] += 1
    for i, k in counts.items():
        if k < 1:
            raise LeafShapeError(f"leaf vertex {i} has no edge to the sink")
    return tuple(counts[i] - 1 for i in range(1, sink))


def leaf_census(source) -> dict[tuple[int, ...], int]:
    """Multiset of leaf shapes, keyed by the composition j such that the
    leaf has j_i + 1 edges from vertex i to the sink."""
    if isinstance(source, ReductionTree):
        leaves: Iterable = (n.graph for n in source.leaves())
    else:
        leaves = source
    census: dict[tuple[int, ...], int] = {}
    for leaf in leaves:
        graph = leaf.graph if isinstance(leaf, ProvenancedGraph) else leaf
        j = _leaf_composition(graph)
        census[j] = census.get(j, 0) + 1
    return dict(sorted(census.items()))


def census_to_json(census: dict[tuple[int, ...], int]) -> list[dict]:
    return [
        {"composition": list(j), "count": count}
        for j, count in sorted(census.items())
    ]


def census_from_json(data: Iterable[dict]) -> dict[tuple[int, ...], int]:
    return {tuple(item["composition"]): item["count"] for item in data}


# --- dissection into unimodular simplices --------------------------------------


def zero_vertex_dissection_children(node: ProvenancedGraph, vertex: int) -> list[ProvenancedGraph]:
    """Children over the full incident edge multisets whose noncrossing tree
    has exactly one edge at the appended left vertex.  For a netflow with a
    zero entry at this vertex these are exactly the full-dimensional cells
    of the subdivision."""
    graph = node.graph
    inc = _ordered_incident(graph, vertex, incoming=True)
    out = _ordered_incident(graph, vertex, incoming=False)
    appended = len(inc) + 1
    children = []
    for tree in enumerate_noncrossing_trees(appended, len(out)):
        if tree.edges_at_left(appended) == 1:
            children.append(reduce_at_vertex(node, vertex, inc, out, tree))
    return children


def unimodular_dissection(
    graph: DirectedMultigraph, c: Sequence[int], *, node_cap: int = DEFAULT_NODE_CAP
) -> list[SimplexCell]:
    """Dissect the flow polytope of the source-augmented graph with unit
    source-to-sink netflow into unimodular simplices: reduce to the leaves
    of the source reduction tree, then run zero-entry reductions at the
    vertices 1..n in increasing order; each terminal graph contributes one
    cell whose vertices are the path indicator flows pushed back into the
    root's edge coordinates."""
    n = graph.vertex_count - 1
    cells: list[SimplexCell] = []
    budget = _Budget(node_cap)
    for leaf_index, leaf in enumerate(iter_reduction_leaves(graph, c, node_cap=node_cap)):
        composition = _leaf_composition(leaf.graph)
        terminals = [leaf]
        for vertex in range(1, n + 1):
            nxt = []
            for node in terminals:
                children = zero_vertex_dissection_children(node, vertex)
                budget.spend(len(children))
                nxt.extend(children)
            terminals = nxt
        for terminal in terminals:
            pm = phi_map(terminal)
            vertices = tuple(pm.apply(v) for v in path_flow_vertices(terminal))
            cells.append(
                SimplexCell(
                    vertices=vertices,
                    leaf_index=leaf_index,
                    leaf_composition=composition,
                    edge_sources=terminal.provenance,
                )
            )
    return cells


# --- DOT export ----------------------------------------------------------------


def _edge_label(graph: DirectedMultigraph) -> str:
    parts = []
    k = 0
    edges = graph.edge_multiset()
    while k < len(edges):
        run = 1
        while k + run < len(edges) and edges[k + run] == edges[k]:
            run += 1
        a, b = edges[k]
        parts.append(f"{a}→{b}" + (f" ×{run}" if run > 1 else ""))
        k += run
    return ", ".join(parts)


def export_dot(tree: ReductionTree) -> str:
    """Graphviz rendering: one box per tree node labeled with its edge
    multiset, reduction metadata (vertex, chosen tree) on each arc."""
    lines = ["digraph reduction_tree {", "  node [shape=box];"]
    ids: dict[int, int] = {}
    for k, node in enumerate(tree.nodes()):
        ids[id(node)] = k
        lines.append(f'  n{k} [label="{_edge_label(node.graph.graph)}"];')
    for node in tree.nodes():
        for child in node.children:
            step = child.step
            tlabel = ",".join(f"({p},{q})" for p, q in step.tree.edges)
            lines.append(
                f'  n{ids[id(node)]} -> n{ids[id(child)]} [label="i={step.vertex} T={tlabel}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
