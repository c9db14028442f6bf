"""Geometric validation: simplex vertices from source-sink paths,
unimodularity certificates against the affine-span lattice, exact polytope
membership, and the verification reports that tie the dissection pipeline
back to the brute-force counts.

The affine span of a flow polytope is a coset of the integer kernel of the
incidence matrix.  A basis of that kernel lattice is computed once per
ambient instance by integer column reduction (Hermite style); a simplex is
unimodular exactly when its edge vectors, written in that basis, have
determinant +-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .kostant import FlowInstance, count_flows, enumerate_flows, normalized_volume_oracle
from .multigraph import (
    DirectedMultigraph,
    NetflowVector,
    apply_incidence,
    attach_source,
    incidence_matrix,
)
from .lidskii import in_plus_c_netflow


# --- simplex cells ----------------------------------------------------------


@dataclass(frozen=True)
class SimplexCell:
    """A lattice simplex in the root graph's edge coordinates.

    vertices: d+1 integer vectors.  leaf_index / leaf_composition identify
    the reduction-tree leaf the cell came from; edge_sources records, per
    terminal edge, the set of root edges it sums, which is the composed
    coordinate map that produced the vertices.
    """

    vertices: tuple[tuple[int, ...], ...]
    leaf_index: int = 0
    leaf_composition: tuple[int, ...] = ()
    edge_sources: tuple[frozenset[int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(tuple(v) for v in self.vertices))


def path_flow_vertices(node) -> list[tuple[int, ...]]:
    """Indicator flows of the directed first-to-last-vertex paths of a
    graph, one 0/1 vector per path.  For unit source/sink netflow these are
    exactly the polytope's vertices.  Accepts a graph or any object with a
    .graph attribute."""
    graph: DirectedMultigraph = getattr(node, "graph", node)
    target = graph.last_vertex
    out: list[tuple[int, ...]] = []
    used: list[int] = []

    def walk(v: int):
        if v == target:
            vec = [0] * graph.edge_count
            for e in used:
                vec[e] = 1
            out.append(tuple(vec))
            return
        for e in graph.out_edges_at(v):
            used.append(e)
            walk(graph.edges[e][1])
            used.pop()

    walk(graph.first_vertex)
    return out


# --- integer linear algebra -------------------------------------------------


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return x, y, g


def integral_kernel_basis(matrix: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of {z integer : M z = 0} spanning the whole integer kernel
    lattice, via unimodular column operations."""
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    cols = [[matrix[i][j] for i in range(nrows)] for j in range(ncols)]
    trans = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    fixed = 0
    for row in range(nrows):
        pivot = None
        for j in range(fixed, ncols):
            if cols[j][row] == 0:
                continue
            if pivot is None:
                pivot = j
                continue
            a, b = cols[pivot][row], cols[j][row]
            x, y, g = _xgcd(a, b)
            ag, bg = a // g, b // g
            cp, cj = cols[pivot], cols[j]
            tp, tj = trans[pivot], trans[j]
            for i in range(nrows):
                u, v = cp[i], cj[i]
                cp[i] = x * u + y * v
                cj[i] = -bg * u + ag * v
            for i in range(ncols):
                u, v = tp[i], tj[i]
                tp[i] = x * u + y * v
                tj[i] = -bg * u + ag * v
        if pivot is not None:
            cols[fixed], cols[pivot] = cols[pivot], cols[fixed]
            trans[fixed], trans[pivot] = trans[pivot], trans[fixed]
            fixed += 1
    basis = []
    for j in range(fixed, ncols):
        vec = trans[j]
        lead = next((x for x in vec if x != 0), 0)
        if lead < 0:
            vec = [-x for x in vec]
        basis.append(tuple(vec))
    return basis


def _det_bareiss(rows: Sequence[Sequence[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            rik = m[i][k]
            rkk = m[k][k]
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * rkk - rik * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _pivot_columns(rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Column indices making the row set invertible, by integer
    fraction-free elimination."""
    if not rows:
        return ()
    work = [list(r) for r in rows]
    nrows = len(work)
    ncols = len(work[0])
    pivots = []
    r = 0
    for j in range(ncols):
        piv = next((i for i in range(r, nrows) if work[i][j] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        prow = work[r]
        pval = prow[j]
        for i in range(r + 1, nrows):
            v = work[i][j]
            if v:
                row = [a * pval - v * b for a, b in zip(work[i], prow)]
                g = 0
                for x in row:
                    g = _gcd_int(g, x)
                work[i] = [x // g for x in row] if g > 1 else row
        pivots.append(j)
        r += 1
        if r == nrows:
            break
    return tuple(pivots)


def _gcd_int(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


class AmbientLattice:
    """Lattice of the affine span of a flow polytope on a fixed graph,
    presented by a basis of the integer kernel of the incidence matrix."""

    def __init__(self, graph: DirectedMultigraph):
        self.graph = graph
        self.basis = integral_kernel_basis(incidence_matrix(graph))
        self.dim = len(self.basis)
        self.pivot_cols = _pivot_columns(self.basis)
        if len(self.pivot_cols) != self.dim:
            raise ArithmeticError("kernel basis is not full rank")
        self.base_det = abs(_det_bareiss([[b[j] for j in self.pivot_cols] for b in self.basis]))
        if self.dim and self.base_det == 0:
            raise ArithmeticError("degenerate lattice basis")


def simplex_is_unimodular(
    vertices: Sequence[Sequence[int]], lattice_basis: Sequence[Sequence[int]]
) -> bool:
    """True when the simplex spanned by the vertices is a smallest simplex
    of the lattice generated by the given basis rows."""
    d = len(lattice_basis)
    if len(vertices) != d + 1:
        raise ValueError(f"simplex has {len(vertices)} vertices, lattice rank is {d}")
    if d == 0:
        return True
    pivots = _pivot_columns(lattice_basis)
    if len(pivots) != d:
        raise ValueError("lattice basis rows are dependent")
    base = abs(_det_bareiss([[row[j] for j in pivots] for row in lattice_basis]))
    v0 = vertices[0]
    diff_rows = [[v[j] - v0[j] for j in pivots] for v in vertices[1:]]
    return abs(_det_bareiss(diff_rows)) == base


def is_unimodular(
    cell: SimplexCell, ambient: FlowInstance, *, lattice: AmbientLattice | None = None
) -> bool:
    """Unimodularity of a cell against the ambient polytope's affine-span
    lattice.  Raises if the cell does not have dim+1 vertices or leaves the
    affine span."""
    lat = lattice if lattice is not None else AmbientLattice(ambient.graph)
    verts = cell.vertices
    if len(verts) != lat.dim + 1:
        raise ValueError(f"cell has {len(verts)} vertices, ambient span needs {lat.dim + 1}")
    if lat.dim == 0:
        return True
    v0 = verts[0]
    zero = (0,) * lat.graph.vertex_count
    for v in verts[1:]:
        diff = tuple(a - b for a, b in zip(v, v0))
        if apply_incidence(lat.graph, diff) != zero:
            raise ValueError("cell vertices do not lie in one affine span fiber")
    rows = [[v[j] - v0[j] for j in lat.pivot_cols] for v in verts[1:]]
    return abs(_det_bareiss(rows)) == lat.base_det


def contains_flow(inst: FlowInstance, point: Sequence) -> bool:
    """Exact membership: nonnegative coordinates and incidence * point equal
    to the netflow.  Rational points welcome."""
    graph = inst.graph
    if len(point) != graph.edge_count:
        raise ValueError(f"point has {len(point)} coordinates, graph has {graph.edge_count} edges")
    if any(x < 0 for x in point):
        return False
    return apply_incidence(graph, point) == inst.netflow.entries


# --- verification reports ---------------------------------------------------


def _jsonable(value):
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (frozenset, set)):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, Fraction):
        return str(value)
    return value


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    title: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, **details) -> None:
        self.checks.append(CheckResult(name, bool(passed), _jsonable(details)))

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "details": c.details} for c in self.checks
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "VerificationReport":
        report = VerificationReport(data["title"])
        for c in data["checks"]:
            report.checks.append(CheckResult(c["name"], c["passed"], c["details"]))
        return report


def unit_source_sink_netflow(graph: DirectedMultigraph) -> NetflowVector:
    """+1 at the first vertex, -1 at the last, 0 elsewhere."""
    entries = [0] * graph.vertex_count
    entries[0] = 1
    entries[-1] = -1
    return NetflowVector(tuple(entries))


def verify_dissection(
    graph: DirectedMultigraph,
    c: Sequence[int],
    *,
    node_cap: int | None = None,
    debug_pairwise: bool = False,
) -> VerificationReport:
    """Check the unimodular dissection of the source-augmented polytope:
    (a) every cell vertex is a point of the polytope, (b) every cell is a
    full-dimensional unimodular simplex, (c) the cell count equals the
    normalized volume of the ambient polytope, (d) the cell count equals
    the flow count of the original graph at netflow indeg-1+c."""
    from .reduction import DEFAULT_NODE_CAP, unimodular_dissection

    cap = DEFAULT_NODE_CAP if node_cap is None else node_cap
    cells = unimodular_dissection(graph, c, node_cap=cap)
    augmented = attach_source(graph, c)
    ambient = FlowInstance(augmented, unit_source_sink_netflow(augmented))
    lattice = AmbientLattice(augmented)
    report = VerificationReport(f"dissection c={tuple(c)}")

    bad_vertex = None
    for idx, cell in enumerate(cells):
        for v in cell.vertices:
            if not contains_flow(ambient, v):
                bad_vertex = {"cell": idx, "vertex": list(v)}
                break
        if bad_vertex:
            break
    report.add("cell_vertices_in_polytope", bad_vertex is None,
               cells=len(cells), counterexample=bad_vertex)

    bad_cell = None
    for idx, cell in enumerate(cells):
        if len(cell.vertices) != lattice.dim + 1:
            bad_cell = {"cell": idx, "vertices": list(cell.vertices),
                        "reason": f"expected {lattice.dim + 1} vertices"}
            break
        if not is_unimodular(cell, ambient, lattice=lattice):
            bad_cell = {"cell": idx, "vertices": list(cell.vertices),
                        "reason": "determinant not +-1"}
            break
    report.add("cells_unimodular_full_dimensional", bad_cell is None,
               dimension=lattice.dim, counterexample=bad_cell)

    volume = normalized_volume_oracle(ambient)
    report.add("cell_count_equals_normalized_volume", len(cells) == volume,
               cells=len(cells), normalized_volume=volume)

    target = count_flows(FlowInstance(graph, in_plus_c_netflow(graph, c)))
    report.add("cell_count_equals_flow_count", len(cells) == target,
               cells=len(cells), flow_count=target)

    if debug_pairwise:
        overlap = _pairwise_interior_check(cells, lattice)
        report.add("pairwise_interiors_disjoint", overlap is None, counterexample=overlap)
    return report


def _lattice_coordinates(lattice: AmbientLattice, ref: Sequence[int], point: Sequence[int]):
    """Coordinates of point - ref in the kernel lattice basis; exact, raises
    if the difference is not a lattice vector."""
    pivots = lattice.pivot_cols
    d = lattice.dim
    rhs = [Fraction(point[j] - ref[j]) for j in pivots]
    mat = [[Fraction(lattice.basis[i][j]) for i in range(d)] for j in pivots]
    # solve mat * x = rhs by Gaussian elimination
    for col in range(d):
        piv = next(i for i in range(col, d) if mat[i][col] != 0)
        mat[col], mat[piv] = mat[piv], mat[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / mat[col][col]
        mat[col] = [x * inv for x in mat[col]]
        rhs[col] *= inv
        for i in range(d):
            if i != col and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[col])]
                rhs[i] -= f * rhs[col]
    coords = []
    for x in rhs:
        if x.denominator != 1:
            raise ArithmeticError("point difference is not a lattice vector")
        coords.append(x.numerator)
    return tuple(coords)


def _pairwise_interior_check(cells: Sequence[SimplexCell], lattice: AmbientLattice):
    """Shared-facet scan: duplicate cells, facets claimed by three or more
    cells, and facet-sharing pairs whose opposite vertices land on the same
    side of the facet hyperplane are reported as interior overlaps."""
    if not cells:
        return None
    d = lattice.dim
    ref = cells[0].vertices[0]
    coord_cache: dict[tuple[int, ...], tuple[int, ...]] = {}

    def coords(v):
        got = coord_cache.get(v)
        if got is None:
            got = _lattice_coordinates(lattice, ref, v)
            coord_cache[v] = got
        return got

    facet_owners: dict[frozenset, list[int]] = {}
    for idx, cell in enumerate(cells):
        vset = frozenset(cell.vertices)
        if len(vset) != len(cell.vertices):
            return {"reason": "repeated vertex inside a cell", "cell": idx}
        for v in cell.vertices:
            facet = frozenset(x for x in cell.vertices if x != v)
            facet_owners.setdefault(facet, []).append(idx)
    seen_cells: dict[frozenset, int] = {}
    for idx, cell in enumerate(cells):
        key = frozenset(cell.vertices)
        if key in seen_cells:
            return {"reason": "duplicate cell", "cells": [seen_cells[key], idx]}
        seen_cells[key] = idx
    for facet, owners in facet_owners.items():
        if len(owners) > 2:
            return {"reason": "facet shared by more than two cells", "cells": owners}
        if len(owners) == 2:
            a, b = owners
            facet_pts = sorted(facet)
            apex_a = next(v for v in cells[a].vertices if v not in facet)
            apex_b = next(v for v in cells[b].vertices if v not in facet)
            base = coords(facet_pts[0])
            rows = [[x - y for x, y in zip(coords(p), base)] for p in facet_pts[1:]]
            side_a = _det_bareiss(rows + [[x - y for x, y in zip(coords(apex_a), base)]])
            side_b = _det_bareiss(rows + [[x - y for x, y in zip(coords(apex_b), base)]])
            if side_a == 0 or side_b == 0 or (side_a > 0) == (side_b > 0):
                return {
                    "reason": "cells on the same side of a shared facet",
                    "cells": [a, b],
                }
    return None


def verify_in_vector_bijection(graph: DirectedMultigraph, c: Sequence[int]) -> VerificationReport:
    """Check that flows at netflow indeg-1+c on the graph correspond one to
    one with flows on the source-augmented graph at the matching netflow
    with a zero source entry, via restriction to the original edges."""
    c = tuple(int(x) for x in c)
    a = in_plus_c_netflow(graph, c)
    augmented = attach_source(graph, c)
    big_netflow = NetflowVector((0,) + a.entries)
    small = FlowInstance(graph, a)
    big = FlowInstance(augmented, big_netflow)
    report = VerificationReport(f"in-vector bijection c={c}")

    small_count = count_flows(small)
    big_count = count_flows(big)
    report.add("counts_equal", small_count == big_count,
               small=small_count, augmented=big_count)

    source_width = augmented.edge_count - graph.edge_count
    small_flows = set(enumerate_flows(small))
    restricted = [f[source_width:] for f in enumerate_flows(big)]
    injective = len(set(restricted)) == len(restricted)
    onto = set(restricted) == small_flows
    report.add("restriction_injective", injective)
    report.add("restriction_image_matches", onto,
               missing=sorted(small_flows - set(restricted))[:3],
               extra=sorted(set(restricted) - small_flows)[:3])
    return report


def verify_integral_equivalence(node, netflow, *, dilations=(1, 2)) -> VerificationReport:
    """Check that the node's coordinate map into the root is a
    count-preserving injection on lattice points: node flows map to distinct
    root flows, at each requested dilation."""
    from .reduction import phi_map

    a = NetflowVector.coerce(netflow)
    phi = phi_map(node)
    root = node.root
    report = VerificationReport("integral equivalence")
    for t in dilations:
        scaled = a.dilate(t)
        node_flows = enumerate_flows(FlowInstance(node.graph, scaled))
        images = {phi.apply(f) for f in node_flows}
        root_inst = FlowInstance(root, scaled)
        in_root = sum(1 for v in images if contains_flow(root_inst, v))
        report.add(
            f"phi_injects_flows_t={t}",
            len(node_flows) == len(images) == in_root,
            node_count=len(node_flows),
            distinct_images=len(images),
            images_in_root=in_root,
        )
    return report
