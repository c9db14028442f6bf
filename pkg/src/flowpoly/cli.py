"""Command-line front end.

Subcommands:
  kostant   exact flow count for a graph and netflow
  ehrhart   exact Ehrhart polynomial coefficients
  lidskii   closed-form volume / count / c-form evaluators
  reduce    canonical reduction tree: census, JSON, or DOT
  dissect   unimodular dissection cells or summary
  verify    exhaustive identity suites over a generated family

Netflows may be given in full or without the sink entry, which is then
inferred as minus the sum.  All output is exact: integers in decimal,
rationals as p/q.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .kostant import FlowInstance, count_flows, ehrhart_polynomial
from .lidskii import lidskii_count, lidskii_count_c_form, lidskii_volume
from .multigraph import DirectedMultigraph, GraphFormatError, NetflowVector, read_graph
from .reduction import (
    DEFAULT_NODE_CAP,
    NodeCapExceeded,
    canonical_reduction_tree,
    census_to_json,
    export_dot,
    iter_reduction_leaves,
    leaf_census,
    reduction_tree_with_source,
    unimodular_dissection,
)
from .verify import SUITES


def _default_node_cap() -> int:
    env = os.environ.get("FLOWPOLY_NODE_CAP")
    if env is None:
        return DEFAULT_NODE_CAP
    try:
        return int(env)
    except ValueError:
        raise SystemExit(f"FLOWPOLY_NODE_CAP={env!r} is not an integer")


def _parse_int_list(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError:
        raise SystemExit(f"could not parse {what} {text!r}; expected comma-separated integers")


def _netflow_for(graph: DirectedMultigraph, text: str) -> NetflowVector:
    entries = _parse_int_list(text, "netflow")
    nv = graph.vertex_count
    if len(entries) == nv:
        if sum(entries) != 0:
            raise SystemExit(f"netflow {entries} does not sum to zero")
        return NetflowVector(entries)
    if len(entries) == nv - 1:
        return NetflowVector.completing(entries)
    raise SystemExit(
        f"netflow needs {nv} entries (or {nv - 1} with the sink inferred), got {len(entries)}"
    )


def _load_graph(path: str) -> DirectedMultigraph:
    try:
        return read_graph(path)
    except FileNotFoundError:
        raise SystemExit(f"graph file not found: {path}")
    except GraphFormatError as exc:
        raise SystemExit(f"{path}: {exc}")


def _emit(args, payload: dict, human: str) -> None:
    if getattr(args, "emit", "human") == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(human)


def cmd_kostant(args) -> int:
    graph = _load_graph(args.graph)
    netflow = _netflow_for(graph, args.netflow)
    value = count_flows(FlowInstance(graph, netflow))
    _emit(args, {"count": value, "netflow": list(netflow.entries)}, str(value))
    return 0


def cmd_ehrhart(args) -> int:
    graph = _load_graph(args.graph)
    netflow = _netflow_for(graph, args.netflow)
    try:
        poly = ehrhart_polynomial(FlowInstance(graph, netflow))
    except ValueError as exc:
        raise SystemExit(str(exc))
    strings = poly.coefficient_strings()
    _emit(args, {"coefficients": strings}, ", ".join(strings) if strings else "0")
    return 0


def cmd_lidskii(args) -> int:
    graph = _load_graph(args.graph)
    try:
        if args.mode == "c-form":
            if args.c is None:
                raise SystemExit("--mode c-form requires --c")
            value = lidskii_count_c_form(graph, _parse_int_list(args.c, "c"))
        else:
            if args.netflow is None:
                raise SystemExit(f"--mode {args.mode} requires --netflow")
            netflow = _netflow_for(graph, args.netflow)
            fn = lidskii_volume if args.mode == "volume" else lidskii_count
            value = fn(graph, netflow)
    except ValueError as exc:
        raise SystemExit(str(exc))
    _emit(args, {"mode": args.mode, "value": value}, str(value))
    return 0


def cmd_reduce(args) -> int:
    graph = _load_graph(args.graph)
    c = _parse_int_list(args.c, "c") if args.c is not None else None
    try:
        if args.emit == "dot":
            if c is not None:
                tree = reduction_tree_with_source(graph, c, node_cap=args.node_cap)
            else:
                tree = canonical_reduction_tree(graph, node_cap=args.node_cap)
            print(export_dot(tree), end="")
            return 0
        # censuses never hold the tree in memory
        census = leaf_census(iter_reduction_leaves(graph, c, node_cap=args.node_cap))
    except (ValueError, NodeCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.emit == "json":
        print(json.dumps({
            "leaf_count": sum(census.values()),
            "census": census_to_json(census),
        }, indent=2, sort_keys=True))
        return 0
    print(f"leaves: {sum(census.values())}")
    for j, count in census.items():
        print(f"  composition {j}: {count}")
    return 0


def cmd_dissect(args) -> int:
    graph = _load_graph(args.graph)
    c = _parse_int_list(args.c, "c")
    try:
        cells = unimodular_dissection(graph, c, node_cap=args.node_cap)
    except (ValueError, NodeCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.emit == "cells":
        payload = [
            {
                "leaf": cell.leaf_index,
                "leaf_composition": list(cell.leaf_composition),
                "vertices": [list(v) for v in cell.vertices],
            }
            for cell in cells
        ]
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0
    by_leaf: dict[tuple[int, tuple[int, ...]], int] = {}
    for cell in cells:
        key = (cell.leaf_index, cell.leaf_composition)
        by_leaf[key] = by_leaf.get(key, 0) + 1
    print(f"cells: {len(cells)}")
    for (leaf, comp), count in sorted(by_leaf.items()):
        print(f"  leaf {leaf} composition {comp}: {count} cells")
    return 0


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    kwargs = {"max_vertices": args.max_vertices, "max_edges": args.max_edges}
    all_passed = True
    any_instances = 0
    for name in names:
        fn = SUITES[name]
        if name == "eq1":
            result = fn(max_netflow=args.max_netflow, corrupt=args.debug_corrupt_formula, **kwargs)
        elif name == "eq2":
            result = fn(max_netflow=args.max_netflow, corrupt=args.debug_corrupt_formula, **kwargs)
        elif name == "thm41":
            result = fn(max_c=args.max_netflow, corrupt=args.debug_corrupt_formula, **kwargs)
        else:
            result = fn(
                max_c=args.max_netflow,
                node_cap=args.node_cap,
                debug_pairwise=args.debug_pairwise_disjoint,
                **kwargs,
            )
        any_instances += result.instances
        print(result.summary())
        for failure in result.failures[:3]:
            print(f"  counterexample: {json.dumps(failure, sort_keys=True)}")
        all_passed = all_passed and result.passed
    if any_instances == 0:
        print("warning: 0 instances in the selected family bounds")
    return 0 if all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowpoly",
        description="Exact volumes, lattice-point counts, reduction trees and "
        "unimodular dissections of flow polytopes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    node_cap = _default_node_cap()

    p = sub.add_parser("kostant", help="count integer flows")
    p.add_argument("--graph", required=True)
    p.add_argument("--netflow", required=True)
    p.add_argument("--emit", choices=["human", "json"], default="human")
    p.set_defaults(fn=cmd_kostant)

    p = sub.add_parser("ehrhart", help="Ehrhart polynomial coefficients, low degree first")
    p.add_argument("--graph", required=True)
    p.add_argument("--netflow", required=True)
    p.add_argument("--emit", choices=["human", "json"], default="human")
    p.set_defaults(fn=cmd_ehrhart)

    p = sub.add_parser("lidskii", help="closed-form volume / count evaluators")
    p.add_argument("--graph", required=True)
    p.add_argument("--mode", choices=["volume", "count", "c-form"], required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--netflow")
    group.add_argument("--c")
    p.add_argument("--emit", choices=["human", "json"], default="human")
    p.set_defaults(fn=cmd_lidskii)

    p = sub.add_parser("reduce", help="canonical reduction tree")
    p.add_argument("--graph", required=True)
    p.add_argument("--c", help="attach a source with these edge multiplicities first")
    p.add_argument("--emit", choices=["census", "json", "dot"], default="census")
    p.add_argument("--node-cap", type=int, default=node_cap)
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("dissect", help="unimodular dissection of the augmented polytope")
    p.add_argument("--graph", required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--emit", choices=["summary", "cells"], default="summary")
    p.add_argument("--node-cap", type=int, default=node_cap)
    p.set_defaults(fn=cmd_dissect)

    p = sub.add_parser("verify", help="exhaustive identity suites")
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    p.add_argument("--max-vertices", type=int, default=4)
    p.add_argument("--max-edges", type=int, default=6)
    p.add_argument("--max-netflow", type=int, default=2)
    p.add_argument("--node-cap", type=int, default=node_cap)
    p.add_argument("--debug-pairwise-disjoint", action="store_true")
    p.add_argument("--debug-corrupt-formula", action="store_true",
                   help="perturb the formula side to confirm the suite detects errors")
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
