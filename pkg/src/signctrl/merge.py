"""Merging certified subgraphs and the decomposition-plus-merging pipeline.

Two certified, node-disjoint graphs joined by a set of edges stay certified
exactly when every nonempty subset of the joining edges' endpoints has a
dedicated node in the merged graph. The pipeline merges the input-rooted
paths one at a time, each time keeping a largest admissible set of joining
edges; nominal edges that never make it in are reported as harmful.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations

from .certify import AssumptionReport, Status, Verdict, first_blocking_subset
from .decompose import Path, path_search
from .errors import NetworkError
from .graph import Edge, Graph, SignedNetwork, build_graph, canonical, check_accessibility, check_cap


@dataclass(frozen=True)
class MergeStep:
    step: int
    merged_nodes: tuple[int, ...]  # state nodes of the graph merged so far
    incoming_path: int  # input index of the path being merged in
    found: tuple[Edge, ...]
    accepted: tuple[Edge, ...]
    discarded: tuple[Edge, ...]
    blocking: tuple[int, ...] | None  # first blocking subset with every found edge present


@dataclass(frozen=True)
class MergeReport:
    steps: tuple[MergeStep, ...]
    final_graph: Graph
    discarded_total: tuple[Edge, ...]
    uncovered_nodes: tuple[int, ...]
    merge_order: tuple[int, ...]
    check: str = "exact"


def _check_disjoint(ga: Graph, gb: Graph) -> None:
    overlap = (ga.states & gb.states) | (ga.inputs & gb.inputs)
    if overlap:
        raise NetworkError(f"graphs share nodes {sorted(overlap)}")


def connecting_edges(ga: Graph, gb: Graph, net: SignedNetwork) -> tuple[Edge, ...]:
    """Nominal state edges with one endpoint in each graph, sorted."""
    _check_disjoint(ga, gb)
    return tuple(
        e for e in net.edges
        if (e[0] in ga.states and e[1] in gb.states) or (e[0] in gb.states and e[1] in ga.states)
    )


def _union(ga: Graph, gb: Graph, edges: Iterable[Edge] = ()) -> Graph:
    return Graph(
        ga.states | gb.states,
        ga.inputs | gb.inputs,
        ga.state_edges | gb.state_edges | frozenset(canonical(*e) for e in edges),
        ga.input_edges | gb.input_edges,
        n=max(ga.n, gb.n),
    )


def _check_crossing(ga: Graph, gb: Graph, edges: Iterable[Edge]) -> list[Edge]:
    out = []
    for e in edges:
        i, j = canonical(*e)
        if not ((i in ga.states and j in gb.states) or (i in gb.states and j in ga.states)):
            raise NetworkError(f"edge {(i, j)} does not join the two graphs")
        out.append((i, j))
    return sorted(set(out))


def _with_edges(masks: dict[int, int], edges: Iterable[Edge]) -> dict[int, int]:
    out = dict(masks)
    for i, j in edges:
        out[i] |= 1 << j
        out[j] |= 1 << i
    return out


def _endpoints(edges: Iterable[Edge]) -> list[int]:
    return sorted({x for e in edges for x in e})


CHECKS = ("exact", "endpoints")


def _blocking(masks: dict[int, int], states: Sequence[int], edges: Sequence[Edge],
              check: str, cap: int | None) -> tuple[int, ...] | None:
    ends = _endpoints(edges)
    if not ends:
        return None
    if check == "endpoints":
        return first_blocking_subset(masks, ends, cap)
    if check == "exact":
        return first_blocking_subset(masks, states, cap, touching=ends)
    raise ValueError(f"unknown merge check {check!r}; expected one of {CHECKS}")


def merge_condition(ga: Graph, gb: Graph, candidate: Iterable[Edge], cap: int | None = None,
                    check: str = "exact") -> tuple[int, ...] | None:
    """First blocking subset once ``candidate`` joins the two graphs, or ``None``.

    ``check="endpoints"`` examines only subsets of the joining edges'
    endpoints. That test can miss blocking subsets mixing endpoints with
    other nodes (e.g. path 2-3-1 with input at 1 joined to 12-11 with input
    at 11 by (1,12), (3,11): {2,3,12} blocks). ``check="exact"`` examines
    every subset meeting an endpoint, which decides certification of the
    merged graph when both parts are certified.
    """
    _check_disjoint(ga, gb)
    edges = _check_crossing(ga, gb, candidate)
    merged = _union(ga, gb, edges)
    return _blocking(merged.masks, sorted(merged.states), edges, check, cap)


def largest_edge_set(ga: Graph, gb: Graph, all_edges: Iterable[Edge], cap: int | None = None,
                     check: str = "exact") -> tuple[tuple[Edge, ...], tuple[Edge, ...]]:
    """Largest admissible subset of the joining edges, and the rest.

    Searches subsets by descending size. Among admissible subsets of the
    maximum size it discards the edges closing the most triangles in the
    fully joined graph (common state neighbours of the endpoints), since
    shared neighbours are what destroy dedicated nodes; remaining ties go to
    the lexicographically smallest accepted list.
    """
    _check_disjoint(ga, gb)
    edges = _check_crossing(ga, gb, all_edges)
    cap = check_cap(len(edges), "joining edge set", cap)
    base = _union(ga, gb).masks
    full = _union(ga, gb, edges)
    states = sorted(full.states)
    closing = {e: len(full.state_neighbors(e[0]) & full.state_neighbors(e[1])) for e in edges}

    for k in range(len(edges), -1, -1):
        admissible = []
        for subset in combinations(edges, k):
            if _blocking(_with_edges(base, subset), states, subset, check, cap) is None:
                admissible.append(subset)
        if admissible:
            def rank(subset):
                dropped = sum(closing[e] for e in edges if e not in subset)
                return (-dropped, subset)
            accepted = min(admissible, key=rank)
            return accepted, tuple(e for e in edges if e not in accepted)
    raise AssertionError("the empty edge set is always admissible")


def merge_graphs(ga: Graph, gb: Graph, accepted: Iterable[Edge], cap: int | None = None,
                 check: str = "exact") -> Graph:
    """Union of both graphs plus ``accepted``; refuses edge sets that break certification."""
    edges = _check_crossing(ga, gb, accepted)
    blocking = merge_condition(ga, gb, edges, cap, check)
    if blocking is not None:
        raise NetworkError(f"edges {edges} cannot be merged: subset {blocking} has no dedicated node")
    return _union(ga, gb, edges)


def _empty_graph(n: int) -> Graph:
    return Graph(frozenset(), frozenset(), frozenset(), frozenset(), n=n)


def graph_merging(paths: Sequence[Path], net: SignedNetwork, cap: int | None = None,
                  check: str = "exact") -> MergeReport:
    """Merge the path graphs in input order and report what was kept."""
    full = build_graph(net)
    steps = []
    order = []
    current = _empty_graph(net.n)
    for k, path in enumerate(paths, start=1):
        incoming = path.as_graph(full)
        order.append(k)
        if k == 1:
            current = incoming
            continue
        found = connecting_edges(current, incoming, net)
        accepted, discarded = largest_edge_set(current, incoming, found, cap, check)
        blocking = merge_condition(current, incoming, found, cap, check) if discarded else None
        steps.append(MergeStep(
            step=len(steps) + 1,
            merged_nodes=tuple(sorted(current.states)),
            incoming_path=k,
            found=found,
            accepted=accepted,
            discarded=discarded,
            blocking=blocking,
        ))
        current = merge_graphs(current, incoming, accepted, cap, check)

    missing = tuple(e for e in net.edges if e not in current.state_edges)
    uncovered = tuple(i for i in range(1, net.n + 1) if i not in current.states)
    return MergeReport(tuple(steps), current, missing, uncovered, tuple(order), check)


def verdict_from_report(report: MergeReport, net: SignedNetwork) -> Verdict:
    """Certified when the merged graph recovers every node and every edge."""
    accessible = check_accessibility(build_graph(net))
    assumptions = AssumptionReport(accessible=accessible)
    ok = not report.uncovered_nodes and not report.discarded_total and all(accessible.values())
    return Verdict(
        Status.CERTIFIED if ok else Status.NOT_CERTIFIED,
        "pipeline",
        discarded_edges=report.discarded_total,
        uncovered_nodes=report.uncovered_nodes,
        assumptions=assumptions,
    )


def analyze(net: SignedNetwork, order: str = "degree", cap: int | None = None,
            check: str = "exact") -> tuple[list[Path], MergeReport, Verdict]:
    """Path search followed by the merging pipeline on ``net``."""
    paths = path_search(net, order=order)
    report = graph_merging(paths, net, cap, check)
    return paths, report, verdict_from_report(report, net)
