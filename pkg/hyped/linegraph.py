"""
Line graphs and exact s-distances.

The line graph has one node per hyperedge and an edge of weight ``|e ∩ f|``
for every overlapping pair; the s-line graph keeps weights >= s. Exact
s-distances are answered with BFS over an ``SAdjacency`` and serve as the
ground truth for the oracle and the evaluation harness.
"""

import logging
import math
from collections import Counter
from pathlib import Path

import networkx as nx

from .config import get_oracle_defaults
from .connectivity import OverlapLedger, SAdjacency, direct_s_adjacency, s_adjacency
from .exceptions import InvalidQueryError, LineGraphTooLargeError
from .hypercore import Hypergraph

logger = logging.getLogger(__name__)

INF = math.inf


class LineGraph:
    """Weighted line graph; ``graph`` is a networkx graph over hyperedge ids."""

    def __init__(self, graph: nx.Graph):
        self.graph = graph

    @property
    def n_nodes(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def n_edges(self) -> int:
        return self.graph.number_of_edges()

    def weight(self, e: int, f: int) -> int:
        data = self.graph.get_edge_data(e, f)
        return data["weight"] if data else 0

    def weighted_edges(self) -> list[tuple[int, int, int]]:
        return sorted((min(e, f), max(e, f), w) for e, f, w in self.graph.edges(data="weight"))


class AugmentedLineGraph:
    """Line graph plus one node per vertex and a membership edge per incidence.

    Nodes are ``("hyperedge", e)`` or ``("vertex", v)`` and carry a ``kind``
    attribute; edges carry ``kind`` in {"overlap", "membership"}.
    """

    def __init__(self, graph: nx.Graph):
        self.graph = graph

    @property
    def n_nodes(self) -> int:
        return self.graph.number_of_nodes()

    def _count(self, kind: str) -> int:
        return sum(1 for _, _, k in self.graph.edges(data="kind") if k == kind)

    @property
    def n_overlap_edges(self) -> int:
        return self._count("overlap")

    @property
    def n_membership_edges(self) -> int:
        return self._count("membership")


def build_line_graph(h: Hypergraph, *, edge_budget: int | None = None) -> LineGraph:
    if edge_budget is None:
        edge_budget = int(get_oracle_defaults()["line_graph_edge_budget"])

    graph = nx.Graph()
    graph.add_nodes_from(range(h.n_edges))
    for e, edge in enumerate(h.edges):
        overlap = Counter()
        for v in edge:
            overlap.update(f for f in h.incidence[v] if f > e)
        for f in sorted(overlap):
            graph.add_edge(e, f, weight=overlap[f])
        if graph.number_of_edges() > edge_budget:
            raise LineGraphTooLargeError(
                f"line graph exceeds the edge budget of {edge_budget} edges"
            )
    logger.debug("Line graph: %d nodes, %d edges", graph.number_of_nodes(), graph.number_of_edges())
    return LineGraph(graph)


def s_line_graph(lg: LineGraph, s: int) -> LineGraph:
    graph = nx.Graph()
    graph.add_nodes_from(lg.graph.nodes)
    graph.add_weighted_edges_from(
        (e, f, w) for e, f, w in lg.weighted_edges() if w >= s
    )
    return LineGraph(graph)


def build_augmented_line_graph(h: Hypergraph, *, edge_budget: int | None = None) -> AugmentedLineGraph:
    lg = build_line_graph(h, edge_budget=edge_budget)
    graph = nx.Graph()
    graph.add_nodes_from((("hyperedge", e) for e in range(h.n_edges)), kind="hyperedge")
    graph.add_nodes_from((("vertex", v) for v in range(h.n_vertices)), kind="vertex")
    for e, f, w in lg.weighted_edges():
        graph.add_edge(("hyperedge", e), ("hyperedge", f), weight=w, kind="overlap")
    for e, edge in enumerate(h.edges):
        for v in edge:
            graph.add_edge(("vertex", v), ("hyperedge", e), weight=1, kind="membership")
    return AugmentedLineGraph(graph)


def write_line_graph(lg: LineGraph, path) -> None:
    """``e TAB f TAB weight`` rows."""
    nx.write_edgelist(lg.graph, Path(path), delimiter="\t", data=["weight"])


def write_augmented_line_graph(alg: AugmentedLineGraph, h: Hypergraph, path) -> None:
    """``u TAB v TAB weight TAB kind-of-u`` rows; vertex nodes use their token."""
    with open(path, "w", encoding="utf-8") as fh:
        overlap = sorted(
            (u[1], v[1], w)
            for u, v, w in alg.graph.edges(data="weight")
            if u[0] == v[0] == "hyperedge"
        )
        for e, f, w in overlap:
            e, f = min(e, f), max(e, f)
            fh.write(f"{e}\t{f}\t{w}\thyperedge\n")
        for e, edge in enumerate(h.edges):
            for v in edge:
                fh.write(f"{h.vertex_tokens[v]}\t{e}\t1\tvertex\n")


# ---------------------------------------------------------------------------
# BFS primitives
# ---------------------------------------------------------------------------


def bfs_distances(adj: SAdjacency, sources, *, within=None) -> dict[int, int]:
    """Multi-source BFS; *within* optionally restricts the explored hyperedges."""
    dist = {source: 0 for source in sources}
    frontier = list(dist)
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y in dist or (within is not None and y not in within):
                    continue
                dist[y] = depth
                nxt.append(y)
        frontier = nxt
    return dist


def bfs_tree(adj: SAdjacency, source: int) -> tuple[dict[int, int], dict[int, int | None]]:
    """BFS distances and parents; each parent is the lowest-id predecessor."""
    dist = {source: 0}
    parent: dict[int, int | None] = {source: None}
    frontier = [source]
    while frontier:
        nxt = []
        for x in sorted(frontier):
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    nxt.append(y)
        frontier = nxt
    return dist, parent


def tree_path(parent: dict[int, int | None], target: int) -> tuple[int, ...]:
    path = [target]
    while (step := parent[path[-1]]) is not None:
        path.append(step)
    path.reverse()
    return tuple(path)


def _expand(adj: SAdjacency, frontier, dist, other) -> tuple[list[int], float]:
    best = INF
    nxt = []
    for x in frontier:
        step = dist[x] + 1
        for y in adj[x]:
            if y in other:
                best = min(best, step + other[y])
            if y not in dist:
                dist[y] = step
                nxt.append(y)
    return nxt, best


def _bidirectional(adj: SAdjacency, e: int, f: int) -> float:
    forward, backward = {e: 0}, {f: 0}
    front, back = [e], [f]
    while front and back:
        if len(front) <= len(back):
            front, best = _expand(adj, front, forward, backward)
        else:
            back, best = _expand(adj, back, backward, forward)
        if best < INF:
            return best
    return INF


def _nearest(adj: SAdjacency, sources, targets) -> float:
    """Hops from the closest source to the closest target."""
    dist = dict.fromkeys(sources, 0)
    if not dist or not targets:
        return INF
    if not targets.isdisjoint(dist):
        return 0
    frontier = list(dist)
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y in dist:
                    continue
                if y in targets:
                    return depth
                dist[y] = depth
                nxt.append(y)
        frontier = nxt
    return INF


def _check_s(s: int) -> None:
    if s < 1:
        raise InvalidQueryError(f"s must be positive, got {s}")


def exact_s_distance(h: Hypergraph, adj: SAdjacency, e: int, f: int, s: int) -> float:
    """Shortest s-path length minus one; ``inf`` when not s-connected."""
    h.check_edge(e)
    h.check_edge(f)
    _check_s(s)
    if e == f:
        return 0
    if min(h.edge_size(e), h.edge_size(f)) < s:
        return INF
    if adj.s != s:
        raise InvalidQueryError(f"adjacency was built for s={adj.s}, not s={s}")
    return _bidirectional(adj, e, f)


class ExactOracle:
    """BFS ground truth with per-s adjacency built on first use."""

    def __init__(self, h: Hypergraph, ledger: OverlapLedger | None = None):
        self.h = h
        self._ledger = ledger
        self._adjacency: dict[int, SAdjacency] = {}

    def adjacency(self, s: int) -> SAdjacency:
        _check_s(s)
        adj = self._adjacency.get(s)
        if adj is None:
            if self._ledger is not None and s <= self._ledger.s_max:
                adj = s_adjacency(self.h, self._ledger, s)
            else:
                adj = direct_s_adjacency(self.h, s)
            self._adjacency[s] = adj
        return adj

    def hh(self, e: int, f: int, s: int) -> float:
        return exact_s_distance(self.h, self.adjacency(s), e, f, s)

    def vv(self, u: int, v: int, s: int) -> float:
        h = self.h
        h.check_vertex(u)
        h.check_vertex(v)
        _check_s(s)
        if u == v:
            return 0
        if h.shares_edge(u, v):
            return 1
        sources = [e for e in h.incidence[u] if h.edge_size(e) >= s]
        targets = {f for f in h.incidence[v] if h.edge_size(f) >= s}
        return _nearest(self.adjacency(s), sources, targets) + 1

    def ve(self, u: int, f: int, s: int) -> float:
        h = self.h
        h.check_vertex(u)
        h.check_edge(f)
        _check_s(s)
        if f in h.incidence[u]:
            return 0
        if h.edge_size(f) < s:
            return INF
        sources = [e for e in h.incidence[u] if h.edge_size(e) >= s]
        return _nearest(self.adjacency(s), sources, {f})

    def distances_from(self, e: int, s: int) -> dict[int, int]:
        self.h.check_edge(e)
        if self.h.edge_size(e) < s:
            return {e: 0}
        return bfs_distances(self.adjacency(s), [e])

    def profile(self, e: int, f: int) -> dict[int, float]:
        top = min(self.h.edge_size(e), self.h.edge_size(f))
        return {s: self.hh(e, f, s) for s in range(1, top + 1)}


def exact_profile(h: Hypergraph, e: int, f: int, *, exact: ExactOracle | None = None) -> dict[int, float]:
    """Exact s-distances for every s in [1, min(|e|, |f|)]."""
    h.check_edge(e)
    h.check_edge(f)
    return (exact or ExactOracle(h)).profile(e, f)
