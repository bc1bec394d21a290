"""
Shared fixtures and brute-force references for the hyped tests.

TOY is the five-hyperedge instance used throughout the suite::

    e1 = {1, 2}          id 0
    e2 = {2, 3, 4}       id 1
    e3 = {3, 4, 5}       id 2
    e4 = {4, 5, 6, 7}    id 3
    e5 = {7, 8}          id 4
"""

import math
import tempfile
from pathlib import Path

import networkx as nx
import numpy as np

from hyped.hypercore import Hypergraph
from hyped.landmarks import AssignmentConfig
from hyped.synthetic import random_hypergraph

INF = math.inf

TOY_LINES = ("1 2", "2 3 4", "3 4 5", "4 5 6 7", "7 8")
E1, E2, E3, E4, E5 = range(5)


def toy() -> Hypergraph:
    return Hypergraph.from_edges(line.split() for line in TOY_LINES)


def path_hypergraph(n_edges: int, *, first_vertex: int = 0) -> list[list[str]]:
    """Token lists of a chain ``{v, v+1}, {v+1, v+2}, ...``; every overlap is 1."""
    return [[str(first_vertex + i), str(first_vertex + i + 1)] for i in range(n_edges)]


def random_instance(seed: int, *, n_vertices: int = 40, n_edges: int = 60, max_size: int = 8) -> Hypergraph:
    return random_hypergraph(n_vertices, n_edges, max_size=max_size, seed=seed)


def fragmented_instance(seed: int) -> Hypergraph:
    """A chain core plus many satellite pairs, in shuffled line order.

    At s=2 the core is one path of size-3 hyperedges (consecutive windows share
    two vertices) and every satellite pair is a component of size 2 with
    10-12 vertices per hyperedge. Satellite vertices outnumber three times the
    hyperedge count.
    """
    rng = np.random.default_rng(seed)
    n_core = int(rng.integers(40, 61))
    n_pairs = int(rng.integers(20, 31))
    core = [f"c{i}" for i in rng.permutation(n_core + 2)]
    edges = [core[i : i + 3] for i in range(n_core)]
    for j in range(n_pairs):
        shared = [f"p{j}x", f"p{j}y"]
        for side in "ab":
            size = int(rng.integers(10, 13))
            edges.append(shared + [f"p{j}{side}{t}" for t in range(size - 2)])
    return Hypergraph.from_edges(edges[int(i)] for i in rng.permutation(len(edges)))


def full_budget(**overrides) -> AssignmentConfig:
    """A configuration whose budget cannot bind: every eligible component saturates."""
    values = {"budget_l": None, "budget_q": 10**9, "d_min": 4, "selection": "degree", "threads": 1}
    values.update(overrides)
    return AssignmentConfig(**values)


# ---------------------------------------------------------------------------
# Brute-force references
# ---------------------------------------------------------------------------


def overlap(h: Hypergraph, e: int, f: int) -> int:
    return len(set(h.edges[e]) & set(h.edges[f]))


def brute_neighbors(h: Hypergraph, e: int, s: int) -> set[int]:
    return {f for f in range(h.n_edges) if f != e and overlap(h, e, f) >= s}


def brute_s_line_graph(h: Hypergraph, s: int) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(h.n_edges))
    for e in range(h.n_edges):
        for f in range(e + 1, h.n_edges):
            if overlap(h, e, f) >= s:
                graph.add_edge(e, f)
    return graph


def brute_partition(h: Hypergraph, s: int) -> frozenset[frozenset[int]]:
    graph = brute_s_line_graph(h, s)
    graph.remove_nodes_from([e for e in range(h.n_edges) if len(h.edges[e]) < s])
    return frozenset(frozenset(c) for c in nx.connected_components(graph))


def brute_distance(graph: nx.Graph, e: int, f: int) -> float:
    try:
        return nx.shortest_path_length(graph, e, f)
    except nx.NetworkXNoPath:
        return INF


class TempDirMixin:
    """A fresh temporary directory per test, exposed as ``self.tmp``."""

    def setUp(self):
        super().setUp()
        self._tmpdir = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmpdir.name)

    def tearDown(self):
        self._tmpdir.cleanup()
        super().tearDown()

    def write(self, name: str, content: str) -> Path:
        path = self.tmp / name
        path.write_text(content, encoding="utf-8")
        return path

    def write_toy(self, name: str = "toy.txt") -> Path:
        return self.write(name, "\n".join(TOY_LINES) + "\n")
