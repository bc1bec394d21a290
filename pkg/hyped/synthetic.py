"""
Seeded synthetic hypergraphs and labels for tests and benchmarks.

Usage::

    h = power_law_hypergraph(n_vertices=400, n_edges=1000, seed=7)
    labels = random_labels(range(h.n_vertices), n_labels=5, seed=7)
"""

from collections.abc import Iterable

import numpy as np

from .hypercore import Hypergraph


def _draw_edges(
    rng: np.random.Generator,
    n_vertices: int,
    sizes: np.ndarray,
    vertex_weights: np.ndarray | None,
) -> list[list[str]]:
    edges = []
    for size in sizes:
        members = rng.choice(n_vertices, size=int(size), replace=False, p=vertex_weights)
        edges.append([str(v) for v in sorted(members.tolist())])
    return edges


def random_hypergraph(
    n_vertices: int,
    n_edges: int,
    *,
    min_size: int = 2,
    max_size: int = 8,
    seed: int = 0,
) -> Hypergraph:
    """Hyperedge sizes uniform in [min_size, max_size], members uniform."""
    max_size = min(max_size, n_vertices)
    if not 2 <= min_size <= max_size:
        raise ValueError(f"need 2 <= min_size <= max_size <= n_vertices, got {min_size}..{max_size}")
    rng = np.random.default_rng(seed)
    sizes = rng.integers(min_size, max_size + 1, size=n_edges)
    return Hypergraph.from_edges(_draw_edges(rng, n_vertices, sizes, None))


def power_law_hypergraph(
    n_vertices: int,
    n_edges: int,
    *,
    exponent: float = 2.5,
    min_size: int = 2,
    max_size: int = 30,
    vertex_skew: float = 0.8,
    seed: int = 0,
) -> Hypergraph:
    """Power-law hyperedge sizes over vertices with Zipf-like popularity.

    Popular vertices recur in many hyperedges, which keeps large overlaps (and
    therefore non-trivial components at higher s) likely.
    """
    max_size = min(max_size, n_vertices)
    if not 2 <= min_size <= max_size:
        raise ValueError(f"need 2 <= min_size <= max_size <= n_vertices, got {min_size}..{max_size}")
    rng = np.random.default_rng(seed)

    support = np.arange(min_size, max_size + 1)
    size_p = support.astype(float) ** -exponent
    sizes = rng.choice(support, size=n_edges, p=size_p / size_p.sum())

    popularity = (np.arange(n_vertices) + 1.0) ** -vertex_skew
    popularity = popularity[rng.permutation(n_vertices)]
    return Hypergraph.from_edges(_draw_edges(rng, n_vertices, sizes, popularity / popularity.sum()))


def random_labels(ids: Iterable[int], n_labels: int, *, seed: int = 0) -> dict[int, str]:
    ids = list(ids)
    rng = np.random.default_rng(seed)
    drawn = rng.integers(n_labels, size=len(ids))
    return {x: f"label-{int(k)}" for x, k in zip(ids, drawn)}
