"""
Hypergraph data model, file ingestion and s-neighbourhood primitives.

A hypergraph file holds one hyperedge per line; vertex tokens are separated
by whitespace or commas and lines starting with ``#`` are comments::

    1 2
    2 3 4
    3 4 5

Vertex tokens are arbitrary strings mapped to dense ids in first-seen order.
Hyperedges get dense ids in line order, so the token of a hyperedge is its id.
"""

import logging
import re
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .exceptions import HypergraphParseError, InvalidQueryError

logger = logging.getLogger(__name__)

_TOKEN_SPLIT = re.compile(r"[\s,]+")


@dataclass(frozen=True, eq=False)
class EdgeSizeIndex:
    """Hyperedges ordered by decreasing size with per-threshold offsets.

    ``offsets[i]`` is ``|E_i|``, the number of hyperedges of size >= i, so
    ``E_i`` is the prefix ``order[:offsets[i]]``.
    """

    order: np.ndarray
    offsets: np.ndarray

    @classmethod
    def build(cls, sizes: np.ndarray) -> "EdgeSizeIndex":
        # stable sort keeps ids ascending inside a size class
        order = np.argsort(-sizes, kind="stable")
        max_size = int(sizes.max()) if sizes.size else 0
        counts = np.bincount(sizes, minlength=max_size + 2)
        offsets = np.cumsum(counts[::-1])[::-1]
        return cls(order=order, offsets=offsets)

    def count_at_least(self, i: int) -> int:
        if i >= len(self.offsets):
            return 0
        return int(self.offsets[max(i, 0)])

    def edges_at_least(self, i: int) -> list[int]:
        """``E_i`` as an ascending list of hyperedge ids."""
        return sorted(self.order[: self.count_at_least(i)].tolist())

    def edges_of_size(self, i: int) -> list[int]:
        start = self.count_at_least(i + 1)
        stop = self.count_at_least(i)
        return sorted(self.order[start:stop].tolist())


@dataclass(frozen=True)
class Hypergraph:
    edges: tuple[tuple[int, ...], ...]
    incidence: tuple[tuple[int, ...], ...]
    vertex_tokens: tuple[str, ...]
    edge_lines: tuple[int, ...] = field(default=(), compare=False)

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        raw_edges: Iterable[Iterable],
        *,
        dedupe: bool = False,
        lines: list[int] | None = None,
    ) -> "Hypergraph":
        """Build a hypergraph from token sequences, one per hyperedge.

        *lines* gives the source line of each sequence; it defaults to the
        1-based position.
        """
        token_ids: dict[str, int] = {}
        edges: list[tuple[int, ...]] = []
        edge_lines: list[int] = []
        seen: set[tuple[int, ...]] = set()
        collapsed = 0

        for position, tokens in enumerate(raw_edges, start=1):
            ids = sorted({token_ids.setdefault(str(t), len(token_ids)) for t in tokens})
            if len(ids) < 2:
                raise HypergraphParseError(
                    "a hyperedge needs at least 2 distinct vertices", line=position
                )
            edge = tuple(ids)
            if dedupe:
                if edge in seen:
                    collapsed += 1
                    continue
                seen.add(edge)
            edges.append(edge)
            edge_lines.append(lines[position - 1] if lines else position)

        if dedupe and collapsed:
            logger.info("Collapsed %d duplicate hyperedge(s)", collapsed)

        incidence: list[list[int]] = [[] for _ in range(len(token_ids))]
        for e, edge in enumerate(edges):
            for v in edge:
                incidence[v].append(e)

        vertex_tokens = [""] * len(token_ids)
        for token, v in token_ids.items():
            vertex_tokens[v] = token

        return cls(
            edges=tuple(edges),
            incidence=tuple(tuple(postings) for postings in incidence),
            vertex_tokens=tuple(vertex_tokens),
            edge_lines=tuple(edge_lines),
        )

    # -- sizes ---------------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_tokens)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_size(self, e: int) -> int:
        return len(self.edges[e])

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.fromiter((len(edge) for edge in self.edges), dtype=np.int64, count=self.n_edges)

    @cached_property
    def size_index(self) -> EdgeSizeIndex:
        return EdgeSizeIndex.build(self.sizes)

    @property
    def max_edge_size(self) -> int:
        return int(self.sizes.max()) if self.n_edges else 0

    def largest_edge_size_of(self, v: int) -> int:
        """Size of the largest hyperedge containing *v* (0 if none)."""
        return max((len(self.edges[e]) for e in self.incidence[v]), default=0)

    # -- ids -------------------------------------------------------------------

    @cached_property
    def _vertex_index(self) -> dict[str, int]:
        return {token: v for v, token in enumerate(self.vertex_tokens)}

    def vertex_id(self, token: str) -> int:
        try:
            return self._vertex_index[str(token)]
        except KeyError:
            raise InvalidQueryError(f"unknown vertex token {token!r}") from None

    def edge_id(self, token) -> int:
        try:
            e = int(token)
        except (TypeError, ValueError):
            raise InvalidQueryError(f"hyperedge token {token!r} is not an id") from None
        self.check_edge(e)
        return e

    def check_edge(self, e: int) -> None:
        if not 0 <= e < self.n_edges:
            raise InvalidQueryError(f"hyperedge id {e} out of range [0, {self.n_edges})")

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n_vertices:
            raise InvalidQueryError(f"vertex id {v} out of range [0, {self.n_vertices})")

    def shares_edge(self, u: int, v: int) -> bool:
        smaller, larger = sorted((self.incidence[u], self.incidence[v]), key=len)
        return not set(smaller).isdisjoint(larger)


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------


def load_hypergraph(path, *, dedupe: bool = False) -> Hypergraph:
    """Read a hypergraph file. Duplicate hyperedges are kept unless *dedupe*."""
    path = Path(path)
    raw: list[list[str]] = []
    lines: list[int] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = [token for token in _TOKEN_SPLIT.split(line) if token]
            if len(set(tokens)) < 2:
                raise HypergraphParseError(
                    "a hyperedge needs at least 2 distinct vertex tokens",
                    line=lineno,
                    path=path,
                )
            raw.append(tokens)
            lines.append(lineno)

    h = Hypergraph.from_edges(raw, dedupe=dedupe, lines=lines)
    logger.info(
        "Loaded %s: |V|=%d |E|=%d max size=%d",
        path.name,
        h.n_vertices,
        h.n_edges,
        h.max_edge_size,
    )
    return h


def write_hypergraph(h: Hypergraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for edge in h.edges:
            fh.write(" ".join(h.vertex_tokens[v] for v in edge))
            fh.write("\n")


def read_labels(path) -> dict[str, str]:
    """Read a ``token TAB label`` file."""
    labels: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            token, sep, label = line.partition("\t")
            if not sep or not token.strip():
                raise HypergraphParseError("expected <token> TAB <label>", line=lineno, path=path)
            labels[token.strip()] = label.strip()
    return labels


def resolve_vertex_labels(h: Hypergraph, raw: dict[str, str]) -> dict[int, str]:
    resolved = {h._vertex_index[t]: label for t, label in raw.items() if t in h._vertex_index}
    if len(resolved) < len(raw):
        logger.warning("Ignored %d label(s) for unknown vertices", len(raw) - len(resolved))
    return resolved


def resolve_edge_labels(h: Hypergraph, raw: dict[str, str]) -> dict[int, str]:
    resolved = {}
    for token, label in raw.items():
        if token.isdigit() and int(token) < h.n_edges:
            resolved[int(token)] = label
    if len(resolved) < len(raw):
        logger.warning("Ignored %d label(s) for unknown hyperedges", len(raw) - len(resolved))
    return resolved


# ---------------------------------------------------------------------------
# Id maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdMap:
    vertex_tokens: dict[int, str]
    edge_lines: dict[int, int]


def save_id_map(h: Hypergraph, path) -> None:
    """Persist ``kind TAB dense-id TAB original`` rows for vertices and hyperedges."""
    with open(path, "w", encoding="utf-8") as fh:
        for v, token in enumerate(h.vertex_tokens):
            fh.write(f"vertex\t{v}\t{token}\n")
        for e, line in enumerate(h.edge_lines):
            fh.write(f"hyperedge\t{e}\t{line}\n")


def load_id_map(path) -> IdMap:
    vertex_tokens: dict[int, str] = {}
    edge_lines: dict[int, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3 or parts[0] not in ("vertex", "hyperedge"):
                raise HypergraphParseError("expected kind TAB id TAB original", line=lineno, path=path)
            kind, dense, original = parts
            if kind == "vertex":
                vertex_tokens[int(dense)] = original
            else:
                edge_lines[int(dense)] = int(original)
    return IdMap(vertex_tokens=vertex_tokens, edge_lines=edge_lines)


# ---------------------------------------------------------------------------
# s-neighbourhoods
# ---------------------------------------------------------------------------


def s_neighbors(h: Hypergraph, e: int, s: int) -> frozenset[int]:
    """Hyperedges f != e with ``|e ∩ f| >= s``, counted through the incidence index."""
    h.check_edge(e)
    if s < 1:
        raise InvalidQueryError(f"s must be positive, got {s}")
    edge = h.edges[e]
    if len(edge) < s:
        return frozenset()
    overlap = Counter()
    for v in edge:
        overlap.update(h.incidence[v])
    return frozenset(f for f, count in overlap.items() if count >= s and f != e)


def s_degree(h: Hypergraph, e: int, s: int) -> int:
    return len(s_neighbors(h, e, s))
