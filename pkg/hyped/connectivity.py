"""
s-connected components for every s in [1, s_max] in one stage-wise pass.

Stages run from ``s_max`` down to 1. Each stage seeds a union-find forest
with the components of the previous (larger) s, indexes the hyperedges that
just became eligible, and counts partial overlaps only for pairs that are not
already known to share a component. The overlaps that triggered a union are
kept in the ledger's OP map; pairs skipped because they were already
co-component go to CP, and their true overlap is only computed when an
s-adjacency actually needs it.

Usage::

    from hyped.connectivity import find_connected_components, s_adjacency

    components, ledger = find_connected_components(h, s_max=10)
    adj = s_adjacency(h, ledger, s=2)
"""

import logging
import threading
from bisect import insort
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .exceptions import InvalidQueryError
from .hypercore import Hypergraph, s_neighbors

logger = logging.getLogger(__name__)

Pair = tuple[int, int]


class UnionFind:
    """Disjoint sets over ``0..size-1`` with union by rank and path compression.

    >>> uf = UnionFind(4)
    >>> uf.union(0, 1)
    True
    >>> uf.find(1) == uf.find(0)
    True
    """

    __slots__ = ("parent", "rank")

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        # compress path taken so all elements point to root directly
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra = self.find(a)
        rb = self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def same(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


# ---------------------------------------------------------------------------
# Component containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentLevel:
    """The partition of ``E_s`` into s-connected components."""

    s: int
    comp_of: dict[int, int]
    members: tuple[tuple[int, ...], ...]
    comp_size: tuple[int, ...]
    comp_vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def partition(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(m) for m in self.members)


@dataclass(frozen=True)
class SComponents:
    s_max: int
    levels: tuple[ComponentLevel, ...]
    overlap_increments: int = field(default=0, compare=False)

    def level(self, s: int) -> ComponentLevel:
        if not 1 <= s <= self.s_max:
            raise InvalidQueryError(f"s={s} outside [1, {self.s_max}]")
        return self.levels[s - 1]

    def component_of(self, e: int, s: int) -> int | None:
        return self.level(s).comp_of.get(e)

    def partition(self, s: int) -> frozenset[frozenset[int]]:
        return self.level(s).partition()

    def __iter__(self):
        return iter(self.levels)


class OverlapLedger:
    """Known pairwise overlaps (OP) and known-connected pairs (CP).

    OP values are lower bounds on the true overlap until a pair is resolved,
    after which they are exact. CP maps a pair to the s at which it was first
    seen inside one component.
    """

    def __init__(self, s_max: int):
        self.s_max = s_max
        self.op: dict[Pair, int] = {}
        self.cp: dict[Pair, int] = {}
        self._resolved: set[Pair] = set()
        self._lock = threading.Lock()

    def record_overlap(self, pair: Pair, count: int) -> None:
        if count > self.op.get(pair, 0):
            self.op[pair] = count

    def record_connected(self, pair: Pair, s: int) -> None:
        self.cp.setdefault(pair, s)

    def resolve(self, h: Hypergraph, pair: Pair) -> int:
        """True overlap of *pair*, computed once and cached into OP."""
        with self._lock:
            if pair in self._resolved:
                return self.op[pair]
            e1, e2 = pair
            overlap = len(set(h.edges[e1]).intersection(h.edges[e2]))
            self.op[pair] = overlap
            self._resolved.add(pair)
            return overlap

    def snapshot(self) -> dict[Pair, int]:
        with self._lock:
            return dict(self.op)


@dataclass(frozen=True)
class SAdjacency:
    """Sorted s-adjacency lists, indexed by hyperedge id."""

    s: int
    neighbors: tuple[tuple[int, ...], ...]

    def __getitem__(self, e: int) -> tuple[int, ...]:
        return self.neighbors[e]

    def __len__(self) -> int:
        return len(self.neighbors)

    def degree(self, e: int) -> int:
        return len(self.neighbors[e])

    @classmethod
    def from_pairs(cls, s: int, n_edges: int, pairs) -> "SAdjacency":
        lists: list[list[int]] = [[] for _ in range(n_edges)]
        for e, f in pairs:
            lists[e].append(f)
            lists[f].append(e)
        return cls(s=s, neighbors=tuple(tuple(sorted(adj)) for adj in lists))


# ---------------------------------------------------------------------------
# Stage-wise components
# ---------------------------------------------------------------------------


def _finalize(h: Hypergraph, s: int, edges_s: list[int], uf: UnionFind) -> ComponentLevel:
    groups: dict[int, list[int]] = {}
    for e in edges_s:
        groups.setdefault(uf.find(e), []).append(e)

    members = tuple(tuple(group) for group in groups.values())
    comp_of = {e: cid for cid, group in enumerate(members) for e in group}
    comp_vertices = tuple(
        len(set().union(*(h.edges[e] for e in group))) for group in members
    )
    return ComponentLevel(
        s=s,
        comp_of=comp_of,
        members=members,
        comp_size=tuple(len(group) for group in members),
        comp_vertices=comp_vertices,
    )


def _check_s_max(s_max: int) -> None:
    if s_max < 1:
        raise InvalidQueryError(f"s_max must be positive, got {s_max}")


def find_connected_components(h: Hypergraph, s_max: int) -> tuple[SComponents, OverlapLedger]:
    _check_s_max(s_max)
    size_index = h.size_index
    ledger = OverlapLedger(s_max)
    index: dict[int, list[int]] = defaultdict(list)
    levels: list[ComponentLevel] = []
    previous: ComponentLevel | None = None
    increments = 0

    for s in range(s_max, 0, -1):
        fresh = size_index.edges_at_least(s) if s == s_max else size_index.edges_of_size(s)
        for e in fresh:
            for v in h.edges[e]:
                insort(index[v], e)

        uf = UnionFind(h.n_edges)
        if previous is not None:
            for group in previous.members:
                for e in group[1:]:
                    uf.union(group[0], e)

        partial = Counter()
        for v in sorted(index):
            postings = index[v]
            for i, e1 in enumerate(postings):
                for e2 in postings[i + 1 :]:
                    pair = (e1, e2)
                    if uf.find(e1) == uf.find(e2):
                        if ledger.op.get(pair, 0) < s:
                            ledger.record_connected(pair, s)
                        continue
                    partial[pair] += 1
                    increments += 1
                    if partial[pair] >= s:
                        ledger.record_overlap(pair, partial[pair])
                        uf.union(e1, e2)

        previous = _finalize(h, s, size_index.edges_at_least(s), uf)
        levels.append(previous)
        logger.debug("s=%d: %d component(s) over %d hyperedge(s)", s, len(previous), len(previous.comp_of))

    levels.reverse()
    components = SComponents(s_max=s_max, levels=tuple(levels), overlap_increments=increments)
    return components, ledger


def s_adjacency(h: Hypergraph, ledger: OverlapLedger, s: int) -> SAdjacency:
    """s-adjacency lists recovered from the ledger.

    OP pairs whose recorded overlap already reaches *s* are adjacent without
    any further work; CP pairs get their true overlap computed (and cached).
    """
    if not 1 <= s <= ledger.s_max:
        raise InvalidQueryError(f"ledger covers s in [1, {ledger.s_max}], got s={s}")

    known = ledger.snapshot()
    adjacent: list[Pair] = [pair for pair, overlap in known.items() if overlap >= s]
    for pair in list(ledger.cp):
        if known.get(pair, 0) >= s:
            continue
        e1, e2 = pair
        if h.edge_size(e1) < s or h.edge_size(e2) < s:
            continue
        if ledger.resolve(h, pair) >= s:
            adjacent.append(pair)
    return SAdjacency.from_pairs(s, h.n_edges, adjacent)


def direct_s_adjacency(h: Hypergraph, s: int) -> SAdjacency:
    """s-adjacency straight from the incidence index, without a ledger."""
    pairs = []
    for e in h.size_index.edges_at_least(s):
        pairs.extend((e, f) for f in s_neighbors(h, e, s) if f > e)
    return SAdjacency.from_pairs(s, h.n_edges, pairs)


# ---------------------------------------------------------------------------
# Baselines (test oracles and benchmark subjects)
# ---------------------------------------------------------------------------


def baseline_cc_linegraph(h: Hypergraph, s_max: int) -> SComponents:
    """Build the weighted line graph once, then union edges of weight >= s per level."""
    from .linegraph import build_line_graph

    _check_s_max(s_max)
    line_graph = build_line_graph(h)
    weighted = line_graph.weighted_edges()
    levels = []
    for s in range(1, s_max + 1):
        uf = UnionFind(h.n_edges)
        for e, f, weight in weighted:
            if weight >= s:
                uf.union(e, f)
        levels.append(_finalize(h, s, h.size_index.edges_at_least(s), uf))
    work = sum(weight for _, _, weight in weighted)
    return SComponents(s_max=s_max, levels=tuple(levels), overlap_increments=work)


def baseline_cc_independent(h: Hypergraph, s_max: int) -> SComponents:
    """Fresh inverted index and union-find for every s."""
    _check_s_max(s_max)
    levels = []
    increments = 0
    for s in range(1, s_max + 1):
        edges_s = h.size_index.edges_at_least(s)
        index: dict[int, list[int]] = defaultdict(list)
        for e in edges_s:
            for v in h.edges[e]:
                index[v].append(e)

        uf = UnionFind(h.n_edges)
        partial = Counter()
        for v in sorted(index):
            postings = index[v]
            for i, e1 in enumerate(postings):
                for e2 in postings[i + 1 :]:
                    partial[(e1, e2)] += 1
                    increments += 1
                    if partial[(e1, e2)] == s:
                        uf.union(e1, e2)
        levels.append(_finalize(h, s, edges_s, uf))
    return SComponents(s_max=s_max, levels=tuple(levels), overlap_increments=increments)
