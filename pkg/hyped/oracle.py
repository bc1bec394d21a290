"""
The landmark distance oracle: build, estimate, profile, recommend.

For every s in [1, s_max] the oracle keeps the component id of each
hyperedge of size >= s, the component sizes, and the exact s-distances from
each landmark to the hyperedges of its component. A query between two
hyperedges of one component is answered from the landmarks both of them
carry:

    lb = max |d(l, e) - d(l, f)|        ub = min d(l, e) + d(l, f)

Components no larger than ``d_min`` carry no landmarks; their distances are
estimated by the average pairwise distance over all connected topologies of
that size.
"""

import logging
import math
import time
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache
from statistics import fmean

import networkx as nx
from django.db import models

from .config import get_oracle_defaults
from .connectivity import find_connected_components
from .exceptions import InvalidQueryError, UnsupportedSizeError
from .hypercore import Hypergraph
from .landmarks import MAX_D_MIN, AssignmentConfig, assign_landmarks
from .linegraph import ExactOracle, bfs_distances

logger = logging.getLogger(__name__)

INF = math.inf


# ---------------------------------------------------------------------------
# Average distance over small topologies
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _connected_topologies(n: int) -> tuple[nx.Graph, ...]:
    return tuple(
        g for g in nx.graph_atlas_g() if g.number_of_nodes() == n and nx.is_connected(g)
    )


def _check_topology_size(i: int) -> None:
    if not 2 <= i <= MAX_D_MIN:
        raise UnsupportedSizeError(f"average distance is tabulated for sizes 2..{MAX_D_MIN}, got {i}")


@lru_cache(maxsize=None)
def approx_avg_dist(i: int) -> float:
    """Mean, over connected unlabeled graphs on *i* nodes, of the mean pairwise distance."""
    _check_topology_size(i)
    return round(fmean(nx.average_shortest_path_length(g) for g in _connected_topologies(i)), 6)


def avg_dist_by_edge_count(n: int) -> dict[int, float]:
    """Average distance of connected n-node topologies, grouped by their edge count."""
    _check_topology_size(n)
    groups: dict[int, list[float]] = defaultdict(list)
    for g in _connected_topologies(n):
        groups[g.number_of_edges()].append(nx.average_shortest_path_length(g))
    return {m: round(fmean(values), 6) for m, values in sorted(groups.items())}


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------


class EstimateStatus(models.TextChoices):
    EXACT = "exact", "Exact"
    BOUNDED = "bounded", "Bounded"
    SMALL_COMPONENT = "small-component", "Small component"
    DISCONNECTED = "disconnected", "Disconnected"
    UNCOVERED = "uncovered", "Uncovered"


@dataclass(frozen=True)
class DistanceEstimate:
    s: int
    lb: float
    ub: float
    estimate: float
    status: str

    @classmethod
    def exact(cls, s: int, value: float) -> "DistanceEstimate":
        return cls(s, value, value, value, EstimateStatus.EXACT)

    @classmethod
    def disconnected(cls, s: int) -> "DistanceEstimate":
        return cls(s, INF, INF, INF, EstimateStatus.DISCONNECTED)

    def shifted(self, offset: int) -> "DistanceEstimate":
        return replace(self, lb=self.lb + offset, ub=self.ub + offset, estimate=self.estimate + offset)


@dataclass(frozen=True)
class DistanceProfile:
    source: int
    target: int
    kind: str
    estimates: tuple[DistanceEstimate, ...]

    def __iter__(self):
        return iter(self.estimates)

    def __len__(self) -> int:
        return len(self.estimates)

    def at(self, s: int) -> DistanceEstimate:
        return self.estimates[s - 1]


@dataclass(frozen=True)
class BuildReport:
    off_seconds: float
    landmarks_per_level: dict[int, int]
    stored_pairs: int
    overlap_increments: int


# ---------------------------------------------------------------------------
# Oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Oracle:
    """Immutable once built; every level list is indexed by ``s - 1``."""

    s_max: int
    d_min: int
    seed: int
    avg_dist: dict[int, float]
    comp_of: tuple[dict[int, int], ...]
    comp_size: tuple[tuple[int, ...], ...]
    labels: tuple[dict[int, dict[int, int]], ...]
    report: BuildReport | None = field(default=None, compare=False)

    @property
    def n_edges(self) -> int:
        return len(self.comp_of[0]) if self.comp_of else 0

    def check_edge(self, e: int) -> None:
        if not 0 <= e < self.n_edges:
            raise InvalidQueryError(f"hyperedge id {e} out of range [0, {self.n_edges})")

    def check_s(self, s: int) -> None:
        if not 1 <= s <= self.s_max:
            raise InvalidQueryError(f"s={s} outside the oracle's range [1, {self.s_max}]")

    @cached_property
    def _top_level(self) -> dict[int, int]:
        top = {}
        for s in range(self.s_max, 0, -1):
            for e in self.comp_of[s - 1]:
                top.setdefault(e, s)
        return top

    def top_level(self, e: int) -> int:
        """``min(s_max, |e|)``, the largest s at which e is stored."""
        self.check_edge(e)
        return self._top_level[e]

    def landmarks(self, s: int) -> list[int]:
        self.check_s(s)
        return sorted(e for e, label in self.labels[s - 1].items() if label.get(e) == 0)

    def stored_triples(self) -> int:
        return sum(len(label) for level in self.labels for label in level.values())


def _landmark_floods(adj, roster: list[int], threads: int) -> list[dict[int, int]]:
    if threads <= 1 or len(roster) <= 1:
        return [bfs_distances(adj, [landmark]) for landmark in roster]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(lambda landmark: bfs_distances(adj, [landmark]), roster))


def build_oracle(h: Hypergraph, cfg: AssignmentConfig, s_max: int | None = None) -> Oracle:
    cfg.clean()
    if s_max is None:
        s_max = int(get_oracle_defaults()["s_max"])
    if s_max < 1:
        raise InvalidQueryError(f"s_max must be positive, got {s_max}")

    started = time.perf_counter()
    components, ledger = find_connected_components(h, s_max)
    avg_dist = {i: approx_avg_dist(i) for i in range(2, cfg.d_min + 1)}
    exact = ExactOracle(h, ledger)
    landmark_set = assign_landmarks(h, components, ledger, cfg, exact=exact)

    labels: list[dict[int, dict[int, int]]] = []
    for level in components:
        roster = sorted(landmark_set.landmarks(level.s))
        per_edge: dict[int, dict[int, int]] = {}
        if roster:
            floods = _landmark_floods(exact.adjacency(level.s), roster, cfg.threads)
            # merged in landmark id order so every label is sorted by landmark
            for landmark, dist in zip(roster, floods):
                for e in sorted(dist):
                    per_edge.setdefault(e, {})[landmark] = dist[e]
        labels.append(dict(sorted(per_edge.items())))

    off_seconds = time.perf_counter() - started
    report = BuildReport(
        off_seconds=off_seconds,
        landmarks_per_level={s: len(entries) for s, entries in sorted(landmark_set.by_level.items())},
        stored_pairs=sum(len(label) for level in labels for label in level.values()),
        overlap_increments=components.overlap_increments,
    )
    logger.info(
        "Oracle built in %.3fs: %d landmark(s), %d stored pair(s), s_max=%d",
        off_seconds,
        len(landmark_set),
        report.stored_pairs,
        s_max,
    )
    return Oracle(
        s_max=s_max,
        d_min=cfg.d_min,
        seed=cfg.seed,
        avg_dist=avg_dist,
        comp_of=tuple(dict(level.comp_of) for level in components),
        comp_size=tuple(level.comp_size for level in components),
        labels=tuple(labels),
        report=report,
    )


# ---------------------------------------------------------------------------
# Estimation
# ---------------------------------------------------------------------------


def estimate_h2h(o: Oracle, e: int, f: int, s: int) -> DistanceEstimate:
    o.check_edge(e)
    o.check_edge(f)
    if s < 1:
        raise InvalidQueryError(f"s must be positive, got {s}")
    if e == f:
        return DistanceEstimate.exact(s, 0)
    o.check_s(s)

    comp_of = o.comp_of[s - 1]
    ce, cf = comp_of.get(e), comp_of.get(f)
    if ce is None or ce != cf:
        return DistanceEstimate.disconnected(s)

    size = o.comp_size[s - 1][ce]
    if size <= o.d_min:
        return DistanceEstimate(s, 1, size - 1, o.avg_dist[size], EstimateStatus.SMALL_COMPONENT)

    label_e = o.labels[s - 1].get(e, {})
    label_f = o.labels[s - 1].get(f, {})
    if len(label_f) < len(label_e):
        label_e, label_f = label_f, label_e
    lb, ub = 0, INF
    for landmark, de in label_e.items():
        df = label_f.get(landmark)
        if df is None:
            continue
        lb = max(lb, abs(de - df))
        ub = min(ub, de + df)
    if ub == INF:
        return DistanceEstimate(s, 1, size - 1, 1.0, EstimateStatus.UNCOVERED)

    lb = max(lb, 1)
    if lb == ub:
        return DistanceEstimate.exact(s, lb)
    return DistanceEstimate(s, lb, ub, (lb + ub) / 2, EstimateStatus.BOUNDED)


def _best_of(s: int, candidates: list[DistanceEstimate]) -> DistanceEstimate:
    """Combine per-pair estimates of a min-over-pairs distance."""
    finite = [c for c in candidates if c.status != EstimateStatus.DISCONNECTED]
    if not finite:
        return DistanceEstimate.disconnected(s)
    lb = min(c.lb for c in finite)
    ub = min(c.ub for c in finite)
    if lb == ub:
        return DistanceEstimate.exact(s, lb)
    best = min(finite, key=lambda c: c.estimate)
    status = EstimateStatus.BOUNDED if best.status == EstimateStatus.EXACT else best.status
    return DistanceEstimate(s, lb, ub, min(max(best.estimate, lb), ub), status)


def estimate_v2v(o: Oracle, h: Hypergraph, u: int, v: int, s: int) -> DistanceEstimate:
    h.check_vertex(u)
    h.check_vertex(v)
    if s < 1:
        raise InvalidQueryError(f"s must be positive, got {s}")
    if u == v:
        return DistanceEstimate.exact(s, 0)
    if h.shares_edge(u, v):
        return DistanceEstimate.exact(s, 1)
    o.check_s(s)
    if s > min(h.largest_edge_size_of(u), h.largest_edge_size_of(v)):
        return DistanceEstimate.disconnected(s)

    sources = [e for e in h.incidence[u] if h.edge_size(e) >= s]
    targets = [f for f in h.incidence[v] if h.edge_size(f) >= s]
    pairs = [estimate_h2h(o, e, f, s) for e in sources for f in targets]
    return _best_of(s, pairs).shifted(1)


def estimate_v2e(o: Oracle, h: Hypergraph, u: int, f: int, s: int) -> DistanceEstimate:
    h.check_vertex(u)
    o.check_edge(f)
    if s < 1:
        raise InvalidQueryError(f"s must be positive, got {s}")
    if f in h.incidence[u]:
        return DistanceEstimate.exact(s, 0)
    o.check_s(s)
    sources = [e for e in h.incidence[u] if h.edge_size(e) >= s]
    return _best_of(s, [estimate_h2h(o, e, f, s) for e in sources])


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------


def _recompute(d: DistanceEstimate, lb: float, ub: float) -> DistanceEstimate:
    if d.status == EstimateStatus.DISCONNECTED or lb == INF:
        return DistanceEstimate.disconnected(d.s)
    if lb == ub:
        return DistanceEstimate.exact(d.s, lb)
    match d.status:
        case EstimateStatus.SMALL_COMPONENT:
            estimate = min(max(d.estimate, lb), ub)
        case EstimateStatus.UNCOVERED:
            estimate = min(max(lb, 1), ub)
        case _:
            return DistanceEstimate(d.s, lb, ub, (lb + ub) / 2, EstimateStatus.BOUNDED)
    return DistanceEstimate(d.s, lb, ub, estimate, d.status)


def refine_profile(estimates: list[DistanceEstimate]) -> tuple[DistanceEstimate, ...]:
    """Tighten bounds across s; distances never decrease as s grows."""
    lbs = [d.lb for d in estimates]
    ubs = [d.ub for d in estimates]
    for i in range(1, len(lbs)):
        lbs[i] = max(lbs[i], lbs[i - 1])
    for i in range(len(ubs) - 2, -1, -1):
        ubs[i] = min(ubs[i], ubs[i + 1])
    return tuple(_recompute(d, lb, ub) for d, lb, ub in zip(estimates, lbs, ubs))


def profile_h2h(o: Oracle, e: int, f: int) -> DistanceProfile:
    top = min(o.top_level(e), o.top_level(f))
    estimates = [estimate_h2h(o, e, f, s) for s in range(1, top + 1)]
    return DistanceProfile(e, f, "hh", refine_profile(estimates))


def profile_v2v(o: Oracle, h: Hypergraph, u: int, v: int) -> DistanceProfile:
    h.check_vertex(u)
    h.check_vertex(v)
    top = min(o.s_max, h.largest_edge_size_of(u), h.largest_edge_size_of(v))
    estimates = [estimate_v2v(o, h, u, v, s) for s in range(1, top + 1)]
    return DistanceProfile(u, v, "vv", refine_profile(estimates))


def profile_v2e(o: Oracle, h: Hypergraph, u: int, f: int) -> DistanceProfile:
    h.check_vertex(u)
    top = min(o.top_level(f), h.largest_edge_size_of(u))
    estimates = [estimate_v2e(o, h, u, f, s) for s in range(1, top + 1)]
    return DistanceProfile(u, f, "ve", refine_profile(estimates))


# ---------------------------------------------------------------------------
# Recommendation
# ---------------------------------------------------------------------------


def top_k_neighbors(
    o: Oracle,
    h: Hypergraph,
    query: int,
    kind: str,
    s: int,
    k: int,
    labels: dict[int, str],
    *,
    exact: ExactOracle | None = None,
) -> list[tuple[int, float]]:
    """Same-label entities closest to *query*, ties broken by id.

    *kind* is ``"vertex"`` or ``"hyperedge"``. With *exact* the ranking uses
    BFS ground truth instead of oracle estimates. Unreachable candidates are
    left out.
    """
    if kind not in ("vertex", "hyperedge"):
        raise InvalidQueryError(f"kind must be 'vertex' or 'hyperedge', got {kind!r}")
    if k < 0:
        raise InvalidQueryError(f"k must be non-negative, got {k}")
    label = labels.get(query)
    if label is None:
        return []

    if kind == "vertex":
        h.check_vertex(query)
    else:
        o.check_edge(query)

    def distance(x: int) -> float:
        if kind == "vertex":
            if exact is not None:
                return exact.vv(query, x, s)
            return estimate_v2v(o, h, query, x, s).estimate
        if exact is not None:
            return exact.hh(query, x, s)
        return estimate_h2h(o, query, x, s).estimate

    ranked = []
    for candidate in sorted(labels):
        if candidate == query or labels[candidate] != label:
            continue
        d = distance(candidate)
        if d != INF:
            ranked.append((d, candidate))
    ranked.sort()
    return [(candidate, d) for d, candidate in ranked[:k]]
