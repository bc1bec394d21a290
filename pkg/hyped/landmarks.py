"""
Landmark budgeting and selection.

Assignment decides which s-connected component receives the next landmark
until the stored-pair budget Q is met; every accepted landmark costs the size
of its component, since one BFS from it labels every member. Selection picks
the hyperedge inside the component.

    cfg = AssignmentConfig.from_defaults(budget_l=30, selection="farthest")
    landmarks = assign_landmarks(h, components, ledger, cfg)
"""

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from django.core.exceptions import ValidationError
from django.db import models

from .config import get_oracle_defaults
from .connectivity import OverlapLedger, SAdjacency, SComponents
from .exceptions import SaturatedComponentError
from .hypercore import Hypergraph
from .linegraph import ExactOracle, bfs_distances, bfs_tree, tree_path
from .ranking import PairwiseCosts, TiedRanking, consensus_ranking

logger = logging.getLogger(__name__)

MAX_D_MIN = 5


class AssignStrategy(models.TextChoices):
    SAMPLING = "sampling", "Sampling"
    RANKAGG = "rankagg", "Rank aggregation"


class SelectStrategy(models.TextChoices):
    RANDOM = "random", "Random"
    DEGREE = "degree", "Degree"
    FARTHEST = "farthest", "Farthest"
    BESTCOVER = "bestcover", "Best cover"
    BETWEENNESS = "betweenness", "Betweenness"


@dataclass
class AssignmentConfig:
    budget_l: float | None = 30.0
    budget_q: int | None = None
    d_min: int = 4
    alpha: float = 0.5
    beta: float = 0.25
    strategy: str = AssignStrategy.SAMPLING
    selection: str = SelectStrategy.DEGREE
    seed: int = 0
    pair_sample_fraction: float = 0.40
    tie_penalty: float = 0.5
    consensus_max_passes: int = 20
    threads: int = 1

    @classmethod
    def from_defaults(cls, **overrides) -> "AssignmentConfig":
        """Configuration from settings / ``hyped.toml``; ``None`` overrides are ignored."""
        defaults = get_oracle_defaults()
        values = {
            "budget_l": float(defaults["budget_l"]),
            "d_min": int(defaults["d_min"]),
            "alpha": float(defaults["alpha"]),
            "beta": float(defaults["beta"]),
            "strategy": str(defaults["assign"]),
            "selection": str(defaults["select"]),
            "seed": int(defaults["seed"]),
            "pair_sample_fraction": float(defaults["pair_fraction"]),
            "tie_penalty": float(defaults["tie_penalty"]),
            "consensus_max_passes": int(defaults["consensus_max_passes"]),
            "threads": int(defaults["threads"]),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        if overrides.get("budget_q") is not None and overrides.get("budget_l") is None:
            values["budget_l"] = None
        return cls(**values)

    def resolve_budget(self, n_edges: int) -> int:
        if self.budget_q is not None:
            return int(self.budget_q)
        return math.ceil(self.budget_l * n_edges)

    def clean(self) -> None:
        errors: dict[str, str] = {}
        if not 2 <= self.d_min <= MAX_D_MIN:
            errors["d_min"] = f"d_min must be between 2 and {MAX_D_MIN}, got {self.d_min}"
        if self.alpha < 0:
            errors["alpha"] = "alpha must be non-negative"
        if self.beta < 0:
            errors["beta"] = "beta must be non-negative"
        if self.strategy == AssignStrategy.SAMPLING and self.alpha + self.beta > 1:
            errors["beta"] = "alpha + beta must not exceed 1 for sampling"
        if self.strategy not in AssignStrategy.values:
            errors["strategy"] = f"unknown assignment strategy {self.strategy!r}"
        if self.selection not in SelectStrategy.values:
            errors["selection"] = f"unknown selection strategy {self.selection!r}"
        if not 0 < self.pair_sample_fraction <= 1:
            errors["pair_sample_fraction"] = "pair fraction must be in (0, 1]"
        if not 0 <= self.tie_penalty <= 1:
            errors["tie_penalty"] = "tie penalty must be in [0, 1]"
        if self.budget_q is None and self.budget_l is None:
            errors["budget_l"] = "either budget_l or budget_q is required"
        elif (self.budget_q if self.budget_q is not None else self.budget_l) < 0:
            errors["budget_l"] = "the budget must be non-negative"
        if self.threads < 1:
            errors["threads"] = "threads must be at least 1"
        if errors:
            raise ValidationError(errors)


@dataclass
class ComponentRef:
    s: int
    comp_id: int
    size: int
    n_vertices: int
    assigned: int = 0

    @property
    def key(self) -> tuple[int, int]:
        return (self.s, self.comp_id)

    @property
    def saturated(self) -> bool:
        return self.assigned >= self.size


def component_refs(cc: SComponents) -> list[ComponentRef]:
    return [
        ComponentRef(s=level.s, comp_id=cid, size=level.comp_size[cid], n_vertices=level.comp_vertices[cid])
        for level in cc
        for cid in range(len(level))
    ]


@dataclass
class LandmarkSet:
    """Landmarks per level as ``(hyperedge, comp_id)`` in selection order."""

    by_level: dict[int, list[tuple[int, int]]] = field(default_factory=dict)

    def add(self, s: int, e: int, comp_id: int) -> None:
        self.by_level.setdefault(s, []).append((e, comp_id))

    def landmarks(self, s: int) -> list[int]:
        return [e for e, _ in self.by_level.get(s, [])]

    def stored_pairs(self, cc: SComponents) -> int:
        return sum(
            cc.level(s).comp_size[cid] for s, entries in self.by_level.items() for _, cid in entries
        )

    def __len__(self) -> int:
        return sum(len(entries) for entries in self.by_level.values())


# ---------------------------------------------------------------------------
# Selection
# ---------------------------------------------------------------------------


class PathPool:
    """Sampled shortest s-paths of one component and which of them are covered."""

    def __init__(self, paths: list[tuple[int, ...]]):
        self.paths = [frozenset(path) for path in paths]
        self.covered = [False] * len(paths)

    def cover(self, e: int) -> None:
        for i, path in enumerate(self.paths):
            if not self.covered[i] and e in path:
                self.covered[i] = True

    def counts(self, *, uncovered_only: bool) -> Counter:
        counts = Counter()
        for path, covered in zip(self.paths, self.covered):
            if not (uncovered_only and covered):
                counts.update(path)
        return counts


def build_path_pool(
    adj: SAdjacency,
    members: tuple[int, ...],
    fraction: float,
    rng: np.random.Generator,
    *,
    threads: int = 1,
) -> PathPool:
    """One lowest-id BFS path per pair of sampled members."""
    k = min(len(members), max(2, math.ceil(fraction * len(members))))
    sample = sorted(members[i] for i in rng.choice(len(members), size=k, replace=False))

    def paths_from(source: int) -> list[tuple[int, ...]]:
        _, parent = bfs_tree(adj, source)
        return [tree_path(parent, target) for target in sample if target > source]

    with ThreadPoolExecutor(max_workers=threads) as executor:
        per_source = list(executor.map(paths_from, sample[:-1]))
    return PathPool([path for paths in per_source for path in paths])


def _by_degree(candidates: list[int], adj: SAdjacency) -> int:
    return min(candidates, key=lambda e: (-adj.degree(e), e))


def _most_frequent(candidates: list[int], counts: Counter) -> int | None:
    best = min(candidates, key=lambda e: (-counts[e], e))
    return best if counts[best] > 0 else None


def select_landmark(
    c: ComponentRef,
    already: set[int],
    adj: SAdjacency,
    cfg: AssignmentConfig,
    *,
    members: tuple[int, ...],
    rng: np.random.Generator,
    pool: PathPool | None = None,
) -> int:
    candidates = [e for e in members if e not in already]
    if not candidates:
        raise SaturatedComponentError(f"component {c.comp_id} at s={c.s} has no free hyperedge")

    match cfg.selection:
        case SelectStrategy.RANDOM:
            return candidates[int(rng.integers(len(candidates)))]
        case SelectStrategy.DEGREE:
            return _by_degree(candidates, adj)
        case SelectStrategy.FARTHEST:
            if not already:
                return candidates[int(rng.integers(len(candidates)))]
            dist = bfs_distances(adj, sorted(already), within=set(members))
            return min(candidates, key=lambda e: (-dist.get(e, math.inf), e))
        case SelectStrategy.BESTCOVER | SelectStrategy.BETWEENNESS:
            counts = pool.counts(uncovered_only=cfg.selection == SelectStrategy.BESTCOVER) if pool else Counter()
            choice = _most_frequent(candidates, counts)
            return choice if choice is not None else _by_degree(candidates, adj)
    raise ValueError(f"unknown selection strategy {cfg.selection!r}")


class LandmarkSelector:
    """Per-build selection state: adjacency, chosen landmarks and path pools."""

    def __init__(
        self,
        h: Hypergraph,
        cc: SComponents,
        ledger: OverlapLedger,
        cfg: AssignmentConfig,
        rng: np.random.Generator,
        exact: ExactOracle | None = None,
    ):
        self.h = h
        self.cc = cc
        self.cfg = cfg
        self.rng = rng
        self.exact = exact if exact is not None else ExactOracle(h, ledger)
        self._chosen: dict[tuple[int, int], list[int]] = {}
        self._pools: dict[tuple[int, int], PathPool] = {}

    def select(self, c: ComponentRef) -> int:
        members = self.cc.level(c.s).members[c.comp_id]
        adj = self.exact.adjacency(c.s)
        chosen = self._chosen.setdefault(c.key, [])
        pool = None
        if self.cfg.selection in (SelectStrategy.BESTCOVER, SelectStrategy.BETWEENNESS):
            pool = self._pools.get(c.key)
            if pool is None:
                pool = build_path_pool(
                    adj, members, self.cfg.pair_sample_fraction, self.rng, threads=self.cfg.threads
                )
                self._pools[c.key] = pool

        e = select_landmark(c, set(chosen), adj, self.cfg, members=members, rng=self.rng, pool=pool)
        chosen.append(e)
        if pool is not None:
            pool.cover(e)
        return e


# ---------------------------------------------------------------------------
# Assignment
# ---------------------------------------------------------------------------


def _eligible(cc: SComponents, cfg: AssignmentConfig) -> tuple[list[ComponentRef], list[ComponentRef]]:
    refs = component_refs(cc)
    eligible = [c for c in refs if c.size > cfg.d_min]
    if not eligible:
        logger.warning("No component is larger than d_min=%d; no landmarks assigned", cfg.d_min)
    return refs, eligible


def _accept(c: ComponentRef, selector: LandmarkSelector, landmarks: LandmarkSet) -> int:
    e = selector.select(c)
    landmarks.add(c.s, e, c.comp_id)
    c.assigned += 1
    return c.size


def assign_sampling(cc: SComponents, cfg: AssignmentConfig, selector: LandmarkSelector) -> LandmarkSet:
    landmarks = LandmarkSet()
    refs, active = _eligible(cc, cfg)
    budget = cfg.resolve_budget(selector.h.n_edges)
    if not active or budget <= 0:
        return landmarks

    zeta = sum(c.size for c in refs)
    xi = sum(c.n_vertices for c in refs)
    eta = sum(c.s for c in refs)
    gamma = 1.0 - cfg.alpha - cfg.beta
    weight = {
        c.key: cfg.alpha * c.size / zeta + cfg.beta * c.s / eta + gamma * c.n_vertices / xi
        for c in active
    }

    rng = selector.rng
    spent = 0
    while spent < budget and active:
        w = np.array([weight[c.key] for c in active], dtype=float)
        total = w.sum()
        p = w / total if total > 0 else np.full(len(active), 1.0 / len(active))
        i = int(rng.choice(len(active), p=p))
        c = active[i]
        spent += _accept(c, selector, landmarks)
        if c.saturated:
            active.pop(i)
    return landmarks


def assign_rankagg(cc: SComponents, cfg: AssignmentConfig, selector: LandmarkSelector) -> LandmarkSet:
    landmarks = LandmarkSet()
    _, eligible = _eligible(cc, cfg)
    budget = cfg.resolve_budget(selector.h.n_edges)
    if not eligible or budget <= 0:
        return landmarks

    by_key = {c.key: c for c in eligible}
    keys = sorted(by_key)
    static = [
        (TiedRanking.from_key(keys, lambda k: by_key[k].size, descending=True), cfg.alpha),
        (TiedRanking.from_key(keys, lambda k: by_key[k].n_vertices, descending=True), cfg.alpha),
        (TiedRanking.from_key(keys, lambda k: k[0], descending=True), cfg.beta),
    ]
    static_costs = PairwiseCosts.from_rankings(static, p=cfg.tie_penalty, elements=keys)

    rng = selector.rng
    spent = 0
    while spent < budget and by_key:
        active = sorted(by_key)
        assigned = TiedRanking.from_key(active, lambda k: by_key[k].assigned)
        rankings = [(ranking.restrict(active), weight) for ranking, weight in static]
        rankings.append((assigned, 1.0))
        costs = static_costs.restrict(active) + PairwiseCosts.from_rankings(
            [(assigned, 1.0)], p=cfg.tie_penalty, elements=active
        )
        consensus = consensus_ranking(
            rankings, rng, p=cfg.tie_penalty, max_passes=cfg.consensus_max_passes, costs=costs
        )
        top = sorted(consensus.buckets[0])
        c = by_key[top[int(rng.integers(len(top)))]]
        spent += _accept(c, selector, landmarks)
        if c.saturated:
            del by_key[c.key]
    return landmarks


def assign_landmarks(
    h: Hypergraph,
    cc: SComponents,
    ledger: OverlapLedger,
    cfg: AssignmentConfig,
    *,
    rng: np.random.Generator | None = None,
    exact: ExactOracle | None = None,
) -> LandmarkSet:
    """Run the configured assignment strategy with a single seeded RNG stream."""
    cfg.clean()
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    selector = LandmarkSelector(h, cc, ledger, cfg, rng, exact=exact)
    if cfg.strategy == AssignStrategy.RANKAGG:
        landmarks = assign_rankagg(cc, cfg, selector)
    else:
        landmarks = assign_sampling(cc, cfg, selector)
    logger.debug("Assigned %d landmark(s) with %s/%s", len(landmarks), cfg.strategy, cfg.selection)
    return landmarks
