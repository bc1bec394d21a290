"""
Tied rankings, generalized Kendall-τ and weighted Kemeny consensus.

A ranking with ties is an ordered sequence of disjoint buckets; elements in
one bucket share a position. Distances between rankings count, for every
unordered pair, 1 for a strict disagreement and ``p`` for a pair tied in
exactly one of the two rankings.

Consensus is found by local search. Pairwise costs are precomputed into two
matrices so that moving one element costs a couple of ``bincount`` calls:

    before[x, y]  cost of ranking x strictly ahead of y
    tied[x, y]    cost of putting x and y in the same bucket

Elements must be mutually orderable; they are scanned in sorted order.
Universes of at most four elements are small enough (75 tied rankings) to
be solved exactly instead.
"""

import logging
from collections import defaultdict
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .exceptions import RankingUniverseError

logger = logging.getLogger(__name__)

_EPS = 1e-12

# universes up to this size are solved by enumerating every tied ranking
EXHAUSTIVE_LIMIT = 4

WeightedRankings = Sequence[tuple["TiedRanking", float]]


@dataclass(frozen=True)
class TiedRanking:
    buckets: tuple[frozenset, ...]

    def __post_init__(self):
        seen: set = set()
        for bucket in self.buckets:
            if not bucket:
                raise RankingUniverseError("a ranking cannot contain an empty bucket")
            if not seen.isdisjoint(bucket):
                raise RankingUniverseError("an element appears in more than one bucket")
            seen.update(bucket)

    @classmethod
    def of(cls, *buckets: Iterable) -> "TiedRanking":
        """``TiedRanking.of({"x"}, {"y", "z"})`` ranks x ahead of the tied pair."""
        return cls(tuple(frozenset(bucket) for bucket in buckets))

    @classmethod
    def from_key(cls, elements: Iterable, key: Callable, *, descending: bool = False) -> "TiedRanking":
        """Bucket *elements* by ``key(x)``; equal keys are tied."""
        groups: dict = defaultdict(set)
        for x in elements:
            groups[key(x)].add(x)
        return cls(tuple(frozenset(groups[k]) for k in sorted(groups, reverse=descending)))

    @cached_property
    def positions(self) -> dict:
        return {x: i for i, bucket in enumerate(self.buckets) for x in bucket}

    @property
    def universe(self) -> frozenset:
        return frozenset(self.positions)

    def position(self, x) -> int:
        return self.positions[x]

    def restrict(self, keep: Iterable) -> "TiedRanking":
        keep = set(keep)
        return TiedRanking(tuple(b & keep for b in self.buckets if not b.isdisjoint(keep)))

    def __len__(self) -> int:
        return len(self.buckets)


def _common_universe(rankings: Iterable[TiedRanking]) -> tuple:
    rankings = list(rankings)
    universe = rankings[0].universe
    for ranking in rankings[1:]:
        if ranking.universe != universe:
            raise RankingUniverseError("rankings are over different elements")
    return tuple(sorted(universe))


def _relations(ranking: TiedRanking, elements: Sequence) -> np.ndarray:
    """``sign(pos[i] - pos[j])``: -1 when i is ahead of j, 0 when tied."""
    pos = np.fromiter((ranking.position(x) for x in elements), dtype=np.int64, count=len(elements))
    return np.sign(pos[:, None] - pos[None, :])


def kendall_tau_ties(a: TiedRanking, b: TiedRanking, p: float = 0.5) -> float:
    elements = _common_universe([a, b])
    ra = _relations(a, elements)
    rb = _relations(b, elements)
    upper = np.triu(np.ones(ra.shape, dtype=bool), k=1)
    opposite = np.count_nonzero((ra * rb < 0) & upper)
    half = np.count_nonzero(((ra == 0) != (rb == 0)) & upper)
    return float(opposite + p * half)


def kemeny_score(pi: TiedRanking, rankings: WeightedRankings, p: float = 0.5) -> float:
    return float(sum(weight * kendall_tau_ties(ranking, pi, p) for ranking, weight in rankings))


@dataclass(frozen=True, eq=False)
class PairwiseCosts:
    elements: tuple
    before: np.ndarray
    tied: np.ndarray

    @classmethod
    def zeros(cls, elements: Sequence) -> "PairwiseCosts":
        n = len(elements)
        return cls(tuple(elements), np.zeros((n, n)), np.zeros((n, n)))

    @classmethod
    def from_rankings(
        cls, rankings: WeightedRankings, *, p: float = 0.5, elements: Sequence | None = None
    ) -> "PairwiseCosts":
        if elements is None:
            elements = _common_universe(r for r, _ in rankings)
        costs = cls.zeros(elements)
        for ranking, weight in rankings:
            if ranking.universe != frozenset(elements):
                raise RankingUniverseError("rankings are over different elements")
            rel = _relations(ranking, costs.elements)
            costs.before[:] += weight * np.where(rel > 0, 1.0, np.where(rel == 0, p, 0.0))
            costs.tied[:] += weight * np.where(rel == 0, 0.0, p)
        np.fill_diagonal(costs.before, 0.0)
        np.fill_diagonal(costs.tied, 0.0)
        return costs

    def __add__(self, other: "PairwiseCosts") -> "PairwiseCosts":
        if self.elements != other.elements:
            raise RankingUniverseError("cost matrices are over different elements")
        return PairwiseCosts(self.elements, self.before + other.before, self.tied + other.tied)

    def restrict(self, keep: Sequence) -> "PairwiseCosts":
        index = {x: i for i, x in enumerate(self.elements)}
        idx = np.array([index[x] for x in keep], dtype=np.int64)
        grid = np.ix_(idx, idx)
        return PairwiseCosts(tuple(keep), self.before[grid], self.tied[grid])

    def _positions(self, ranking: TiedRanking) -> np.ndarray:
        return np.fromiter(
            (ranking.position(x) for x in self.elements), dtype=np.int64, count=len(self.elements)
        )

    def score(self, ranking: TiedRanking) -> float:
        pos = self._positions(ranking)
        ahead = pos[:, None] < pos[None, :]
        together = pos[:, None] == pos[None, :]
        np.fill_diagonal(together, False)
        return float((self.before * ahead).sum() + (self.tied * together).sum() / 2)


def _local_search(costs: PairwiseCosts, start: TiedRanking, max_passes: int) -> TiedRanking:
    n = len(costs.elements)
    before, tied = costs.before, costs.tied
    pos = costs._positions(start)
    n_buckets = len(start)
    ids = np.arange(n)

    for _ in range(max_passes):
        improved = False
        for x in range(n):
            others = ids != x
            b = int(pos[x])
            alone = not np.any(pos[others] == b)
            if alone:
                pos[others & (pos > b)] -= 1
                n_buckets -= 1
            m = n_buckets
            q = pos[others]

            ahead = np.bincount(q, weights=before[others, x], minlength=m)
            behind = np.bincount(q, weights=before[x, others], minlength=m)
            tie = np.bincount(q, weights=tied[x, others], minlength=m)
            ahead_prefix = np.concatenate(([0.0], np.cumsum(ahead)))
            behind_suffix = np.concatenate((np.cumsum(behind[::-1])[::-1], [0.0]))

            # options 0..m-1 join a bucket, m..2m open a new bucket at that gap
            join = ahead_prefix[:m] + tie + behind_suffix[1:]
            gap = ahead_prefix + behind_suffix
            options = np.concatenate((join, gap))
            current = m + b if alone else b
            choice = int(np.argmin(options))
            if options[choice] < options[current] - _EPS:
                improved = True
            else:
                choice = current

            if choice < m:
                pos[x] = choice
            else:
                g = choice - m
                pos[others & (pos >= g)] += 1
                pos[x] = g
                n_buckets += 1
        if not improved:
            break

    return TiedRanking(
        tuple(frozenset(costs.elements[i] for i in np.flatnonzero(pos == k)) for k in range(n_buckets))
    )


def weak_orders(elements: Sequence) -> Iterator[TiedRanking]:
    """Every tied ranking of *elements* (13 for three elements, 75 for four)."""
    elements = list(elements)
    for labels in product(range(len(elements)), repeat=len(elements)):
        used = sorted(set(labels))
        if used != list(range(len(used))):
            continue
        yield TiedRanking(
            tuple(frozenset(x for x, b in zip(elements, labels) if b == k) for k in used)
        )


def consensus_ranking(
    rankings: WeightedRankings,
    seed=0,
    *,
    p: float = 0.5,
    max_passes: int = 20,
    costs: PairwiseCosts | None = None,
) -> TiedRanking:
    """Weighted Kemeny consensus by local search started from every input.

    Universes of at most ``EXHAUSTIVE_LIMIT`` elements are enumerated instead.
    *seed* may be an int or a ``numpy.random.Generator``; it only decides
    between candidates that end with the same score. *costs* may be passed in
    precomputed when the caller reuses parts of it across calls.
    """
    if not rankings:
        raise RankingUniverseError("consensus needs at least one ranking")
    elements = _common_universe(r for r, _ in rankings)
    if costs is None:
        costs = PairwiseCosts.from_rankings(rankings, p=p, elements=elements)
    elif costs.elements != elements:
        raise RankingUniverseError("cost matrices are over different elements")
    rng = np.random.default_rng(seed)

    if len(elements) <= EXHAUSTIVE_LIMIT:
        candidates = list(weak_orders(elements))
    else:
        candidates = []
        for start in dict.fromkeys(r for r, _ in rankings):
            candidates.append(_local_search(costs, start, max_passes))
    results = [(costs.score(candidate), candidate) for candidate in candidates]

    best_score = min(score for score, _ in results)
    best = [candidate for score, candidate in results if score <= best_score + _EPS]
    if len(best) == 1:
        return best[0]
    return best[int(rng.integers(len(best)))]
