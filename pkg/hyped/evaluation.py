"""
Query sampling, accuracy metrics, s-closeness centrality and reports.
"""

import json
import logging
import math
import time
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .connectivity import SAdjacency, SComponents
from .exceptions import HypergraphParseError, InvalidQueryError, UndefinedCentralityError
from .hypercore import Hypergraph
from .linegraph import ExactOracle, bfs_distances
from .oracle import (
    DistanceEstimate,
    EstimateStatus,
    Oracle,
    estimate_h2h,
    estimate_v2e,
    estimate_v2v,
    profile_h2h,
    profile_v2e,
    profile_v2v,
)

logger = logging.getLogger(__name__)

INF = math.inf
QUERY_KINDS = ("hh", "vv", "ve")
L1_QUANTILES = (0.5, 0.9, 0.99, 1.0)


# ---------------------------------------------------------------------------
# Query batches
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Query:
    source: int
    target: int
    kind: str
    s: int


@dataclass
class QueryBatch:
    queries: list[Query] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.queries)

    def __iter__(self):
        return iter(self.queries)


def _as_query(h: Hypergraph, kind: str, e: int, f: int, s: int, rng: np.random.Generator) -> Query:
    """Turn a hyperedge pair into a query of *kind* by drawing member vertices."""
    if kind == "hh":
        return Query(e, f, kind, s)
    u = h.edges[e][int(rng.integers(h.edge_size(e)))]
    if kind == "ve":
        return Query(u, f, kind, s)
    v = h.edges[f][int(rng.integers(h.edge_size(f)))]
    return Query(u, v, kind, s)


def sample_queries(
    h: Hypergraph,
    cc: SComponents,
    per_s: int,
    cross_frac: float = 0.1,
    seed: int = 0,
    *,
    kind: str = "hh",
) -> QueryBatch:
    """Stratified pairs: *per_s* per level, mostly inside one s-component.

    Components are drawn with weight ``size choose 2``. A *cross_frac*
    share of each stratum pairs hyperedges from different components.
    """
    if kind not in QUERY_KINDS:
        raise InvalidQueryError(f"query kind must be one of {QUERY_KINDS}, got {kind!r}")
    if per_s < 0 or not 0 <= cross_frac <= 1:
        raise InvalidQueryError("per_s must be non-negative and cross_frac in [0, 1]")

    rng = np.random.default_rng(seed)
    batch = QueryBatch(
        provenance={
            "per_s": per_s,
            "cross_frac": cross_frac,
            "seed": seed,
            "kind": kind,
            "s_max": cc.s_max,
            "no_same_component": [],
            "no_cross_component": [],
        }
    )
    if per_s == 0:
        return batch

    for level in cc:
        s = level.s
        n_same = max(1, per_s - round(per_s * cross_frac))
        n_cross = per_s - n_same

        sizes = np.array(level.comp_size, dtype=float)
        weights = sizes * (sizes - 1) / 2
        if weights.sum() > 0:
            p = weights / weights.sum()
            for _ in range(n_same):
                cid = int(rng.choice(len(sizes), p=p))
                members = level.members[cid]
                i, j = rng.choice(len(members), size=2, replace=False)
                batch.queries.append(_as_query(h, kind, members[int(i)], members[int(j)], s, rng))
        else:
            batch.provenance["no_same_component"].append(s)

        if n_cross and len(level) >= 2:
            edges_s = sorted(level.comp_of)
            drawn = 0
            while drawn < n_cross:
                i, j = rng.choice(len(edges_s), size=2, replace=False)
                e, f = edges_s[int(i)], edges_s[int(j)]
                if level.comp_of[e] == level.comp_of[f]:
                    continue
                batch.queries.append(_as_query(h, kind, e, f, s, rng))
                drawn += 1
        elif n_cross:
            batch.provenance["no_cross_component"].append(s)

    return batch


def _token(h: Hypergraph, kind: str, position: str, value: int) -> str:
    is_vertex = kind == "vv" or (kind == "ve" and position == "source")
    return h.vertex_tokens[value] if is_vertex else str(value)


def _id(h: Hypergraph, kind: str, position: str, token: str) -> int:
    is_vertex = kind == "vv" or (kind == "ve" and position == "source")
    return h.vertex_id(token) if is_vertex else h.edge_id(token)


def write_queries(batch: QueryBatch, h: Hypergraph, path) -> None:
    """``src TAB dst TAB s TAB kind`` rows after a JSON provenance comment."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {json.dumps(batch.provenance, sort_keys=True)}\n")
        for q in batch:
            src = _token(h, q.kind, "source", q.source)
            dst = _token(h, q.kind, "target", q.target)
            fh.write(f"{src}\t{dst}\t{q.s}\t{q.kind}\n")


def read_queries(path, h: Hypergraph) -> QueryBatch:
    batch = QueryBatch()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if line.startswith("# ") and lineno == 1:
                batch.provenance = json.loads(line[2:])
                continue
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4 or parts[3] not in QUERY_KINDS or not parts[2].isdigit():
                raise HypergraphParseError("expected src TAB dst TAB s TAB kind", line=lineno, path=path)
            src, dst, s, kind = parts
            batch.queries.append(
                Query(_id(h, kind, "source", src), _id(h, kind, "target", dst), kind, int(s))
            )
    return batch


def read_pairs(path) -> list[tuple[str, str]]:
    """``src TAB dst`` token pairs; any further columns are ignored."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise HypergraphParseError("expected src TAB dst", line=lineno, path=Path(path))
            pairs.append((parts[0].strip(), parts[1].strip()))
    return pairs


# ---------------------------------------------------------------------------
# Accuracy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvalRow:
    source: int
    target: int
    kind: str
    s: int
    true: float
    lb: float
    ub: float
    estimate: float
    status: str

    def as_tsv(self) -> str:
        return "\t".join(
            str(value)
            for value in (self.source, self.target, self.s, self.true, self.lb, self.ub, self.estimate, self.status)
        )


@dataclass
class EvalReport:
    mae: float
    rmse: float
    time_per_query_us: float
    off_seconds: float
    l1_quantiles: dict[str, float]
    coverage_rate: float
    reach_error_rate: float
    n_estimates: int = 0
    n_compared: int = 0
    n_reach_errors: int = 0
    n_both_infinite: int = 0
    rows: list[EvalRow] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        """JSON-ready report; NaN becomes ``None``."""

        def clean(value):
            if isinstance(value, float) and math.isnan(value):
                return None
            if isinstance(value, dict):
                return {k: clean(v) for k, v in value.items()}
            return value

        return {f.name: clean(getattr(self, f.name)) for f in fields(self) if f.name != "rows"}


def _estimate(o: Oracle, h: Hypergraph, q: Query) -> DistanceEstimate:
    match q.kind:
        case "hh":
            return estimate_h2h(o, q.source, q.target, q.s)
        case "vv":
            return estimate_v2v(o, h, q.source, q.target, q.s)
        case "ve":
            return estimate_v2e(o, h, q.source, q.target, q.s)
    raise InvalidQueryError(f"unknown query kind {q.kind!r}")


def _profile(o: Oracle, h: Hypergraph, q: Query) -> tuple[DistanceEstimate, ...]:
    match q.kind:
        case "hh":
            return profile_h2h(o, q.source, q.target).estimates
        case "vv":
            return profile_v2v(o, h, q.source, q.target).estimates
        case "ve":
            return profile_v2e(o, h, q.source, q.target).estimates
    raise InvalidQueryError(f"unknown query kind {q.kind!r}")


def _truth(exact: ExactOracle, q: Query, s: int) -> float:
    match q.kind:
        case "hh":
            return exact.hh(q.source, q.target, s)
        case "vv":
            return exact.vv(q.source, q.target, s)
        case _:
            return exact.ve(q.source, q.target, s)


def evaluate(
    o: Oracle,
    h: Hypergraph,
    batch: QueryBatch,
    exact: ExactOracle | None = None,
    *,
    profiles: bool = False,
) -> EvalReport:
    """Compare oracle answers with BFS ground truth.

    With *profiles* every query is answered as a refined distance profile
    and each of its levels becomes one compared estimate. Only the oracle
    calls are timed.
    """
    exact = exact or ExactOracle(h)

    answered: list[tuple[Query, tuple[DistanceEstimate, ...]]] = []
    elapsed = 0.0
    n_estimates = 0
    for q in batch:
        started = time.perf_counter()
        estimates = _profile(o, h, q) if profiles else (_estimate(o, h, q),)
        elapsed += time.perf_counter() - started
        n_estimates += len(estimates)
        answered.append((q, estimates))

    rows: list[EvalRow] = []
    errors: list[float] = []
    l1_norms: list[float] = []
    reach_errors = both_infinite = uncovered = 0
    for q, estimates in answered:
        l1 = 0.0
        for d in estimates:
            true = _truth(exact, q, d.s)
            rows.append(EvalRow(q.source, q.target, q.kind, d.s, true, d.lb, d.ub, d.estimate, d.status))
            if d.status == EstimateStatus.UNCOVERED:
                uncovered += 1
            finite_true, finite_est = true != INF, d.estimate != INF
            if finite_true and finite_est:
                errors.append(abs(d.estimate - true))
                l1 += abs(d.estimate - true)
            elif finite_true or finite_est:
                reach_errors += 1
            else:
                both_infinite += 1
        l1_norms.append(l1)

    err = np.array(errors, dtype=float)
    if err.size:
        mae = float(err.mean())
        rmse = float(np.sqrt(np.mean(err**2)))
    else:
        logger.warning("No query had a finite estimate and a finite true distance; MAE and RMSE are undefined")
        mae = rmse = math.nan

    if l1_norms:
        values = np.quantile(np.array(l1_norms), L1_QUANTILES)
        quantiles = {str(q): float(v) for q, v in zip(L1_QUANTILES, values)}
    else:
        quantiles = {str(q): math.nan for q in L1_QUANTILES}

    total = len(rows)
    return EvalReport(
        mae=mae,
        rmse=rmse,
        time_per_query_us=elapsed / n_estimates * 1e6 if n_estimates else math.nan,
        off_seconds=o.report.off_seconds if o.report is not None else math.nan,
        l1_quantiles=quantiles,
        coverage_rate=uncovered / total if total else math.nan,
        reach_error_rate=reach_errors / total if total else math.nan,
        n_estimates=n_estimates,
        n_compared=int(err.size),
        n_reach_errors=reach_errors,
        n_both_infinite=both_infinite,
        rows=rows,
    )


@dataclass(frozen=True)
class AccuracyRatios:
    mape: float
    lar: float
    mape_excluded: int
    lar_excluded: int

    def __iter__(self):
        return iter((self.mape, self.lar))


def mape_lar(estimates, truths) -> AccuracyRatios:
    """Mean absolute percentage error and summed squared log accuracy ratio.

    Pairs with a zero or infinite true value are left out of MAPE; LAR also
    needs a positive finite estimate. Unpacks as ``(mape, lar)``.
    """
    est = np.asarray(list(estimates), dtype=float)
    true = np.asarray(list(truths), dtype=float)
    if est.shape != true.shape:
        raise InvalidQueryError("estimates and truths differ in length")

    for_mape = np.isfinite(true) & (true > 0) & np.isfinite(est)
    for_lar = for_mape & (est > 0)
    mape = float(np.mean(np.abs(est[for_mape] - true[for_mape]) / true[for_mape])) if for_mape.any() else math.nan
    lar = float(np.sum(np.log(est[for_lar] / true[for_lar]) ** 2)) if for_lar.any() else math.nan
    return AccuracyRatios(
        mape=mape,
        lar=lar,
        mape_excluded=int((~for_mape).sum()),
        lar_excluded=int((~for_lar).sum()),
    )


def avep_at_k(ranked_est, ranked_true, k: int, true_distance: dict | None = None) -> float:
    """Average precision of the estimated top-k against the exact top-k.

    With *true_distance*, anything tied with the exact k-th element counts as
    relevant.
    """
    if k <= 0:
        raise InvalidQueryError(f"k must be positive, got {k}")
    ranked_true = list(ranked_true)
    depth = min(k, len(ranked_true))
    if depth == 0:
        return 1.0
    relevant = set(ranked_true[:depth])
    if true_distance is not None:
        cutoff = true_distance[ranked_true[depth - 1]]
        relevant.update(x for x in ranked_true if true_distance[x] <= cutoff)

    hits = 0
    precision_sum = 0.0
    for i, x in enumerate(list(ranked_est)[:depth], start=1):
        if x in relevant:
            hits += 1
            precision_sum += hits / i
    return precision_sum / depth


# ---------------------------------------------------------------------------
# Centrality
# ---------------------------------------------------------------------------


def s_closeness(
    h: Hypergraph,
    adj: SAdjacency,
    cc: SComponents,
    e: int,
    s: int,
    oracle: Oracle | None = None,
) -> float:
    """Average s-distance from *e* to the rest of its s-component.

    Exact through BFS over *adj*, or estimated through *oracle* when given.
    """
    h.check_edge(e)
    level = cc.level(s)
    cid = level.comp_of.get(e)
    if cid is None:
        raise UndefinedCentralityError(f"hyperedge {e} has fewer than {s} vertices")
    size = level.comp_size[cid]
    if size < 2:
        raise UndefinedCentralityError(f"hyperedge {e} is alone in its {s}-component")

    others = [f for f in level.members[cid] if f != e]
    if oracle is not None:
        total = sum(estimate_h2h(oracle, e, f, s).estimate for f in others)
    else:
        dist = bfs_distances(adj, [e])
        total = sum(dist[f] for f in others)
    return total / (size - 1)


def vertex_s_closeness(
    h: Hypergraph,
    adj: SAdjacency,
    cc: SComponents,
    v: int,
    s: int,
    oracle: Oracle | None = None,
) -> float:
    """Largest s-closeness over the hyperedges containing *v*."""
    h.check_vertex(v)
    values = []
    for e in h.incidence[v]:
        try:
            values.append(s_closeness(h, adj, cc, e, s, oracle))
        except UndefinedCentralityError:
            continue
    if not values:
        raise UndefinedCentralityError(f"no hyperedge containing vertex {v} has a defined {s}-closeness")
    return max(values)


@dataclass(frozen=True)
class CentralityRow:
    kind: str
    entity: int
    s: int
    exact: float
    estimate: float


@dataclass
class CentralityReport:
    rows: list[CentralityRow]
    accuracy: AccuracyRatios


def centrality_report(
    o: Oracle,
    h: Hypergraph,
    cc: SComponents,
    exact: ExactOracle,
    s: int,
    *,
    kind: str = "hyperedge",
    sample: int | None = None,
    seed: int = 0,
) -> CentralityReport:
    """Exact versus estimated s-closeness for (a sample of) defined entities."""
    if kind not in ("vertex", "hyperedge"):
        raise InvalidQueryError(f"kind must be 'vertex' or 'hyperedge', got {kind!r}")
    level = cc.level(s)
    defined_edges = sorted(e for e, cid in level.comp_of.items() if level.comp_size[cid] >= 2)
    if kind == "hyperedge":
        entities = defined_edges
    else:
        defined = set(defined_edges)
        entities = sorted({v for e in defined for v in h.edges[e]})
    if sample is not None and sample < len(entities):
        rng = np.random.default_rng(seed)
        entities = sorted(entities[int(i)] for i in rng.choice(len(entities), size=sample, replace=False))

    adj = exact.adjacency(s)
    measure = s_closeness if kind == "hyperedge" else vertex_s_closeness
    rows = [
        CentralityRow(kind, x, s, measure(h, adj, cc, x, s), measure(h, adj, cc, x, s, o))
        for x in entities
    ]
    accuracy = mape_lar((r.estimate for r in rows), (r.exact for r in rows))
    return CentralityReport(rows=rows, accuracy=accuracy)
