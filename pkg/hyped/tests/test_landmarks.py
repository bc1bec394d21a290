"""
Tests for landmark budgeting, assignment and selection.

Covers:
- AssignmentConfig defaults, budget resolution and validation
- Sampling assignment (budget, saturation, eligibility)
- Rank-aggregation assignment
- The five selection strategies and path pools
"""

import numpy as np
from django.core.exceptions import ValidationError
from django.test import SimpleTestCase, override_settings

from hyped.config import clear_config_cache
from hyped.connectivity import find_connected_components
from hyped.exceptions import SaturatedComponentError
from hyped.hypercore import Hypergraph
from hyped.landmarks import (
    AssignmentConfig,
    ComponentRef,
    LandmarkSet,
    PathPool,
    assign_landmarks,
    build_path_pool,
    component_refs,
    select_landmark,
)
from hyped.linegraph import ExactOracle
from hyped.tests.helpers import E1, E2, E3, E4, E5, full_budget, path_hypergraph, random_instance, toy


def _setup(h: Hypergraph, s_max: int):
    cc, ledger = find_connected_components(h, s_max)
    return cc, ledger


def _ref(cc, s: int, e: int) -> ComponentRef:
    level = cc.level(s)
    cid = level.comp_of[e]
    return ComponentRef(s=s, comp_id=cid, size=level.comp_size[cid], n_vertices=level.comp_vertices[cid])


# ========================================================================
# Configuration
# ========================================================================


@override_settings(HYPED_CONFIG_FILE="/nonexistent/hyped.toml")
class AssignmentConfigTests(SimpleTestCase):
    def setUp(self):
        clear_config_cache()

    def tearDown(self):
        clear_config_cache()

    @override_settings(HYPED={"BUDGET_L": 12.0, "D_MIN": 3, "SELECT": "farthest"})
    def test_from_defaults_reads_settings(self):
        cfg = AssignmentConfig.from_defaults()
        self.assertEqual(cfg.budget_l, 12.0)
        self.assertEqual(cfg.d_min, 3)
        self.assertEqual(cfg.selection, "farthest")
        self.assertEqual(cfg.alpha, 0.5)

    def test_none_overrides_are_ignored(self):
        cfg = AssignmentConfig.from_defaults(alpha=None, beta=0.1, seed=9)
        self.assertEqual(cfg.beta, 0.1)
        self.assertEqual(cfg.seed, 9)
        self.assertEqual(cfg.alpha, AssignmentConfig.from_defaults().alpha)

    def test_budget_resolution(self):
        self.assertEqual(AssignmentConfig(budget_l=2.5).resolve_budget(5), 13)
        cfg = AssignmentConfig.from_defaults(budget_q=6)
        self.assertIsNone(cfg.budget_l)
        self.assertEqual(cfg.resolve_budget(1000), 6)

    def test_clean_reports_every_field(self):
        cfg = AssignmentConfig(d_min=6, alpha=0.8, beta=0.4, selection="central", threads=0)
        with self.assertRaises(ValidationError) as ctx:
            cfg.clean()
        errors = ctx.exception.message_dict
        self.assertIn("d_min", errors)
        self.assertIn("beta", errors)
        self.assertIn("selection", errors)
        self.assertIn("threads", errors)

    def test_rankagg_allows_weights_above_one(self):
        AssignmentConfig(alpha=1.0, beta=0.5, strategy="rankagg").clean()

    def test_negative_budget(self):
        with self.assertRaises(ValidationError):
            AssignmentConfig(budget_l=None, budget_q=-1).clean()


# ========================================================================
# Sampling assignment
# ========================================================================


class AssignSamplingTests(SimpleTestCase):
    def test_toy_budget_of_six(self):
        h = toy()
        cc, ledger = _setup(h, 2)
        for seed in range(10):
            cfg = AssignmentConfig(budget_l=None, budget_q=6, d_min=2, seed=seed, threads=1)
            landmarks = assign_landmarks(h, cc, ledger, cfg)
            self.assertEqual(len(landmarks), 2)
            stored = landmarks.stored_pairs(cc)
            self.assertGreaterEqual(stored, 6)
            self.assertLess(stored, 6 + 5)
            # degree order inside each eligible component
            self.assertEqual(landmarks.landmarks(1), [E2, E4][: len(landmarks.landmarks(1))])
            self.assertEqual(landmarks.landmarks(2), [E3, E2][: len(landmarks.landmarks(2))])

    def test_budget_of_one_assigns_exactly_one(self):
        h = toy()
        cc, ledger = _setup(h, 2)
        cfg = AssignmentConfig(budget_l=None, budget_q=1, d_min=2, threads=1)
        self.assertEqual(len(assign_landmarks(h, cc, ledger, cfg)), 1)

    def test_no_eligible_component(self):
        h = toy()
        cc, ledger = _setup(h, 3)
        cfg = AssignmentConfig(budget_l=None, budget_q=100, d_min=5, threads=1)
        with self.assertLogs("hyped.landmarks", level="WARNING"):
            landmarks = assign_landmarks(h, cc, ledger, cfg)
        self.assertEqual(len(landmarks), 0)

    def test_zero_budget(self):
        h = toy()
        cc, ledger = _setup(h, 2)
        cfg = AssignmentConfig(budget_l=None, budget_q=0, d_min=2, threads=1)
        self.assertEqual(len(assign_landmarks(h, cc, ledger, cfg)), 0)

    def test_full_budget_saturates_every_eligible_component(self):
        h = toy()
        cc, ledger = _setup(h, 3)
        landmarks = assign_landmarks(h, cc, ledger, full_budget(d_min=2))
        self.assertEqual(sorted(landmarks.landmarks(1)), [E1, E2, E3, E4, E5])
        self.assertEqual(sorted(landmarks.landmarks(2)), [E2, E3, E4])
        self.assertEqual(landmarks.landmarks(3), [])

    def test_budget_and_saturation_on_random_instances(self):
        for seed in range(8):
            h = random_instance(seed, n_edges=80)
            cc, ledger = _setup(h, 4)
            cfg = AssignmentConfig(budget_l=3.0, d_min=3, seed=seed, threads=1)
            landmarks = assign_landmarks(h, cc, ledger, cfg)
            budget = cfg.resolve_budget(h.n_edges)
            largest = max(max(level.comp_size) for level in cc)
            eligible_total = sum(c.size * c.size for c in component_refs(cc) if c.size > cfg.d_min)
            stored = landmarks.stored_pairs(cc)
            self.assertLess(stored, budget + largest)
            self.assertGreaterEqual(stored, min(budget, eligible_total))
            for s, entries in landmarks.by_level.items():
                level = cc.level(s)
                chosen = [e for e, _ in entries]
                self.assertEqual(len(chosen), len(set(chosen)))
                for e, cid in entries:
                    self.assertEqual(level.comp_of[e], cid)
                    self.assertGreater(level.comp_size[cid], cfg.d_min)

    def test_reproducible_given_seed(self):
        h = random_instance(1)
        cc, ledger = _setup(h, 3)
        cfg = AssignmentConfig(budget_l=2.0, d_min=2, seed=4, selection="random", threads=1)
        first = assign_landmarks(h, cc, ledger, cfg)
        second = assign_landmarks(h, cc, ledger, cfg)
        self.assertEqual(first.by_level, second.by_level)

    def test_invalid_config_is_rejected(self):
        h = toy()
        cc, ledger = _setup(h, 2)
        with self.assertRaises(ValidationError):
            assign_landmarks(h, cc, ledger, AssignmentConfig(d_min=6))


# ========================================================================
# Rank-aggregation assignment
# ========================================================================


class AssignRankaggTests(SimpleTestCase):
    def setUp(self):
        self.h = Hypergraph.from_edges(path_hypergraph(10) + path_hypergraph(5, first_vertex=100))
        self.cc, self.ledger = _setup(self.h, 1)

    def _cfg(self, budget_q: int, **overrides) -> AssignmentConfig:
        values = {
            "budget_l": None,
            "budget_q": budget_q,
            "d_min": 4,
            "alpha": 1.0,
            "beta": 0.0,
            "strategy": "rankagg",
            "threads": 1,
        }
        values.update(overrides)
        return AssignmentConfig(**values)

    def test_larger_component_goes_first(self):
        landmarks = assign_landmarks(self.h, self.cc, self.ledger, self._cfg(10))
        chosen = landmarks.landmarks(1)
        self.assertEqual(len(chosen), 1)
        self.assertLess(chosen[0], 10)

    def test_budget_above_squares_saturates_everything(self):
        landmarks = assign_landmarks(self.h, self.cc, self.ledger, self._cfg(10 * 10 + 5 * 5))
        self.assertEqual(sorted(landmarks.landmarks(1)), list(range(15)))

    def test_single_eligible_component(self):
        landmarks = assign_landmarks(self.h, self.cc, self.ledger, self._cfg(35, d_min=5))
        chosen = landmarks.landmarks(1)
        self.assertEqual(len(chosen), 4)
        self.assertTrue(all(e < 10 for e in chosen))

    def test_assigned_ranking_spreads_landmarks(self):
        # once the large component holds a landmark the smaller one catches up
        landmarks = assign_landmarks(self.h, self.cc, self.ledger, self._cfg(20, alpha=0.25))
        chosen = landmarks.landmarks(1)
        self.assertTrue(any(e >= 10 for e in chosen))


# ========================================================================
# Selection
# ========================================================================


class SelectLandmarkTests(SimpleTestCase):
    def setUp(self):
        self.h = toy()
        self.cc, ledger = _setup(self.h, 3)
        self.exact = ExactOracle(self.h, ledger)

    def _select(self, selection: str, s: int, e: int, already=(), *, pool=None, seed=0):
        ref = _ref(self.cc, s, e)
        cfg = AssignmentConfig(selection=selection, threads=1)
        members = self.cc.level(s).members[ref.comp_id]
        return select_landmark(
            ref,
            set(already),
            self.exact.adjacency(s),
            cfg,
            members=members,
            rng=np.random.default_rng(seed),
            pool=pool,
        )

    def test_degree_breaks_ties_by_lower_id(self):
        self.assertEqual(self._select("degree", 1, E1), E2)
        self.assertEqual(self._select("degree", 1, E1, {E2}), E4)

    def test_random_is_reproducible(self):
        first = self._select("random", 1, E1, seed=42)
        self.assertEqual(first, self._select("random", 1, E1, seed=42))
        self.assertNotIn(self._select("random", 1, E1, {E1, E2, E3, E4}, seed=42), {E1, E2, E3, E4})

    def test_farthest_on_a_path(self):
        h = Hypergraph.from_edges(path_hypergraph(3))
        cc, ledger = _setup(h, 1)
        ref = _ref(cc, 1, 0)
        chosen = select_landmark(
            ref,
            {0},
            ExactOracle(h, ledger).adjacency(1),
            AssignmentConfig(selection="farthest"),
            members=cc.level(1).members[ref.comp_id],
            rng=np.random.default_rng(0),
        )
        self.assertEqual(chosen, 2)

    def test_saturated_component(self):
        with self.assertRaises(SaturatedComponentError):
            self._select("degree", 2, E2, {E2, E3, E4})


class PathPoolTests(SimpleTestCase):
    def setUp(self):
        self.h = Hypergraph.from_edges(path_hypergraph(5))
        cc, ledger = _setup(self.h, 1)
        self.adj = ExactOracle(self.h, ledger).adjacency(1)
        self.ref = _ref(cc, 1, 0)
        self.members = cc.level(1).members[self.ref.comp_id]

    def _pool(self) -> PathPool:
        return build_path_pool(self.adj, self.members, 1.0, np.random.default_rng(0), threads=2)

    def _select(self, selection, already, pool):
        return select_landmark(
            self.ref,
            set(already),
            self.adj,
            AssignmentConfig(selection=selection),
            members=self.members,
            rng=np.random.default_rng(0),
            pool=pool,
        )

    def test_pool_holds_one_path_per_pair(self):
        pool = self._pool()
        self.assertEqual(len(pool.paths), 10)
        counts = pool.counts(uncovered_only=False)
        self.assertEqual([counts[e] for e in range(5)], [4, 7, 8, 7, 4])

    def test_betweenness_and_bestcover(self):
        pool = self._pool()
        self.assertEqual(self._select("betweenness", (), pool), 2)
        pool.cover(2)
        self.assertEqual(self._select("betweenness", {2}, pool), 1)
        self.assertEqual(self._select("bestcover", {2}, pool), 0)

    def test_bestcover_falls_back_to_degree(self):
        pool = self._pool()
        for e in range(5):
            pool.cover(e)
        self.assertEqual(self._select("bestcover", {2}, pool), 1)

    def test_sample_size_has_a_floor_of_two(self):
        pool = build_path_pool(self.adj, self.members, 0.01, np.random.default_rng(3))
        self.assertEqual(len(pool.paths), 1)

    def test_selection_independent_of_thread_count(self):
        h = random_instance(6, n_edges=80)
        cc, ledger = _setup(h, 3)
        results = []
        for threads in (1, 4):
            cfg = AssignmentConfig(budget_l=2.0, d_min=2, selection="bestcover", seed=1, threads=threads)
            results.append(assign_landmarks(h, cc, ledger, cfg).by_level)
        self.assertEqual(results[0], results[1])


class LandmarkSetTests(SimpleTestCase):
    def test_stored_pairs_sum_component_sizes(self):
        cc, _ = _setup(toy(), 2)
        landmarks = LandmarkSet()
        landmarks.add(1, E2, cc.level(1).comp_of[E2])
        landmarks.add(2, E3, cc.level(2).comp_of[E3])
        self.assertEqual(landmarks.stored_pairs(cc), 5 + 3)
        self.assertEqual(len(landmarks), 2)
        self.assertEqual(landmarks.landmarks(3), [])
