"""
Tests for stage-wise s-connected components and the overlap ledger.

Covers:
- UnionFind (path compression, union by rank)
- find_connected_components on TOY and trivial inputs
- Equality with both baselines on random hypergraphs
- Refinement across s and size filtering
- s_adjacency versus brute force, including lazily resolved CP pairs
"""

from django.test import SimpleTestCase, tag

from hyped.connectivity import (
    UnionFind,
    baseline_cc_independent,
    baseline_cc_linegraph,
    direct_s_adjacency,
    find_connected_components,
    s_adjacency,
)
from hyped.exceptions import InvalidQueryError
from hyped.hypercore import Hypergraph
from hyped.tests.helpers import E1, E2, E3, E4, E5, brute_neighbors, brute_partition, random_instance, toy


def _parts(*groups) -> frozenset:
    return frozenset(frozenset(g) for g in groups)


# ========================================================================
# Union-find
# ========================================================================


class UnionFindTests(SimpleTestCase):
    def test_union_and_find(self):
        uf = UnionFind(5)
        self.assertTrue(uf.union(0, 1))
        self.assertTrue(uf.union(3, 4))
        self.assertFalse(uf.union(1, 0))
        self.assertTrue(uf.same(0, 1))
        self.assertFalse(uf.same(1, 3))

    def test_path_compression_points_to_root(self):
        uf = UnionFind(4)
        uf.parent = [0, 0, 1, 2]
        root = uf.find(3)
        self.assertEqual(root, 0)
        self.assertEqual(uf.parent, [0, 0, 0, 0])

    def test_union_by_rank(self):
        uf = UnionFind(4)
        uf.union(0, 1)
        self.assertEqual(uf.rank[uf.find(0)], 1)
        uf.union(2, 0)
        # the singleton goes under the rank-1 root
        self.assertEqual(uf.find(2), uf.find(0))
        self.assertEqual(uf.rank[uf.find(0)], 1)
        uf.union(3, 3)
        self.assertEqual(uf.rank[3], 0)


# ========================================================================
# Components
# ========================================================================


class FindConnectedComponentsTests(SimpleTestCase):
    def test_toy_levels(self):
        cc, _ = find_connected_components(toy(), 3)
        self.assertEqual(cc.partition(1), _parts({E1, E2, E3, E4, E5}))
        self.assertEqual(cc.partition(2), _parts({E2, E3, E4}, {E1}, {E5}))
        self.assertEqual(cc.partition(3), _parts({E2}, {E3}, {E4}))

    def test_toy_sizes_and_vertex_counts(self):
        cc, _ = find_connected_components(toy(), 3)
        level = cc.level(2)
        cid = level.comp_of[E3]
        self.assertEqual(level.comp_size[cid], 3)
        self.assertEqual(level.comp_vertices[cid], 6)
        self.assertEqual(sum(level.comp_size), 5)
        self.assertEqual(cc.level(1).comp_vertices, (8,))

    def test_single_hyperedge(self):
        h = Hypergraph.from_edges([["1", "2"]])
        cc, _ = find_connected_components(h, 2)
        self.assertEqual(cc.partition(1), _parts({0}))
        self.assertEqual(cc.partition(2), _parts({0}))

    def test_disjoint_hyperedges(self):
        h = Hypergraph.from_edges([["1", "2"], ["3", "4"]])
        cc, _ = find_connected_components(h, 2)
        for s in (1, 2):
            self.assertEqual(cc.partition(s), _parts({0}, {1}))

    def test_small_hyperedges_never_appear_at_higher_s(self):
        cc, _ = find_connected_components(toy(), 4)
        self.assertNotIn(E1, cc.level(3).comp_of)
        self.assertEqual(set(cc.level(4).comp_of), {E4})
        self.assertIsNone(cc.component_of(E5, 3))

    def test_s_max_must_be_positive(self):
        with self.assertRaises(InvalidQueryError):
            find_connected_components(toy(), 0)
        cc, _ = find_connected_components(toy(), 2)
        with self.assertRaises(InvalidQueryError):
            cc.level(3)

    def test_refinement_across_s(self):
        for seed in range(10):
            h = random_instance(seed)
            cc, _ = find_connected_components(h, 6)
            for s in range(1, 6):
                upper, lower = cc.level(s + 1), cc.level(s)
                for e, cid in upper.comp_of.items():
                    for f in upper.members[cid]:
                        self.assertEqual(lower.comp_of[e], lower.comp_of[f])

    def test_fewer_overlap_increments_than_independent(self):
        for seed in range(10):
            h = random_instance(seed)
            staged, _ = find_connected_components(h, 8)
            independent = baseline_cc_independent(h, 8)
            self.assertLessEqual(staged.overlap_increments, independent.overlap_increments)


@tag("slow")
class BaselineEquivalenceTests(SimpleTestCase):
    """Stage-wise, line-graph and independent components agree as partitions."""

    def test_toy(self):
        h = toy()
        staged, _ = find_connected_components(h, 3)
        for baseline in (baseline_cc_linegraph(h, 3), baseline_cc_independent(h, 3)):
            for s in (1, 2, 3):
                self.assertEqual(staged.partition(s), baseline.partition(s))

    def test_random_hypergraphs(self):
        for seed in range(100):
            n_vertices = 20 + seed % 80
            n_edges = 10 + (seed * 37) % 190
            h = random_instance(seed, n_vertices=n_vertices, n_edges=n_edges)
            staged, _ = find_connected_components(h, 8)
            by_linegraph = baseline_cc_linegraph(h, 8)
            independent = baseline_cc_independent(h, 8)
            for s in range(1, 9):
                with self.subTest(seed=seed, s=s):
                    self.assertEqual(staged.partition(s), by_linegraph.partition(s))
                    self.assertEqual(staged.partition(s), independent.partition(s))

    def test_against_networkx_components(self):
        for seed in range(10):
            h = random_instance(seed)
            staged, _ = find_connected_components(h, 5)
            for s in range(1, 6):
                self.assertEqual(staged.partition(s), brute_partition(h, s))


# ========================================================================
# s-adjacency
# ========================================================================


class SAdjacencyTests(SimpleTestCase):
    def test_toy_examples(self):
        h = toy()
        _, ledger = find_connected_components(h, 3)
        adj2 = s_adjacency(h, ledger, 2)
        self.assertEqual(adj2[E3], (E2, E4))
        self.assertEqual(adj2[E1], ())
        adj1 = s_adjacency(h, ledger, 1)
        self.assertEqual(adj1[E2], (E1, E3, E4))

    def test_cp_pair_is_resolved_lazily(self):
        h = toy()
        _, ledger = find_connected_components(h, 3)
        # e3 already joins e2 and e4 when their shared vertex is scanned at s=1
        self.assertIn((E2, E4), ledger.cp)
        self.assertNotIn((E2, E4), ledger.op)
        s_adjacency(h, ledger, 1)
        self.assertEqual(ledger.op[(E2, E4)], 1)

    def test_above_largest_size_is_empty(self):
        h = toy()
        _, ledger = find_connected_components(h, 6)
        adj = s_adjacency(h, ledger, 5)
        self.assertTrue(all(not adj[e] for e in range(h.n_edges)))

    def test_symmetric_and_matches_brute_force(self):
        for seed in range(15):
            h = random_instance(seed, n_vertices=30, n_edges=70)
            _, ledger = find_connected_components(h, 6)
            for s in range(1, 7):
                adj = s_adjacency(h, ledger, s)
                for e in range(h.n_edges):
                    self.assertEqual(set(adj[e]), brute_neighbors(h, e, s) if len(h.edges[e]) >= s else set())
                    for f in adj[e]:
                        self.assertIn(e, adj[f])
                self.assertEqual(adj, direct_s_adjacency(h, s))

    def test_ledger_overlaps_never_exceed_truth(self):
        h = random_instance(2)
        _, ledger = find_connected_components(h, 6)
        for (e, f), count in ledger.op.items():
            self.assertLessEqual(count, len(set(h.edges[e]) & set(h.edges[f])))

    def test_s_outside_ledger(self):
        h = toy()
        _, ledger = find_connected_components(h, 2)
        with self.assertRaises(InvalidQueryError):
            s_adjacency(h, ledger, 3)
