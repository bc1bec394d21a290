"""
Tests for the management commands and the hyped console script.

Covers:
- components / linegraph / build / query / profile / topk
- sample_queries / eval / centrality / seed_hypergraph
- Exit codes: 2 for usage and configuration errors, 1 for runtime failures
- hyped.cli.main dispatch
"""

import io
import json
from contextlib import redirect_stderr, redirect_stdout

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from hyped.cli import main
from hyped.config import clear_config_cache
from hyped.hypercore import load_hypergraph, load_id_map
from hyped.storage import load_oracle
from hyped.tests.helpers import TempDirMixin

FULL_BUDGET = 10**9


@override_settings(HYPED={"S_MAX": 3, "THREADS": 1}, HYPED_CONFIG_FILE="/nonexistent/hyped.toml")
class CommandTestCase(TempDirMixin, SimpleTestCase):
    def setUp(self):
        super().setUp()
        clear_config_cache()
        self.addCleanup(clear_config_cache)
        self.toy = self.write_toy()

    def call(self, name: str, **options) -> str:
        out = io.StringIO()
        call_command(name, stdout=out, **options)
        return out.getvalue()

    def build(self, **options):
        path = self.tmp / "toy.oracle"
        values = {"input": str(self.toy), "out": str(path), "budget_q": FULL_BUDGET}
        values.update(options)
        self.call("build", **values)
        return path

    def assertExitCode(self, code: int, name: str, **options):
        with self.assertRaises(CommandError) as ctx:
            self.call(name, **options)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception


# ========================================================================
# Components and line graphs
# ========================================================================


class ComponentsCommandTests(CommandTestCase):
    def _partitions(self, output: str) -> set:
        rows = [line.split("\t") for line in output.splitlines()]
        return {(int(s), frozenset(members.split(","))) for s, _, _, _, members in rows}

    def test_toy(self):
        output = self.call("components", input=str(self.toy))
        self.assertEqual(len(output.splitlines()), 1 + 3 + 3)
        self.assertIn((1, frozenset("01234")), self._partitions(output))
        self.assertIn((2, frozenset("123")), self._partitions(output))

    def test_methods_agree(self):
        staged = self._partitions(self.call("components", input=str(self.toy), s_max=4))
        for method in ("linegraph", "independent"):
            output = self.call("components", input=str(self.toy), s_max=4, method=method)
            self.assertEqual(self._partitions(output), staged)

    def test_missing_input_is_a_runtime_error(self):
        self.assertExitCode(1, "components", input=str(self.tmp / "missing.txt"))

    def test_zero_s_max_is_a_usage_error(self):
        self.assertExitCode(2, "components", input=str(self.toy), s_max=0)


class LineGraphCommandTests(CommandTestCase):
    def test_line_graph(self):
        path = self.tmp / "lg.tsv"
        output = self.call("linegraph", input=str(self.toy), out=str(path))
        self.assertEqual(len(path.read_text().splitlines()), 5)
        self.assertIn("5 node(s), 5 edge(s)", output)

    def test_s_line_graph(self):
        path = self.tmp / "lg2.tsv"
        self.call("linegraph", input=str(self.toy), out=str(path), s=2)
        self.assertEqual(set(path.read_text().splitlines()), {"1\t2\t2", "2\t3\t2"})

    def test_augmented(self):
        path = self.tmp / "alg.tsv"
        output = self.call("linegraph", input=str(self.toy), out=str(path), augmented=True)
        self.assertIn("13 node(s), 5 overlap and 14 membership edge(s)", output)
        self.assertExitCode(2, "linegraph", input=str(self.toy), out=str(path), augmented=True, s=2)


# ========================================================================
# Build and query
# ========================================================================


class BuildCommandTests(CommandTestCase):
    def test_build(self):
        id_map = self.tmp / "toy.ids"
        path = self.build(id_map=str(id_map))
        oracle = load_oracle(path)
        self.assertEqual(oracle.s_max, 3)
        self.assertEqual(oracle.landmarks(1), [0, 1, 2, 3, 4])
        self.assertEqual(load_id_map(id_map).vertex_tokens[0], "1")

    def test_reports_landmarks(self):
        out = io.StringIO()
        call_command("build", input=str(self.toy), out=str(self.tmp / "o"), budget_q=FULL_BUDGET, stdout=out)
        self.assertIn("landmarks s=1: 5", out.getvalue())

    def test_invalid_configuration_is_a_usage_error(self):
        error = self.assertExitCode(2, "build", input=str(self.toy), out=str(self.tmp / "o"), d_min=6)
        self.assertIn("d_min", str(error))
        self.assertExitCode(2, "build", input=str(self.toy), out=str(self.tmp / "o"), s_max=0)

    def test_unreadable_input_is_a_runtime_error(self):
        bad = self.write("bad.txt", "1 2\n3 3\n")
        self.assertExitCode(1, "build", input=str(bad), out=str(self.tmp / "o"))


class QueryCommandTests(CommandTestCase):
    def setUp(self):
        super().setUp()
        self.oracle = self.build()
        self.pairs = self.write("pairs.tsv", "0\t4\n1\t3\n")

    def test_hyperedge_queries(self):
        output = self.call("query", oracle=str(self.oracle), pairs=str(self.pairs), s=1)
        self.assertEqual(output.splitlines(), ["0\t4\t1\t3\t3\t3\texact", "1\t3\t1\t1\t1\t1\texact"])

    def test_small_component_with_rounding(self):
        output = self.call("query", oracle=str(self.oracle), pairs=str(self.pairs), s=2, round=0)
        self.assertEqual(output.splitlines()[1], "1\t3\t2\t1\t2\t1\tsmall-component")

    def test_vertex_queries(self):
        pairs = self.write("vv.tsv", "1\t8\n3\t4\n")
        output = self.call(
            "query", oracle=str(self.oracle), input=str(self.toy), type="vv", pairs=str(pairs), s=1
        )
        self.assertEqual(output.splitlines(), ["1\t8\t1\t4\t4\t4\texact", "3\t4\t1\t1\t1\t1\texact"])

    def test_vertex_queries_need_input(self):
        self.assertExitCode(2, "query", oracle=str(self.oracle), type="vv", pairs=str(self.pairs), s=1)

    def test_invalid_s_is_a_runtime_error(self):
        self.assertExitCode(1, "query", oracle=str(self.oracle), pairs=str(self.pairs), s=4)

    def test_truncated_oracle(self):
        lines = self.oracle.read_text().splitlines()[:-1]
        self.oracle.write_text("\n".join(lines) + "\n")
        error = self.assertExitCode(1, "query", oracle=str(self.oracle), pairs=str(self.pairs), s=1)
        self.assertIn("[end]", str(error))


class ProfileCommandTests(CommandTestCase):
    def test_profile(self):
        oracle = self.build()
        pairs = self.write("pairs.tsv", "1\t3\n")
        output = self.call("profile", oracle=str(oracle), pairs=str(pairs))
        self.assertEqual(
            output.splitlines(),
            [
                "1\t3\t1\t1\t1\t1\texact",
                "1\t3\t2\t1\t2\t1.166667\tsmall-component",
                "1\t3\t3\tinf\tinf\tinf\tdisconnected",
            ],
        )


class TopKCommandTests(CommandTestCase):
    def setUp(self):
        super().setUp()
        self.oracle = self.build()
        self.labels = self.write("labels.tsv", "0\ta\n1\ta\n2\tb\n3\ta\n4\ta\n")

    def test_single_query(self):
        output = self.call(
            "topk", oracle=str(self.oracle), input=str(self.toy), labels=str(self.labels), k=2, s=1, query=["0"]
        )
        self.assertEqual(output.splitlines(), ["0\t1\t1\t1", "0\t2\t3\t2"])

    def test_exact_matches_full_budget(self):
        options = {"oracle": str(self.oracle), "input": str(self.toy), "labels": str(self.labels), "k": 3, "s": 1}
        self.assertEqual(self.call("topk", **options), self.call("topk", exact=True, **options))

    def test_k_must_be_positive(self):
        self.assertExitCode(
            2, "topk", oracle=str(self.oracle), input=str(self.toy), labels=str(self.labels), k=0, s=1
        )


class DedupedOracleCommandTests(CommandTestCase):
    """An oracle built with --dedupe is read back against the same collapsed input."""

    def setUp(self):
        super().setUp()
        self.input = self.write("dup.txt", "1 2\n1 2\n2 3 4\n3 4 5\n")
        self.oracle = self.build(input=str(self.input), dedupe=True, d_min=2)
        self.pairs = self.write("vv.tsv", "1\t5\n")

    def test_vertex_query(self):
        output = self.call(
            "query", oracle=str(self.oracle), input=str(self.input), dedupe=True, type="vv", pairs=str(self.pairs), s=1
        )
        self.assertEqual(output.splitlines(), ["1\t5\t1\t3\t3\t3\texact"])

    def test_without_dedupe_the_counts_disagree(self):
        error = self.assertExitCode(
            1, "query", oracle=str(self.oracle), input=str(self.input), type="vv", pairs=str(self.pairs), s=1
        )
        self.assertIn("4 hyperedges", str(error))

    def test_profile(self):
        output = self.call(
            "profile", oracle=str(self.oracle), input=str(self.input), dedupe=True, type="vv", pairs=str(self.pairs)
        )
        self.assertEqual(output.splitlines()[0], "1\t5\t1\t3\t3\t3\texact")

    def test_topk(self):
        labels = self.write("labels.tsv", "0\ta\n1\ta\n2\ta\n")
        output = self.call(
            "topk", oracle=str(self.oracle), input=str(self.input), dedupe=True, labels=str(labels), k=2, s=1,
            query=["0"],
        )
        self.assertEqual(output.splitlines(), ["0\t1\t1\t1", "0\t2\t2\t2"])


# ========================================================================
# Evaluation
# ========================================================================


class SampleQueriesCommandTests(CommandTestCase):
    def test_sample(self):
        path = self.tmp / "queries.tsv"
        output = self.call("sample_queries", input=str(self.toy), out=str(path), per_s=10, seed=1)
        self.assertIn("No same-component pair exists at s=[3]", output)
        self.assertIn("20 queries written", output)
        self.assertEqual(len(path.read_text().splitlines()), 1 + 20)

    def test_invalid_fraction(self):
        self.assertExitCode(2, "sample_queries", input=str(self.toy), out=str(self.tmp / "q"), cross_frac=2.0)

    def test_zero_s_max_is_a_usage_error(self):
        self.assertExitCode(2, "sample_queries", input=str(self.toy), out=str(self.tmp / "q"), s_max=0)


class EvalCommandTests(CommandTestCase):
    def test_in_process_build(self):
        rows = self.tmp / "rows.tsv"
        output = self.call("eval", input=str(self.toy), budget_q=FULL_BUDGET, d_min=2, per_s=10, rows=str(rows))
        report = json.loads(output)
        self.assertEqual(report["mae"], 0.0)
        self.assertEqual(report["n_estimates"], 20)
        self.assertGreaterEqual(report["off_seconds"], 0.0)
        self.assertEqual(len(rows.read_text().splitlines()), 20)

    def test_saved_oracle_and_queries(self):
        oracle = self.build()
        queries = self.tmp / "queries.tsv"
        self.call("sample_queries", input=str(self.toy), out=str(queries), per_s=5)
        out = self.tmp / "report.json"
        self.call("eval", input=str(self.toy), oracle=str(oracle), queries=str(queries), out=str(out), profiles=True)
        report = json.loads(out.read_text())
        self.assertIsNone(report["off_seconds"])
        self.assertGreater(report["n_estimates"], 0)


class CentralityCommandTests(CommandTestCase):
    def test_centrality(self):
        output = self.call("centrality", input=str(self.toy), s=1, budget_q=FULL_BUDGET, d_min=2)
        lines = output.splitlines()
        self.assertEqual(len(lines), 5 + 1)
        self.assertEqual(lines[0], "hyperedge\t0\t1\t2\t2")
        self.assertEqual(lines[-1], "# mape=0.000000 lar=0.000000 mape_excluded=0 lar_excluded=0")

    def test_s_out_of_range(self):
        self.assertExitCode(2, "centrality", input=str(self.toy), s=4)


class SeedHypergraphCommandTests(CommandTestCase):
    def test_uniform(self):
        path = self.tmp / "synth.txt"
        labels = self.tmp / "labels.tsv"
        self.call(
            "seed_hypergraph", out=str(path), model="uniform", edges=50, vertices=30, seed=3, labels=str(labels)
        )
        h = load_hypergraph(path)
        self.assertEqual(h.n_edges, 50)
        self.assertTrue(all(2 <= size <= 8 for size in h.sizes))
        self.assertEqual(len(labels.read_text().splitlines()), 50)

    def test_power_law_is_seeded(self):
        first, second = self.tmp / "a.txt", self.tmp / "b.txt"
        self.call("seed_hypergraph", out=str(first), edges=80, vertices=60, seed=2)
        self.call("seed_hypergraph", out=str(second), edges=80, vertices=60, seed=2)
        self.assertEqual(first.read_text(), second.read_text())

    def test_invalid_sizes(self):
        self.assertExitCode(2, "seed_hypergraph", out=str(self.tmp / "x"), vertices=1)
        self.assertExitCode(2, "seed_hypergraph", out=str(self.tmp / "x"), min_size=5, max_size=3, model="uniform")


# ========================================================================
# Console script
# ========================================================================


class ConsoleScriptTests(CommandTestCase):
    def run_main(self, *argv) -> tuple[int, str, str]:
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = main(list(argv))
        return code, out.getvalue(), err.getvalue()

    def test_usage(self):
        code, out, _ = self.run_main()
        self.assertEqual(code, 2)
        self.assertIn("usage: hyped", out)
        self.assertEqual(self.run_main("--help")[0], 0)

    def test_unknown_subcommand(self):
        code, _, err = self.run_main("bogus")
        self.assertEqual(code, 2)
        self.assertIn("unknown subcommand", err)

    def test_dispatch(self):
        code, out, _ = self.run_main("components", "--input", str(self.toy), "--s-max", "2")
        self.assertEqual(code, 0)
        self.assertEqual(len(out.splitlines()), 1 + 3)

    def test_dashed_subcommand(self):
        path = self.tmp / "q.tsv"
        code, _, _ = self.run_main("sample-queries", "--input", str(self.toy), "--out", str(path), "--per-s", "4")
        self.assertEqual(code, 0)
        self.assertTrue(path.exists())

    def test_exit_codes(self):
        self.assertEqual(self.run_main("build", "--input", str(self.toy))[0], 2)
        self.assertEqual(
            self.run_main("build", "--input", str(self.toy), "--out", str(self.tmp / "o"), "--d-min", "6")[0], 2
        )
        self.assertEqual(
            self.run_main("build", "--input", str(self.tmp / "missing"), "--out", str(self.tmp / "o"))[0], 1
        )
