"""
eval: accuracy and latency of an oracle against BFS ground truth.

Usage:
    python manage.py eval --input data.txt --oracle data.oracle --queries queries.tsv
    python manage.py eval --input data.txt --budget-l 30 --per-s 100 --rows rows.tsv
    python manage.py eval --input data.txt --oracle data.oracle --queries queries.tsv --profiles

Without ``--oracle`` the oracle is built in-process from the oracle flags so
the report includes its build time. Without ``--queries`` a stratified batch
is sampled. The report is a JSON object.
"""

import json

from hyped.connectivity import find_connected_components
from hyped.evaluation import QUERY_KINDS, evaluate, read_queries, sample_queries
from hyped.linegraph import ExactOracle
from hyped.management.base import HypedCommand
from hyped.oracle import build_oracle
from hyped.storage import load_oracle


class Command(HypedCommand):
    help = "Evaluate oracle estimates against exact s-distances"

    def add_arguments(self, parser):
        parser.add_argument("--input", required=True, help="Hypergraph file")
        parser.add_argument("--oracle", help="Saved oracle (default: build one now)")
        parser.add_argument("--queries", help="Query TSV from sample_queries (default: sample now)")
        parser.add_argument("--per-s", type=int, default=100, help="Queries per level when sampling")
        parser.add_argument("--cross-frac", type=float, default=0.1, help="Cross-component share when sampling")
        parser.add_argument("--kind", choices=QUERY_KINDS, default="hh", help="Query kind when sampling")
        parser.add_argument("--profiles", action="store_true", help="Evaluate refined profiles over all s")
        parser.add_argument("--rows", help="Also write per-query rows to this TSV")
        parser.add_argument("--out", help="JSON report file (default: stdout)")
        parser.add_argument("--dedupe", action="store_true", help="Collapse duplicate hyperedges")
        self.add_oracle_arguments(parser)

    def run(self, **options):
        cfg, s_max = self.oracle_config(options)
        h = self.load_input(options["input"], dedupe=options["dedupe"])

        if options["oracle"]:
            oracle = load_oracle(options["oracle"])
            if oracle.n_edges != h.n_edges:
                raise self.usage_error("the oracle was built on a different hypergraph")
        else:
            oracle = build_oracle(h, cfg, s_max)

        if options["queries"]:
            batch = read_queries(options["queries"], h)
        else:
            components, _ = find_connected_components(h, oracle.s_max)
            batch = sample_queries(
                h, components, options["per_s"], options["cross_frac"], cfg.seed, kind=options["kind"]
            )

        report = evaluate(oracle, h, batch, ExactOracle(h), profiles=options["profiles"])

        if options["rows"]:
            with open(options["rows"], "w", encoding="utf-8") as fh:
                for row in report.rows:
                    fh.write(row.as_tsv() + "\n")
        with self.output(options["out"]) as out:
            out.write(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
