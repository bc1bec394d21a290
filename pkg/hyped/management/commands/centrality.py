"""
centrality: exact versus estimated s-closeness.

Usage:
    python manage.py centrality --input data.txt --oracle data.oracle --s 2
    python manage.py centrality --input data.txt --s 3 --kind vertex --sample 200 --budget-l 100

Rows are ``kind TAB id TAB s TAB exact TAB estimate``, followed by the
aggregate MAPE and LAR on a ``#`` line.
"""

from hyped.connectivity import find_connected_components
from hyped.evaluation import centrality_report
from hyped.linegraph import ExactOracle
from hyped.management.base import HypedCommand, format_distance
from hyped.oracle import build_oracle
from hyped.storage import load_oracle


class Command(HypedCommand):
    help = "Compare exact and oracle-estimated s-closeness centrality"

    def add_arguments(self, parser):
        parser.add_argument("--input", required=True, help="Hypergraph file")
        parser.add_argument("--oracle", help="Saved oracle (default: build one now)")
        parser.add_argument("--s", type=int, required=True, help="Overlap threshold s")
        parser.add_argument("--kind", choices=["hyperedge", "vertex"], default="hyperedge", help="Entity kind")
        parser.add_argument("--sample", type=int, help="Evaluate this many random entities")
        parser.add_argument("--out", help="Output TSV (default: stdout)")
        parser.add_argument("--dedupe", action="store_true", help="Collapse duplicate hyperedges")
        self.add_oracle_arguments(parser)

    def run(self, **options):
        cfg, s_max = self.oracle_config(options)
        h = self.load_input(options["input"], dedupe=options["dedupe"])
        oracle = load_oracle(options["oracle"]) if options["oracle"] else build_oracle(h, cfg, s_max)
        if oracle.n_edges != h.n_edges:
            raise self.usage_error("the oracle was built on a different hypergraph")
        s = options["s"]
        if not 1 <= s <= oracle.s_max:
            raise self.usage_error(f"--s must be in [1, {oracle.s_max}]")

        components, ledger = find_connected_components(h, oracle.s_max)
        report = centrality_report(
            oracle,
            h,
            components,
            ExactOracle(h, ledger),
            s,
            kind=options["kind"],
            sample=options["sample"],
            seed=cfg.seed,
        )

        with self.output(options["out"]) as out:
            for row in report.rows:
                entity = h.vertex_tokens[row.entity] if row.kind == "vertex" else str(row.entity)
                out.write(
                    f"{row.kind}\t{entity}\t{row.s}\t{format_distance(row.exact)}\t"
                    f"{format_distance(row.estimate)}\n"
                )
            accuracy = report.accuracy
            out.write(
                f"# mape={accuracy.mape:.6f} lar={accuracy.lar:.6f} "
                f"mape_excluded={accuracy.mape_excluded} lar_excluded={accuracy.lar_excluded}\n"
            )
