"""
linegraph: export the (s-)line graph or the augmented line graph.

Usage:
    python manage.py linegraph --input data.txt --out lg.tsv
    python manage.py linegraph --input data.txt --s 2 --out lg2.tsv
    python manage.py linegraph --input data.txt --augmented --out alg.tsv
"""

from hyped.linegraph import (
    build_augmented_line_graph,
    build_line_graph,
    s_line_graph,
    write_augmented_line_graph,
    write_line_graph,
)
from hyped.management.base import HypedCommand


class Command(HypedCommand):
    help = "Write the weighted line graph of a hypergraph as TSV"

    def add_arguments(self, parser):
        parser.add_argument("--input", required=True, help="Hypergraph file")
        parser.add_argument("--out", required=True, help="Output TSV")
        parser.add_argument("--s", type=int, default=1, help="Keep overlaps of at least s (default 1)")
        parser.add_argument("--augmented", action="store_true", help="Add vertex nodes and membership edges")
        parser.add_argument("--dedupe", action="store_true", help="Collapse duplicate hyperedges")

    def run(self, **options):
        h = self.load_input(options["input"], dedupe=options["dedupe"])
        s = options["s"]
        if s < 1:
            raise self.usage_error("--s must be positive")

        if options["augmented"]:
            if s != 1:
                raise self.usage_error("--augmented exports the full line graph; drop --s")
            alg = build_augmented_line_graph(h)
            write_augmented_line_graph(alg, h, options["out"])
            summary = (
                f"{alg.n_nodes} node(s), {alg.n_overlap_edges} overlap and "
                f"{alg.n_membership_edges} membership edge(s)"
            )
        else:
            lg = build_line_graph(h)
            if s > 1:
                lg = s_line_graph(lg, s)
            write_line_graph(lg, options["out"])
            summary = f"{lg.n_nodes} node(s), {lg.n_edges} edge(s)"

        self.stdout.write(self.style.SUCCESS(f"Line graph written to {options['out']}: {summary}"))
