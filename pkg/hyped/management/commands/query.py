"""
query: estimate s-distances for a file of pairs.

Usage:
    python manage.py query --oracle data.oracle --type hh --s 2 --pairs pairs.tsv
    python manage.py query --oracle data.oracle --input data.txt --type vv --s 1 --pairs pairs.tsv --round 0

Pairs are ``src TAB dst`` tokens: hyperedge ids for hyperedges, the original
vertex tokens for vertices. Output rows are
``src TAB dst TAB s TAB lb TAB ub TAB estimate TAB status``.
"""

from hyped.evaluation import read_pairs
from hyped.management.base import HypedCommand, format_distance, resolve_pair
from hyped.oracle import estimate_h2h, estimate_v2e, estimate_v2v


class Command(HypedCommand):
    help = "Answer s-distance queries from a saved oracle"

    def add_arguments(self, parser):
        parser.add_argument("--oracle", required=True, help="Oracle file")
        parser.add_argument("--type", choices=["hh", "vv", "ve"], default="hh", help="Query kind")
        parser.add_argument("--s", type=int, required=True, help="Overlap threshold s")
        parser.add_argument("--pairs", required=True, help="TSV of src/dst tokens")
        parser.add_argument("--input", help="Hypergraph file (required for vv and ve)")
        parser.add_argument("--dedupe", action="store_true", help="Collapse duplicate hyperedges (as given to build)")
        parser.add_argument("--out", help="Output TSV (default: stdout)")
        parser.add_argument("--round", type=int, help="Round displayed estimates to this many decimals")

    def run(self, **options):
        kind = options["type"]
        oracle, h = self.load_oracle_with_input(options, need_input=kind != "hh")
        s = options["s"]
        digits = options["round"]

        with self.output(options["out"]) as out:
            for src, dst in read_pairs(options["pairs"]):
                source, target = resolve_pair(oracle, h, kind, src, dst)
                match kind:
                    case "vv":
                        d = estimate_v2v(oracle, h, source, target, s)
                    case "ve":
                        d = estimate_v2e(oracle, h, source, target, s)
                    case _:
                        d = estimate_h2h(oracle, source, target, s)
                out.write(
                    f"{src}\t{dst}\t{s}\t{format_distance(d.lb)}\t{format_distance(d.ub)}\t"
                    f"{format_distance(d.estimate, digits)}\t{d.status}\n"
                )
