"""
profile: refined distance profiles over every feasible s.

Usage:
    python manage.py profile --oracle data.oracle --pairs pairs.tsv
    python manage.py profile --oracle data.oracle --input data.txt --type vv --pairs pairs.tsv
"""

from hyped.evaluation import read_pairs
from hyped.management.base import HypedCommand, format_distance, resolve_pair
from hyped.oracle import profile_h2h, profile_v2e, profile_v2v


class Command(HypedCommand):
    help = "Estimate distance profiles (one row per pair and s)"

    def add_arguments(self, parser):
        parser.add_argument("--oracle", required=True, help="Oracle file")
        parser.add_argument("--type", choices=["hh", "vv", "ve"], default="hh", help="Query kind")
        parser.add_argument("--pairs", required=True, help="TSV of src/dst tokens")
        parser.add_argument("--input", help="Hypergraph file (required for vv and ve)")
        parser.add_argument("--dedupe", action="store_true", help="Collapse duplicate hyperedges (as given to build)")
        parser.add_argument("--out", help="Output TSV (default: stdout)")
        parser.add_argument("--round", type=int, help="Round displayed estimates to this many decimals")

    def run(self, **options):
        kind = options["type"]
        oracle, h = self.load_oracle_with_input(options, need_input=kind != "hh")
        digits = options["round"]

        with self.output(options["out"]) as out:
            for src, dst in read_pairs(options["pairs"]):
                source, target = resolve_pair(oracle, h, kind, src, dst)
                if kind == "vv":
                    profile = profile_v2v(oracle, h, source, target)
                elif kind == "ve":
                    profile = profile_v2e(oracle, h, source, target)
                else:
                    profile = profile_h2h(oracle, source, target)
                for d in profile:
                    out.write(
                        f"{src}\t{dst}\t{d.s}\t{format_distance(d.lb)}\t{format_distance(d.ub)}\t"
                        f"{format_distance(d.estimate, digits)}\t{d.status}\n"
                    )
