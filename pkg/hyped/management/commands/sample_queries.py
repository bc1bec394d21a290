"""
sample_queries: stratified query batches (``sample-queries`` on the hyped CLI).

Usage:
    python manage.py sample_queries --input data.txt --per-s 100 --out queries.tsv
    python manage.py sample_queries --input data.txt --per-s 50 --cross-frac 0.2 --kind vv --seed 3
"""

from hyped.config import get_oracle_defaults
from hyped.connectivity import find_connected_components
from hyped.evaluation import QUERY_KINDS, sample_queries, write_queries
from hyped.management.base import HypedCommand


class Command(HypedCommand):
    help = "Sample query pairs stratified by s"

    def add_arguments(self, parser):
        parser.add_argument("--input", required=True, help="Hypergraph file")
        parser.add_argument("--out", required=True, help="Query TSV to write")
        parser.add_argument("--per-s", type=int, default=100, help="Queries per level (default 100)")
        parser.add_argument("--cross-frac", type=float, default=0.1, help="Share of cross-component pairs")
        parser.add_argument("--kind", choices=QUERY_KINDS, default="hh", help="Query kind")
        parser.add_argument("--seed", type=int, help="RNG seed (default from settings)")
        parser.add_argument("--s-max", type=int, help="Largest s (default from settings)")
        parser.add_argument("--dedupe", action="store_true", help="Collapse duplicate hyperedges")

    def run(self, **options):
        defaults = get_oracle_defaults()
        s_max = options["s_max"]
        if s_max is None:
            s_max = int(defaults["s_max"])
        seed = options["seed"] if options["seed"] is not None else int(defaults["seed"])
        if s_max < 1 or options["per_s"] < 0:
            raise self.usage_error("--s-max must be positive and --per-s non-negative")
        if not 0 <= options["cross_frac"] <= 1:
            raise self.usage_error("--cross-frac must be in [0, 1]")

        h = self.load_input(options["input"], dedupe=options["dedupe"])
        components, _ = find_connected_components(h, s_max)
        batch = sample_queries(
            h, components, options["per_s"], options["cross_frac"], seed, kind=options["kind"]
        )
        write_queries(batch, h, options["out"])

        empty = batch.provenance["no_same_component"]
        if empty:
            self.stdout.write(self.style.WARNING(f"No same-component pair exists at s={empty}"))
        self.stdout.write(self.style.SUCCESS(f"{len(batch)} queries written to {options['out']}"))
