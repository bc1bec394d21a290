"""
seed_hypergraph: write a synthetic hypergraph (and optional labels).

Usage:
    python manage.py seed_hypergraph --out synth.txt                       # power-law, 1 000 hyperedges
    python manage.py seed_hypergraph --out small.txt --model uniform --edges 200 --vertices 100
    python manage.py seed_hypergraph --out synth.txt --labels labels.tsv --label-kind vertex
"""

from hyped.hypercore import write_hypergraph
from hyped.management.base import HypedCommand
from hyped.synthetic import power_law_hypergraph, random_hypergraph, random_labels


class Command(HypedCommand):
    help = "Generate a seeded synthetic hypergraph"

    def add_arguments(self, parser):
        parser.add_argument("--out", required=True, help="Hypergraph file to write")
        parser.add_argument("--model", choices=["power-law", "uniform"], default="power-law")
        parser.add_argument("--vertices", type=int, default=400, help="Number of vertices (default 400)")
        parser.add_argument("--edges", type=int, default=1000, help="Number of hyperedges (default 1000)")
        parser.add_argument("--min-size", type=int, default=2, help="Smallest hyperedge")
        parser.add_argument("--max-size", type=int, help="Largest hyperedge (default 8 uniform, 30 power-law)")
        parser.add_argument("--exponent", type=float, default=2.5, help="Power-law size exponent")
        parser.add_argument("--seed", type=int, default=0, help="RNG seed")
        parser.add_argument("--labels", help="Also write random labels here")
        parser.add_argument("--label-kind", choices=["vertex", "hyperedge"], default="hyperedge")
        parser.add_argument("--n-labels", type=int, default=5, help="Distinct labels (default 5)")

    def run(self, **options):
        if options["vertices"] < 2 or options["edges"] < 1:
            raise self.usage_error("need at least 2 vertices and 1 hyperedge")
        try:
            if options["model"] == "uniform":
                h = random_hypergraph(
                    options["vertices"],
                    options["edges"],
                    min_size=options["min_size"],
                    max_size=options["max_size"] or 8,
                    seed=options["seed"],
                )
            else:
                h = power_law_hypergraph(
                    options["vertices"],
                    options["edges"],
                    exponent=options["exponent"],
                    min_size=options["min_size"],
                    max_size=options["max_size"] or 30,
                    seed=options["seed"],
                )
        except ValueError as exc:
            raise self.usage_error(str(exc)) from exc
        write_hypergraph(h, options["out"])

        if options["labels"]:
            if options["label_kind"] == "vertex":
                labels = random_labels(range(h.n_vertices), options["n_labels"], seed=options["seed"])
                tokens = h.vertex_tokens
            else:
                labels = random_labels(range(h.n_edges), options["n_labels"], seed=options["seed"])
                tokens = [str(e) for e in range(h.n_edges)]
            with open(options["labels"], "w", encoding="utf-8") as fh:
                for x, label in labels.items():
                    fh.write(f"{tokens[x]}\t{label}\n")

        self.stdout.write("")
        self.stdout.write(
            self.style.SUCCESS(
                f"  Done. {h.n_edges:,} hyperedges over {h.n_vertices:,} vertices written to {options['out']}."
            )
        )
        self.stdout.write("")
