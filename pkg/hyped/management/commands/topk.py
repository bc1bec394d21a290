"""
topk: same-label nearest neighbours by estimated (or exact) s-distance.

Usage:
    python manage.py topk --oracle data.oracle --input data.txt --labels labels.tsv --k 5 --s 2
    python manage.py topk --oracle data.oracle --input data.txt --labels labels.tsv --kind vertex --k 3 --s 1 --exact

Labels are ``token TAB label``. Output rows are
``query TAB rank TAB neighbour TAB distance``.
"""

from hyped.hypercore import read_labels, resolve_edge_labels, resolve_vertex_labels
from hyped.linegraph import ExactOracle
from hyped.management.base import HypedCommand, format_distance
from hyped.oracle import top_k_neighbors


class Command(HypedCommand):
    help = "Recommend the k closest entities sharing the query's label"

    def add_arguments(self, parser):
        parser.add_argument("--oracle", required=True, help="Oracle file")
        parser.add_argument("--input", required=True, help="Hypergraph file the oracle was built on")
        parser.add_argument("--dedupe", action="store_true", help="Collapse duplicate hyperedges (as given to build)")
        parser.add_argument("--labels", required=True, help="TSV of token/label pairs")
        parser.add_argument("--kind", choices=["hyperedge", "vertex"], default="hyperedge", help="Entity kind")
        parser.add_argument("--k", type=int, required=True, help="Neighbours per query")
        parser.add_argument("--s", type=int, required=True, help="Overlap threshold s")
        parser.add_argument("--query", action="append", help="Query token (repeatable; default every labelled entity)")
        parser.add_argument("--exact", action="store_true", help="Rank by BFS ground truth instead")
        parser.add_argument("--out", help="Output TSV (default: stdout)")

    def run(self, **options):
        if options["k"] < 1:
            raise self.usage_error("--k must be positive")
        oracle, h = self.load_oracle_with_input(options, need_input=True)
        kind = options["kind"]
        raw = read_labels(options["labels"])
        if kind == "vertex":
            labels = resolve_vertex_labels(h, raw)
            to_id, to_token = h.vertex_id, lambda v: h.vertex_tokens[v]
        else:
            labels = resolve_edge_labels(h, raw)
            to_id, to_token = h.edge_id, str

        queries = [to_id(token) for token in options["query"]] if options["query"] else sorted(labels)
        exact = ExactOracle(h) if options["exact"] else None

        with self.output(options["out"]) as out:
            for query in queries:
                ranked = top_k_neighbors(
                    oracle, h, query, kind, options["s"], options["k"], labels, exact=exact
                )
                for rank, (neighbour, distance) in enumerate(ranked, start=1):
                    out.write(f"{to_token(query)}\t{rank}\t{to_token(neighbour)}\t{format_distance(distance)}\n")
