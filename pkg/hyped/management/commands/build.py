"""
build: build and save a distance oracle.

Usage:
    python manage.py build --input data.txt --out data.oracle
    python manage.py build --input data.txt --out data.oracle --budget-l 30 --select degree --seed 7
    python manage.py build --input data.txt --out data.oracle --assign rankagg --id-map data.ids
"""

import logging

from hyped.hypercore import save_id_map
from hyped.management.base import HypedCommand
from hyped.oracle import build_oracle
from hyped.storage import save_oracle

logger = logging.getLogger("hyped.commands")


class Command(HypedCommand):
    help = "Build a landmark distance oracle and write it to disk"

    def add_arguments(self, parser):
        parser.add_argument("--input", required=True, help="Hypergraph file")
        parser.add_argument("--out", required=True, help="Oracle file to write")
        parser.add_argument("--id-map", help="Also write the token to dense-id map here")
        parser.add_argument("--dedupe", action="store_true", help="Collapse duplicate hyperedges")
        self.add_oracle_arguments(parser)

    def run(self, **options):
        cfg, s_max = self.oracle_config(options)
        h = self.load_input(options["input"], dedupe=options["dedupe"])
        oracle = build_oracle(h, cfg, s_max)
        save_oracle(oracle, options["out"])
        if options["id_map"]:
            save_id_map(h, options["id_map"])

        report = oracle.report
        logger.info("OFF %.3fs", report.off_seconds)
        per_level = ", ".join(f"s={s}: {n}" for s, n in report.landmarks_per_level.items()) or "none"
        self.stdout.write(
            self.style.SUCCESS(
                f"Oracle written to {options['out']} in {report.off_seconds:.3f}s "
                f"({report.stored_pairs:,} stored pairs; landmarks {per_level})"
            )
        )
