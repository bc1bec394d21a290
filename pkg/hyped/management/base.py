"""
Shared plumbing for the hyped management commands.

Subclasses implement ``run(**options)`` instead of ``handle``. Errors are
mapped to exit codes: configuration problems exit with 2 (usage), failures
while reading inputs or computing exit with 1 (runtime).
"""

import logging
import math
import time
from contextlib import contextmanager

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from hyped.config import get_oracle_defaults
from hyped.exceptions import HypedError, InvalidQueryError
from hyped.hypercore import Hypergraph, load_hypergraph
from hyped.landmarks import AssignStrategy, AssignmentConfig, SelectStrategy
from hyped.oracle import Oracle
from hyped.storage import load_oracle

logger = logging.getLogger("hyped.commands")

USAGE_ERROR = 2
RUNTIME_ERROR = 1


def format_distance(value: float, digits: int | None = None) -> str:
    if value == math.inf:
        return "inf"
    if digits is not None:
        value = round(value, digits)
        if digits == 0:
            return str(int(value))
    if float(value).is_integer():
        return str(int(value))
    return f"{value:.6f}".rstrip("0")


class HypedCommand(BaseCommand):
    def handle(self, *args, **options):
        shown = {
            key: value
            for key, value in sorted(options.items())
            if key not in ("verbosity", "settings", "pythonpath", "traceback", "no_color", "force_color", "skip_checks")
        }
        logger.info("%s %s", self.__module__.rsplit(".", 1)[-1], shown)
        started = time.perf_counter()
        try:
            self.run(**options)
        except ValidationError as exc:
            raise CommandError(_describe(exc), returncode=USAGE_ERROR) from exc
        except (HypedError, OSError) as exc:
            raise CommandError(str(exc), returncode=RUNTIME_ERROR) from exc
        logger.info("Finished in %.3fs", time.perf_counter() - started)

    def run(self, **options):
        raise NotImplementedError("subclasses of HypedCommand must provide a run() method")

    def usage_error(self, message: str) -> CommandError:
        return CommandError(message, returncode=USAGE_ERROR)

    def load_input(self, path, *, dedupe: bool = False) -> Hypergraph:
        if not path:
            raise self.usage_error("--input is required")
        return load_hypergraph(path, dedupe=dedupe)

    @contextmanager
    def output(self, path):
        """Write to *path* when given, otherwise to stdout."""
        if path:
            with open(path, "w", encoding="utf-8") as fh:
                yield fh
        else:
            yield self.stdout

    def load_oracle_with_input(self, options, *, need_input: bool) -> tuple[Oracle, Hypergraph | None]:
        if need_input and not options.get("input"):
            raise self.usage_error("--input is required for vertex queries")
        oracle = load_oracle(options["oracle"])
        h = None
        if options.get("input"):
            h = load_hypergraph(options["input"], dedupe=options.get("dedupe", False))
            if h.n_edges != oracle.n_edges:
                raise InvalidQueryError(
                    f"{options['input']} has {h.n_edges} hyperedges but the oracle was built on {oracle.n_edges}"
                )
        return oracle, h

    # -- oracle flags -------------------------------------------------------

    def add_oracle_arguments(self, parser):
        budget = parser.add_mutually_exclusive_group()
        budget.add_argument("--budget-l", type=float, help="Budget as stored pairs per hyperedge (Q = l * |E|)")
        budget.add_argument("--budget-q", type=int, help="Budget as a total number of stored pairs")
        parser.add_argument("--alpha", type=float, help="Weight of the component size")
        parser.add_argument("--beta", type=float, help="Weight of the level s")
        parser.add_argument("--assign", choices=AssignStrategy.values, help="Assignment strategy")
        parser.add_argument("--select", choices=SelectStrategy.values, help="Selection strategy")
        parser.add_argument("--seed", type=int, help="RNG seed")
        parser.add_argument("--pair-fraction", type=float, help="Share of members sampled for path pools")
        parser.add_argument("--s-max", type=int, help="Largest s to index")
        parser.add_argument("--d-min", type=int, help="Components up to this size use the average distance")
        parser.add_argument("--threads", type=int, help="Worker threads for BFS floods")

    def oracle_config(self, options) -> tuple[AssignmentConfig, int]:
        cfg = AssignmentConfig.from_defaults(
            budget_l=options.get("budget_l"),
            budget_q=options.get("budget_q"),
            alpha=options.get("alpha"),
            beta=options.get("beta"),
            strategy=options.get("assign"),
            selection=options.get("select"),
            seed=options.get("seed"),
            pair_sample_fraction=options.get("pair_fraction"),
            d_min=options.get("d_min"),
            threads=options.get("threads"),
        )
        s_max = options.get("s_max")
        if s_max is None:
            s_max = int(get_oracle_defaults()["s_max"])
        if s_max < 1:
            raise ValidationError({"s_max": "s_max must be positive"})
        cfg.clean()
        return cfg, s_max


def resolve_pair(o: Oracle, h: Hypergraph | None, kind: str, src: str, dst: str) -> tuple[int, int]:
    """Dense ids for a ``src``/``dst`` token pair of query *kind*."""
    source = h.vertex_id(src) if kind in ("vv", "ve") else _edge(o, h, src)
    target = h.vertex_id(dst) if kind == "vv" else _edge(o, h, dst)
    return source, target


def _edge(o: Oracle, h: Hypergraph | None, token: str) -> int:
    if h is not None:
        return h.edge_id(token)
    try:
        e = int(token)
    except ValueError:
        raise InvalidQueryError(f"hyperedge token {token!r} is not an id") from None
    o.check_edge(e)
    return e


def _describe(exc: ValidationError) -> str:
    if hasattr(exc, "error_dict"):
        return "; ".join(f"{key}: {' '.join(messages)}" for key, messages in exc.message_dict.items())
    return " ".join(exc.messages)
