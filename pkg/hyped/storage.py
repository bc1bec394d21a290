"""
Versioned, line-oriented oracle files.

::

    #HYPED-ORACLE v1
    meta smax=<int> dmin=<int> seed=<int>
    avgd <size> <value>
    comp <s> <edge-id> <comp-id>
    csize <s> <comp-id> <size>
    label <s> <edge-id> <landmark-id>:<dist> [...]
    end

Sections appear in that order and are sorted inside, so saving the same
oracle twice yields identical bytes. The ``end`` trailer marks a complete
file. The build report is not stored.
"""

import logging
import re
from collections import defaultdict
from pathlib import Path

from .exceptions import OracleFormatError
from .oracle import Oracle

logger = logging.getLogger(__name__)

HEADER = "#HYPED-ORACLE v1"
_META = re.compile(r"^meta smax=(\d+) dmin=(\d+) seed=(-?\d+)$")


def save_oracle(o: Oracle, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{HEADER}\n")
        fh.write(f"meta smax={o.s_max} dmin={o.d_min} seed={o.seed}\n")
        for size, value in sorted(o.avg_dist.items()):
            fh.write(f"avgd {size} {value:.6f}\n")
        for s, comp_of in enumerate(o.comp_of, start=1):
            for e in sorted(comp_of):
                fh.write(f"comp {s} {e} {comp_of[e]}\n")
        for s, sizes in enumerate(o.comp_size, start=1):
            for cid, size in enumerate(sizes):
                fh.write(f"csize {s} {cid} {size}\n")
        for s, level in enumerate(o.labels, start=1):
            for e in sorted(level):
                entries = " ".join(f"{l}:{d}" for l, d in sorted(level[e].items()))
                fh.write(f"label {s} {e} {entries}\n")
        fh.write("end\n")
    logger.info("Saved oracle to %s", path)


def _ints(parts: list[str], count: int, section: str, lineno: int) -> list[int]:
    if len(parts) != count:
        raise OracleFormatError(f"expected {count} fields, got {len(parts)}", section=section, line=lineno)
    try:
        return [int(part) for part in parts]
    except ValueError:
        raise OracleFormatError("expected integer fields", section=section, line=lineno) from None


def _check_level(s: int, s_max: int, section: str, lineno: int) -> None:
    if not 1 <= s <= s_max:
        raise OracleFormatError(f"level {s} outside [1, {s_max}]", section=section, line=lineno)


def load_oracle(path) -> Oracle:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()

    if not lines or lines[0] != HEADER:
        found = lines[0] if lines else "an empty file"
        raise OracleFormatError(f"expected {HEADER!r}, found {found!r}", section="header", line=1)
    if len(lines) < 2 or not (meta := _META.match(lines[1])):
        raise OracleFormatError("missing or malformed meta line", section="meta", line=2)
    s_max, d_min, seed = (int(g) for g in meta.groups())
    if s_max < 1:
        raise OracleFormatError("smax must be positive", section="meta", line=2)

    avg_dist: dict[int, float] = {}
    comp_of: list[dict[int, int]] = [{} for _ in range(s_max)]
    sizes: list[dict[int, int]] = [{} for _ in range(s_max)]
    labels: list[dict[int, dict[int, int]]] = [{} for _ in range(s_max)]
    complete = False

    for lineno, line in enumerate(lines[2:], start=3):
        if complete:
            raise OracleFormatError("content after the end marker", section="end", line=lineno)
        keyword, _, rest = line.partition(" ")
        parts = rest.split()
        match keyword:
            case "avgd":
                if len(parts) != 2:
                    raise OracleFormatError("expected <size> <value>", section="avgd", line=lineno)
                try:
                    avg_dist[int(parts[0])] = float(parts[1])
                except ValueError:
                    raise OracleFormatError("malformed average distance", section="avgd", line=lineno) from None
            case "comp":
                s, e, cid = _ints(parts, 3, "comp", lineno)
                _check_level(s, s_max, "comp", lineno)
                comp_of[s - 1][e] = cid
            case "csize":
                s, cid, size = _ints(parts, 3, "csize", lineno)
                _check_level(s, s_max, "csize", lineno)
                sizes[s - 1][cid] = size
            case "label":
                if len(parts) < 3:
                    raise OracleFormatError("a label needs at least one entry", section="label", line=lineno)
                s, e = _ints(parts[:2], 2, "label", lineno)
                _check_level(s, s_max, "label", lineno)
                entries: dict[int, int] = {}
                for entry in parts[2:]:
                    landmark, sep, dist = entry.partition(":")
                    if not sep:
                        raise OracleFormatError(f"malformed entry {entry!r}", section="label", line=lineno)
                    landmark_id, distance = _ints([landmark, dist], 2, "label", lineno)
                    entries[landmark_id] = distance
                labels[s - 1][e] = entries
            case "end":
                complete = True
            case _:
                raise OracleFormatError(f"unknown record {keyword!r}", section="body", line=lineno)

    if not complete:
        raise OracleFormatError("file is truncated", section="end")
    if missing := sorted(set(range(2, d_min + 1)) - set(avg_dist)):
        raise OracleFormatError(f"no average distance for size(s) {missing} (dmin={d_min})", section="avgd")

    comp_size: list[tuple[int, ...]] = []
    for s in range(1, s_max + 1):
        level_sizes = sizes[s - 1]
        if sorted(level_sizes) != list(range(len(level_sizes))):
            raise OracleFormatError(f"component ids at s={s} are not contiguous", section="csize")
        members = defaultdict(int)
        for cid in comp_of[s - 1].values():
            members[cid] += 1
        if dict(members) != {cid: size for cid, size in level_sizes.items() if size}:
            raise OracleFormatError(f"component sizes at s={s} disagree with comp records", section="csize")
        comp_size.append(tuple(level_sizes[cid] for cid in range(len(level_sizes))))

    oracle = Oracle(
        s_max=s_max,
        d_min=d_min,
        seed=seed,
        avg_dist=dict(sorted(avg_dist.items())),
        comp_of=tuple(comp_of),
        comp_size=tuple(comp_size),
        labels=tuple(labels),
    )
    logger.info("Loaded oracle from %s: |E|=%d s_max=%d", path.name, oracle.n_edges, s_max)
    return oracle
