"""
The ``hyped`` console script.

``hyped <subcommand> [flags]`` runs the matching management command without
going through ``manage.py``; dashed names map onto the command modules
(``sample-queries`` -> ``sample_queries``).
"""

import os
import sys

SUBCOMMANDS = (
    "components",
    "linegraph",
    "build",
    "query",
    "profile",
    "topk",
    "sample-queries",
    "eval",
    "centrality",
    "seed-hypergraph",
)


def _usage() -> str:
    return "usage: hyped {" + ",".join(SUBCOMMANDS) + "} [flags]\n"


def main(argv=None) -> int:
    """Run one subcommand and return its exit code (2 usage, 1 runtime)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        sys.stdout.write(_usage())
        return 0 if argv else 2
    if argv[0] not in SUBCOMMANDS:
        sys.stderr.write(f"hyped: unknown subcommand {argv[0]!r}\n{_usage()}")
        return 2

    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "core.settings")
    import django
    from django.core.management import load_command_class

    django.setup()
    name = argv[0].replace("-", "_")
    command = load_command_class("hyped", name)
    try:
        command.run_from_argv(["hyped", name, *argv[1:]])
    except SystemExit as exc:
        if isinstance(exc.code, int):
            return exc.code
        return 0 if exc.code is None else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
