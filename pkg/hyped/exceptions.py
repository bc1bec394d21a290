"""Errors raised by the hyped library.

Configuration problems are reported with Django's ``ValidationError``;
everything else derives from ``HypedError`` so the management commands can
tell runtime failures apart from usage mistakes.
"""


class HypedError(Exception):
    """Base class for every runtime error raised by hyped."""


class HypergraphParseError(HypedError, ValueError):
    def __init__(self, message: str, *, line: int | None = None, path=None):
        self.line = line
        self.path = path
        where = f"line {line}" if line is not None else "input"
        if path is not None:
            where = f"{path}, {where}"
        super().__init__(f"{where}: {message}")


class InvalidQueryError(HypedError, ValueError):
    """A query references an unknown id or an unsupported ``s``."""


class UnsupportedSizeError(HypedError, ValueError):
    """Average topology distances are only enumerated up to 5 nodes."""


class SaturatedComponentError(HypedError, RuntimeError):
    """Every member of the component is already a landmark."""


class UndefinedCentralityError(HypedError, ValueError):
    """s-closeness is undefined for singleton (or missing) components."""


class RankingUniverseError(HypedError, ValueError):
    """Two tied rankings do not rank the same elements."""


class OracleFormatError(HypedError, ValueError):
    def __init__(self, message: str, *, section: str, line: int | None = None):
        self.section = section
        self.line = line
        where = f"[{section}]" if line is None else f"[{section}] line {line}"
        super().__init__(f"{where} {message}")


class LineGraphTooLargeError(HypedError, RuntimeError):
    """The line graph would exceed the configured edge budget."""
