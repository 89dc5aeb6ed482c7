"""Exception hierarchy shared across the package."""

from __future__ import annotations


class PatternForgeError(Exception):
    """Base class for every error raised by patternforge."""


class DuplicateId(PatternForgeError):
    pass


class ArityMismatch(PatternForgeError, ValueError):
    """A record or atom has the wrong number of arguments for its type."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        if line is not None:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


class FrozenStore(PatternForgeError):
    pass


class ParseError(PatternForgeError, ValueError):
    """Malformed pattern or fact text, annotated with a 1-based position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class UnknownTypeName(ParseError):
    pass


class UnknownPredicate(ParseError):
    pass


class InvalidPattern(PatternForgeError, ValueError):
    def __init__(self, report):
        super().__init__("invalid pattern:\n" + "\n".join(str(f) for f in report.findings))
        self.report = report


class SizeGuard(PatternForgeError):
    """The brute-force oracle refused a graph that is too large for it."""


class ZeroDuration(PatternForgeError, ValueError):
    pass


class ZeroInferences(PatternForgeError, ValueError):
    pass


class ZeroEdges(PatternForgeError, ValueError):
    pass


class ConfigTooSmall(PatternForgeError, ValueError):
    pass


class UnknownClause(PatternForgeError, IndexError):
    pass
