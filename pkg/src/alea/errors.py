"""Exception hierarchy shared by all phases."""

from __future__ import annotations


class AleaError(Exception):
    """Base class for every error reported to users."""


class SourceError(AleaError):
    """An error attached to a position in program text."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)


class LexError(SourceError):
    pass


class ParseError(SourceError):
    def __init__(self, message, line=None, col=None, expected=()):
        self.expected = tuple(expected)
        if self.expected:
            message = f"{message} (expected {', '.join(self.expected)})"
        super().__init__(message, line, col)


class DesugarError(SourceError):
    pass


class AleaTypeError(AleaError):
    """A violated typing rule; ``expr`` is the offending subexpression."""

    def __init__(self, kind: str, message: str, expr=None):
        self.kind = kind
        self.message = message
        self.expr = expr
        super().__init__(f"{kind}: {message}")


class EvalError(AleaError):
    """Evaluation failure, e.g. an undefined distribution."""


class InternalError(AleaError):
    """Broken invariant; indicates a bug in the implementation rather than the program."""
