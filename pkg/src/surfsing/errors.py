"""Exception types shared across the package.

Every domain error carries a short machine readable ``kind`` so the CLI can
emit structured JSON on stderr.
"""

from __future__ import annotations


class DomainError(ValueError):
    """Base class for errors caused by invalid mathematical input."""

    kind = "domain_error"

    def __init__(self, message: str, kind: str | None = None, **details):
        super().__init__(message)
        if kind is not None:
            self.kind = kind
        self.details = details

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "message": str(self)}
        out.update(self.details)
        return out


class GraphParseError(DomainError):
    kind = "syntax_error"

    def __init__(self, message: str, line: int, column: int, kind: str | None = None):
        super().__init__(f"line {line}, column {column}: {message}", kind=kind, line=line, column=column)
        self.line = line
        self.column = column
