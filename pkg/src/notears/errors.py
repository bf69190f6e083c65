from __future__ import annotations

from typing import Optional

from .syntax import Span


class CheckError(Exception):
    """A user-facing error with a stable ``code`` and an optional source span.

    ``expected``/``actual`` carry pretty-printed types for mismatch errors.
    """

    exit_code = 1

    def __init__(
        self,
        code: str,
        message: str,
        span: Optional[Span] = None,
        *,
        expected: Optional[str] = None,
        actual: Optional[str] = None,
    ):
        super().__init__(message)
        self.code = code
        self.message = message
        self.span = span
        self.expected = expected
        self.actual = actual

    def with_span(self, span: Optional[Span]) -> "CheckError":
        if self.span is None:
            self.span = span
        return self

    def render(self) -> str:
        return Diagnostic.from_error(self).render()


class LoadError(CheckError):
    """Usage/IO/import-graph problems (missing files, cycles)."""

    exit_code = 2


class FuelExhausted(CheckError):
    def __init__(self, span: Optional[Span] = None):
        super().__init__("FuelExhausted", "evaluation fuel exhausted", span)


class Diagnostic:
    __slots__ = ("severity", "span", "code", "message", "expected", "actual")

    def __init__(self, span, code, message, expected=None, actual=None):
        self.severity = "error"
        self.span = span
        self.code = code
        self.message = message
        self.expected = expected
        self.actual = actual

    @classmethod
    def from_error(cls, err: CheckError) -> "Diagnostic":
        return cls(err.span, err.code, err.message, err.expected, err.actual)

    def sort_key(self):
        s = self.span
        return (s.file, s.line, s.col) if s else ("", 0, 0)

    def render(self) -> str:
        where = f"{self.span.file}:{self.span.line}:{self.span.col}" if self.span else "<unknown>:1:1"
        lines = [f"{where}: {self.severity}: {self.code}: {self.message}"]
        if self.expected is not None:
            lines.append(f"  expected: {self.expected}")
        if self.actual is not None:
            lines.append(f"  actual:   {self.actual}")
        return "\n".join(lines)
