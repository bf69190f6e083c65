from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import CheckError
from .syntax import Span

# primitive term formers; they lex as KEYWORD tokens
PRIMITIVES = {
    "Id": 3,
    "refl": 1,
    "J": 6,
    "Nat": 0,
    "zero": 0,
    "suc": 1,
    "natElim": 4,
    "Unit": 0,
    "star": 0,
}
DECL_KEYWORDS = {"def": "DEF", "axiom": "AXIOM", "import": "IMPORT"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: Span

    def __repr__(self) -> str:
        if self.kind in ("IDENT", "KEYWORD", "NUMBER", "PROJ"):
            return f"{self.kind} {self.text!r}"
        return self.kind


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<ARROW>->)
  | (?P<DEFEQ>:=)
  | (?P<COLON>:)
  | (?P<PROJ>\.[0-9]+)
  | (?P<DOT>\.)
  | (?P<LAMBDA>\\)
  | (?P<LPAREN>\()
  | (?P<RPAREN>\))
  | (?P<COMMA>,)
  | (?P<STAR>\*)
  | (?P<NUMBER>[0-9]+)
  | (?P<IDENT>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


def lex(source: str, file: str = "<input>") -> list[Token]:
    """Split ``source`` into tokens; the list always ends with an EOF token.

    Comments run from ``--`` to the end of the line.
    """
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            span = Span(file, line, col, line, col + 1)
            raise CheckError("IllegalCharacter", f"illegal character {source[pos]!r}", span)
        kind, text = m.lastgroup, m.group()
        end = m.end()
        if kind not in ("ws", "comment"):
            span = Span(file, line, col, line, col + len(text))
            if kind == "PROJ" and text not in (".1", ".2"):
                raise CheckError("IllegalCharacter", f"bad projection {text!r}", span)
            if kind == "PROJ":
                text = text[1:]
            elif kind == "IDENT":
                if text == "U":
                    kind = "UNIVERSE"
                elif text in DECL_KEYWORDS:
                    kind = DECL_KEYWORDS[text]
                elif text in PRIMITIVES:
                    kind = "KEYWORD"
            tokens.append(Token(kind, text, span))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = end
    col = pos - line_start + 1
    tokens.append(Token("EOF", "", Span(file, line, col, line, col)))
    return tokens
