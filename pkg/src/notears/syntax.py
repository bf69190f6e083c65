"""Core (nameless) term language.

Variables are de Bruijn indices: ``Var(0)`` is the innermost binder.  Binder
names and source spans are kept only as hints for printing and diagnostics;
they are excluded from equality, so alpha-equivalent terms compare equal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


class InternalError(Exception):
    """An invariant of the kernel was violated (a bug, never user error)."""


@dataclass(frozen=True)
class Span:
    file: str
    line: int
    col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"

    def to(self, other: Optional["Span"]) -> "Span":
        if other is None:
            return self
        return Span(self.file, self.line, self.col, other.end_line, other.end_col)


def _hint():
    return field(default="_", compare=False)


def _span():
    return field(default=None, compare=False, repr=False, kw_only=True)


class Term:
    """Base class of core terms."""

    __slots__ = ()

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Var(Term):
    index: int
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Universe(Term):
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Pi(Term):
    name: str = _hint()
    domain: Term = None
    codomain: Term = None
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Lam(Term):
    name: str = _hint()
    body: Term = None
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Sigma(Term):
    name: str = _hint()
    first: Term = None
    second: Term = None
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Fst(Term):
    pair: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Snd(Term):
    pair: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Unit(Term):
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Star(Term):
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Nat(Term):
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Zero(Term):
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Suc(Term):
    pred: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class NatElim(Term):
    motive: Term
    base: Term
    step: Term
    scrutinee: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Id(Term):
    type: Term
    lhs: Term
    rhs: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Refl(Term):
    point: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class J(Term):
    type: Term
    base: Term
    motive: Term
    d_refl: Term
    other: Term
    path: Term
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Const(Term):
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True)
class Ann(Term):
    term: Term
    type: Term
    span: Optional[Span] = _span()


BINDERS = (Pi, Lam, Sigma)


@dataclass(frozen=True)
class Definition:
    type: Term
    body: Term


@dataclass(frozen=True)
class Axiom:
    type: Term


@dataclass(frozen=True)
class Declaration:
    name: str
    kind: Union[Definition, Axiom]
    span: Optional[Span] = field(default=None, compare=False)

    @property
    def type(self) -> Term:
        return self.kind.type

    @property
    def is_axiom(self) -> bool:
        return isinstance(self.kind, Axiom)


# --------------------------------------------------------------------------
# traversal helpers


def children(t: Term) -> Iterator[tuple[Term, int]]:
    """Yield ``(subterm, binders_crossed)`` pairs for the immediate subterms."""
    match t:
        case Pi(domain=a, codomain=b) | Sigma(first=a, second=b):
            yield a, 0
            yield b, 1
        case Lam(body=b):
            yield b, 1
        case App(f, a) | Pair(f, a) | Ann(f, a):
            yield f, 0
            yield a, 0
        case Fst(p) | Snd(p) | Suc(p) | Refl(p):
            yield p, 0
        case NatElim(m, z, s, n):
            yield from ((x, 0) for x in (m, z, s, n))
        case Id(a, x, y):
            yield from ((x_, 0) for x_ in (a, x, y))
        case J(a, x, c, d, y, p):
            yield from ((x_, 0) for x_ in (a, x, c, d, y, p))
        case Var() | Universe() | Unit() | Star() | Nat() | Zero() | Const():
            return
        case _:
            raise InternalError(f"not a term: {t!r}")


def map_term(t: Term, fn, depth: int = 0) -> Term:
    """Rebuild ``t`` applying ``fn(var, depth)`` to every variable occurrence."""
    match t:
        case Var():
            return fn(t, depth)
        case Universe() | Unit() | Star() | Nat() | Zero() | Const():
            return t
        case Pi(n, a, b):
            return Pi(n, map_term(a, fn, depth), map_term(b, fn, depth + 1), span=t.span)
        case Sigma(n, a, b):
            return Sigma(n, map_term(a, fn, depth), map_term(b, fn, depth + 1), span=t.span)
        case Lam(n, b):
            return Lam(n, map_term(b, fn, depth + 1), span=t.span)
        case _:
            parts = [map_term(c, fn, depth) for c, _ in children(t)]
            return type(t)(*parts, span=t.span)


def shift(t: Term, amount: int, cutoff: int = 0) -> Term:
    """Add ``amount`` to every free index ``>= cutoff``."""

    def go(v: Var, depth: int) -> Term:
        if v.index < cutoff + depth:
            return v
        new = v.index + amount
        if new < 0:
            raise InternalError(f"index underflow shifting {v.index} by {amount}")
        return Var(new, span=v.span)

    return t if amount == 0 else map_term(t, go)


def subst_top(body: Term, arg: Term) -> Term:
    """Instantiate index 0 of ``body`` with ``arg`` (both in the outer scope)."""

    def go(v: Var, depth: int) -> Term:
        if v.index == depth:
            return shift(arg, depth)
        if v.index > depth:
            return Var(v.index - 1, span=v.span)
        return v

    return map_term(body, go)


@dataclass(frozen=True)
class Dangling:
    index: int
    depth: int
    span: Optional[Span] = None

    def __str__(self) -> str:
        return f"dangling index {self.index} under {self.depth} binder(s)"


def scope_audit(t: Term, context_length: int) -> list[Dangling]:
    """Return every variable that escapes a context of the given length.

    An empty list means the term is well scoped.
    """
    bad: list[Dangling] = []

    def walk(u: Term, depth: int) -> None:
        if isinstance(u, Var):
            if u.index >= depth + context_length:
                bad.append(Dangling(u.index, depth, u.span))
            return
        for c, k in children(u):
            walk(c, depth + k)

    walk(t, 0)
    return bad


def free_indices(t: Term) -> set[int]:
    out: set[int] = set()

    def walk(u: Term, depth: int) -> None:
        if isinstance(u, Var):
            if u.index >= depth:
                out.add(u.index - depth)
            return
        for c, k in children(u):
            walk(c, depth + k)

    walk(t, 0)
    return out


def constants(t: Term) -> set[str]:
    """Names of all global constants referenced by ``t``."""
    out: set[str] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Const):
            out.add(u.name)
        else:
            stack.extend(c for c, _ in children(u))
    return out


def numeral(n: int) -> Term:
    t: Term = Zero()
    for _ in range(n):
        t = Suc(t)
    return t


def as_numeral(t: Term) -> Optional[int]:
    k = 0
    while isinstance(t, Suc):
        t, k = t.pred, k + 1
    return k if isinstance(t, Zero) else None


# --------------------------------------------------------------------------
# pretty printing

# precedence levels, loosest first
_LAM, _ARROW, _PROD, _APP, _POSTFIX, _ATOM = range(6)


def _fresh(hint: str, avoid: set[str]) -> str:
    base = hint if hint and hint != "_" else "x"
    if base not in avoid:
        return base
    stem = base.rstrip("0123456789'") or "x"
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def _uniquify(names: list[str]) -> list[str]:
    out: list[str] = []
    for n in names:
        out.append(_fresh(n, set(out)) if n in out or n == "_" else n)
    return out


class _Printer:
    def __init__(self, names: list[str]):
        # names[-1] is index 0
        self.names = names

    def binder(self, hint: str, body: Term) -> str:
        """Pick a printable name for a binder whose scope is ``body``."""
        used = free_indices(body)
        if 0 not in used and hint == "_":
            return "_"
        avoid = {self.names[-i] for i in used if i > 0 and i <= len(self.names)}
        avoid |= constants(body)
        avoid |= _KEYWORDS
        return _fresh(hint, avoid)

    def under(self, name: str, body: Term, prec: int) -> str:
        self.names.append(name)
        try:
            return self.go(body, prec)
        finally:
            self.names.pop()

    def go(self, t: Term, prec: int) -> str:
        s, level = self.render(t)
        return f"({s})" if level < prec else s

    def render(self, t: Term) -> tuple[str, int]:
        match t:
            case Var(i):
                if i < len(self.names):
                    return self.names[-1 - i], _ATOM
                return f"#{i}", _ATOM
            case Const(name):
                return name, _ATOM
            case Universe():
                return "U", _ATOM
            case Unit():
                return "Unit", _ATOM
            case Star():
                return "star", _ATOM
            case Nat():
                return "Nat", _ATOM
            case Zero() | Suc() if as_numeral(t) is not None:
                return str(as_numeral(t)), _ATOM
            case Suc(n):
                return f"suc {self.go(n, _POSTFIX)}", _APP
            case Lam(hint, body):
                x = self.binder(hint, body)
                return f"\\{x}. {self.under(x, body, _LAM)}", _LAM
            case Pi(hint, a, b):
                x = self.binder(hint, b)
                if x == "_":
                    return f"{self.go(a, _PROD)} -> {self.under(x, b, _ARROW)}", _ARROW
                return f"({x} : {self.go(a, _LAM)}) -> {self.under(x, b, _ARROW)}", _ARROW
            case Sigma(hint, a, b):
                x = self.binder(hint, b)
                if x == "_":
                    return f"{self.go(a, _APP)} * {self.under(x, b, _PROD)}", _PROD
                return f"({x} : {self.go(a, _LAM)}) * {self.under(x, b, _PROD)}", _PROD
            case Pair(a, b):
                return f"({self.go(a, _LAM)} , {self.go(b, _LAM)})", _ATOM
            case Fst(p):
                return f"{self.go(p, _POSTFIX)}.1", _POSTFIX
            case Snd(p):
                return f"{self.go(p, _POSTFIX)}.2", _POSTFIX
            case Ann(x, a):
                inner = self.go(x, _LAM)
                if _starts_with_name(inner):
                    # keep "(x : A) -> B" from reading back as a binder group
                    inner = f"({inner})"
                return f"({inner} : {self.go(a, _LAM)})", _ATOM
            case App(f, a):
                return f"{self.go(f, _APP)} {self.go(a, _POSTFIX)}", _APP
            case Id(a, x, y):
                return self.spine("Id", a, x, y)
            case Refl(x):
                return self.spine("refl", x)
            case NatElim(m, z, s, n):
                return self.spine("natElim", m, z, s, n)
            case J(a, x, c, d, y, p):
                return self.spine("J", a, x, c, d, y, p)
        raise InternalError(f"cannot print {t!r}")

    def spine(self, head: str, *args: Term) -> tuple[str, int]:
        return " ".join([head, *(self.go(a, _POSTFIX) for a in args)]), _APP


_FIRST_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


def _starts_with_name(s: str) -> bool:
    m = _FIRST_WORD.match(s)
    return m is not None and m.group() not in _KEYWORDS


_KEYWORDS = frozenset(
    "def axiom import U Id refl J Nat zero suc natElim Unit star".split()
)


def pretty(t: Term, names: Optional[list[str]] = None) -> str:
    """Render ``t`` in surface syntax.

    ``names`` lists the enclosing context's name hints, outermost first.
    Output is deterministic and parses back to an alpha-equivalent term.
    """
    return _Printer(_uniquify(list(names or []))).go(t, _LAM)
