"""Surface syntax: parsing to a named AST and resolution to core terms.

Grammar (loosest binding first)::

    expr   ::= '\\' IDENT+ '.' expr | arrow
    arrow  ::= tele '->' expr | prod ['->' expr]
    prod   ::= tele '*' prod | app ['*' prod]
    tele   ::= ('(' IDENT+ ':' expr ')')+
    app    ::= post post*
    post   ::= atom ('.1' | '.2')*
    atom   ::= IDENT | U | NUMBER | primitive
             | '(' expr ')' | '(' expr ':' expr ')' | '(' expr ',' expr {',' expr} ')'

    module ::= item*
    item   ::= 'import' IDENT
             | 'def' IDENT tele? [':' expr] ':=' expr
             | 'axiom' IDENT tele? ':' expr
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from . import syntax as core
from .errors import CheckError
from .lexer import PRIMITIVES, Token, lex
from .syntax import Span

MAX_NUMERAL = 2000
# far beyond hand-written code, well within the interpreter stack
MAX_NESTING = 256


# --------------------------------------------------------------------------
# surface AST


@dataclass(frozen=True)
class SVar:
    name: str
    span: Span


@dataclass(frozen=True)
class SUniverse:
    span: Span


@dataclass(frozen=True)
class SPrim:
    name: str
    span: Span


@dataclass(frozen=True)
class SNum:
    value: int
    span: Span


@dataclass(frozen=True)
class SPi:
    name: str
    domain: "SurfaceTerm"
    codomain: "SurfaceTerm"
    span: Span


@dataclass(frozen=True)
class SSigma:
    name: str
    first: "SurfaceTerm"
    second: "SurfaceTerm"
    span: Span


@dataclass(frozen=True)
class SLam:
    name: str
    body: "SurfaceTerm"
    span: Span


@dataclass(frozen=True)
class SApp:
    fn: "SurfaceTerm"
    arg: "SurfaceTerm"
    span: Span


@dataclass(frozen=True)
class SPair:
    fst: "SurfaceTerm"
    snd: "SurfaceTerm"
    span: Span


@dataclass(frozen=True)
class SProj:
    term: "SurfaceTerm"
    which: int
    span: Span


@dataclass(frozen=True)
class SAnn:
    term: "SurfaceTerm"
    type: "SurfaceTerm"
    span: Span


SurfaceTerm = Union[SVar, SUniverse, SPrim, SNum, SPi, SSigma, SLam, SApp, SPair, SProj, SAnn]


@dataclass(frozen=True)
class Param:
    name: str
    type: SurfaceTerm
    span: Span


@dataclass(frozen=True)
class SDecl:
    kind: str  # "def" or "axiom"
    name: str
    params: tuple[Param, ...]
    type: Optional[SurfaceTerm]
    body: Optional[SurfaceTerm]
    span: Span


@dataclass(frozen=True)
class Import:
    name: str
    span: Span


@dataclass
class ModuleFile:
    name: str
    imports: list[Import] = field(default_factory=list)
    declarations: list[SDecl] = field(default_factory=list)


# --------------------------------------------------------------------------
# parser

_ATOM_START = {"IDENT", "UNIVERSE", "NUMBER", "KEYWORD", "LPAREN"}
_DECL_START = {"DEF", "AXIOM", "IMPORT", "EOF"}


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0
        self.decl_start: Optional[Token] = None
        self.depth = 0

    # -- token plumbing

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        tok = self.peek()
        self.pos = min(self.pos + 1, len(self.toks) - 1)
        return tok

    def fail(self, expected: Iterable[str]) -> CheckError:
        tok = self.peek()
        exp = ", ".join(sorted(expected))
        if tok.kind in _DECL_START and self.decl_start is not None:
            return CheckError(
                "UnterminatedDeclaration",
                f"declaration is incomplete (expected {exp})",
                self.decl_start.span,
            )
        found = tok.text or tok.kind
        return CheckError("UnexpectedToken", f"unexpected {found!r}, expected {exp}", tok.span)

    def expect(self, kind: str) -> Token:
        if self.peek().kind != kind:
            raise self.fail([kind])
        return self.advance()

    def last_span(self) -> Span:
        return self.toks[max(self.pos - 1, 0)].span

    # -- modules

    def module(self, name: str) -> ModuleFile:
        mod = ModuleFile(name)
        while self.peek().kind != "EOF":
            tok = self.peek()
            if tok.kind == "IMPORT":
                self.advance()
                mod.imports.append(Import(self.expect("IDENT").text, tok.span))
            elif tok.kind in ("DEF", "AXIOM"):
                mod.declarations.append(self.declaration())
            else:
                raise self.fail(["def", "axiom", "import"])
        return mod

    def declaration(self) -> SDecl:
        start = self.advance()
        self.decl_start = start
        name = self.expect("IDENT").text
        params: list[Param] = []
        while self.peek().kind == "LPAREN":
            params.extend(self.binder_group())
        ty = body = None
        if start.kind == "AXIOM":
            self.expect("COLON")
            ty = self.expr()
        else:
            if self.peek().kind == "COLON":
                self.advance()
                ty = self.expr()
            if self.peek().kind != "DEFEQ":
                raise self.fail([":="])
            self.advance()
            body = self.expr()
        self.decl_start = None
        return SDecl(start.text, name, tuple(params), ty, body, start.span.to(self.last_span()))

    def binder_group(self) -> list[Param]:
        self.expect("LPAREN")
        names = [self.expect("IDENT")]
        while self.peek().kind == "IDENT":
            names.append(self.advance())
        self.expect("COLON")
        ty = self.expr()
        self.expect("RPAREN")
        return [Param(n.text, ty, n.span) for n in names]

    # -- terms

    def scan_telescope(self) -> Optional[int]:
        """Offset just past a run of binder groups at the cursor, if any."""
        i = self.pos
        toks = self.toks
        groups = 0
        while toks[i].kind == "LPAREN" and toks[i + 1].kind == "IDENT":
            i += 1
            while toks[i].kind == "IDENT":
                i += 1
            if toks[i].kind != "COLON":
                break
            depth = 1
            i += 1
            while depth and toks[i].kind != "EOF":
                if toks[i].kind == "LPAREN":
                    depth += 1
                elif toks[i].kind == "RPAREN":
                    depth -= 1
                i += 1
            if depth:
                return None
            groups += 1
            if toks[i].kind in ("ARROW", "STAR"):
                return i
        return None

    def telescope(self) -> list[Param]:
        params: list[Param] = []
        while self.peek().kind == "LPAREN":
            params.extend(self.binder_group())
        return params

    def expr(self) -> SurfaceTerm:
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise CheckError("NestingTooDeep", f"expression nests more than {MAX_NESTING} levels", self.peek().span)
        try:
            return self._expr()
        finally:
            self.depth -= 1

    def _expr(self) -> SurfaceTerm:
        if self.peek().kind == "LAMBDA":
            start = self.advance()
            names = [self.expect("IDENT")]
            while self.peek().kind == "IDENT":
                names.append(self.advance())
            self.expect("DOT")
            body = self.expr()
            for n in reversed(names):
                body = SLam(n.text, body, start.span.to(self.last_span()))
            return body
        return self.arrow()

    def arrow(self) -> SurfaceTerm:
        start = self.peek().span
        end = self.scan_telescope()
        if end is not None and self.toks[end].kind == "ARROW":
            params = self.telescope()
            self.expect("ARROW")
            cod = self.expr()
            for p in reversed(params):
                cod = SPi(p.name, p.type, cod, start.to(self.last_span()))
            return cod
        dom = self.prod()
        if self.peek().kind == "ARROW":
            self.advance()
            cod = self.expr()
            return SPi("_", dom, cod, start.to(self.last_span()))
        return dom

    def prod(self) -> SurfaceTerm:
        start = self.peek().span
        end = self.scan_telescope()
        if end is not None and self.toks[end].kind == "STAR":
            params = self.telescope()
            self.expect("STAR")
            snd = self.prod()
            for p in reversed(params):
                snd = SSigma(p.name, p.type, snd, start.to(self.last_span()))
            return snd
        fst = self.app()
        if self.peek().kind == "STAR":
            self.advance()
            snd = self.prod()
            return SSigma("_", fst, snd, start.to(self.last_span()))
        return fst

    def app(self) -> SurfaceTerm:
        fn = self.postfix()
        while self.peek().kind in _ATOM_START:
            arg = self.postfix()
            fn = SApp(fn, arg, fn.span.to(arg.span))
        return fn

    def postfix(self) -> SurfaceTerm:
        t = self.atom()
        while self.peek().kind == "PROJ":
            tok = self.advance()
            t = SProj(t, int(tok.text), t.span.to(tok.span))
        return t

    def atom(self) -> SurfaceTerm:
        tok = self.peek()
        match tok.kind:
            case "IDENT":
                self.advance()
                return SVar(tok.text, tok.span)
            case "UNIVERSE":
                self.advance()
                return SUniverse(tok.span)
            case "KEYWORD":
                self.advance()
                return SPrim(tok.text, tok.span)
            case "NUMBER":
                self.advance()
                value = int(tok.text)
                if value > MAX_NUMERAL:
                    raise CheckError("NumeralTooLarge", f"numeral {value} exceeds {MAX_NUMERAL}", tok.span)
                return SNum(value, tok.span)
            case "LPAREN":
                self.advance()
                inner = self.expr()
                if self.peek().kind == "COLON":
                    self.advance()
                    ty = self.expr()
                    self.expect("RPAREN")
                    return SAnn(inner, ty, tok.span.to(self.last_span()))
                items = [inner]
                while self.peek().kind == "COMMA":
                    self.advance()
                    items.append(self.expr())
                self.expect("RPAREN")
                span = tok.span.to(self.last_span())
                out = items[-1]
                for item in reversed(items[:-1]):
                    out = SPair(item, out, span)
                return out
        raise self.fail(["term"])


def _guarded(fn, tokens: list[Token]):
    try:
        return fn()
    except RecursionError:
        raise CheckError("NestingTooDeep", "input is nested too deeply", tokens[0].span) from None


def parse_module(tokens: list[Token], name: str = "<input>") -> ModuleFile:
    p = Parser(tokens)
    return _guarded(lambda: p.module(name), tokens)


def parse_term(source: str, file: str = "<input>") -> SurfaceTerm:
    tokens = lex(source, file)
    p = Parser(tokens)

    def go():
        t = p.expr()
        if p.peek().kind != "EOF":
            raise p.fail(["end of input"])
        return t

    return _guarded(go, tokens)


# --------------------------------------------------------------------------
# name resolution


def _saturate(prim: str, args: list[core.Term], span: Span) -> core.Term:
    """Build a primitive node, eta-expanding if it is under-applied."""
    arity = PRIMITIVES[prim]
    have = args[:arity]
    missing = arity - len(have)
    if missing:
        have = [core.shift(a, missing) for a in have]
        have += [core.Var(missing - 1 - i, span=span) for i in range(missing)]
    node = _PRIM_BUILDERS[prim](*have, span=span)
    for i in range(missing):
        node = core.Lam(f"x{missing - i}" if missing > 1 else "x", node, span=span)
    for extra in args[arity:]:
        node = core.App(node, extra, span=span)
    return node


_PRIM_BUILDERS = {
    "Id": core.Id,
    "refl": core.Refl,
    "J": core.J,
    "Nat": core.Nat,
    "zero": core.Zero,
    "suc": core.Suc,
    "natElim": core.NatElim,
    "Unit": core.Unit,
    "star": core.Star,
}


class Resolver:
    def __init__(self, globals_: Iterable[str]):
        self.globals = set(globals_)

    def term(self, t: SurfaceTerm, scope: list[str]) -> core.Term:
        match t:
            case SVar(name, span):
                if name != "_":
                    for i, local in enumerate(reversed(scope)):
                        if local == name:
                            return core.Var(i, span=span)
                    if name in self.globals:
                        return core.Const(name, span=span)
                raise CheckError("UnboundIdentifier", f"unbound identifier '{name}'", span)
            case SUniverse(span):
                return core.Universe(span=span)
            case SNum(value, span):
                out: core.Term = core.Zero(span=span)
                for _ in range(value):
                    out = core.Suc(out, span=span)
                return out
            case SPrim(name, span):
                return _saturate(name, [], span)
            case SPi(name, a, b, span):
                return core.Pi(name, self.term(a, scope), self.term(b, scope + [name]), span=span)
            case SSigma(name, a, b, span):
                return core.Sigma(name, self.term(a, scope), self.term(b, scope + [name]), span=span)
            case SLam(name, body, span):
                return core.Lam(name, self.term(body, scope + [name]), span=span)
            case SApp():
                return self.spine(t, scope)
            case SPair(a, b, span):
                return core.Pair(self.term(a, scope), self.term(b, scope), span=span)
            case SProj(x, which, span):
                node = core.Fst if which == 1 else core.Snd
                return node(self.term(x, scope), span=span)
            case SAnn(x, ty, span):
                return core.Ann(self.term(x, scope), self.term(ty, scope), span=span)
        raise TypeError(f"not a surface term: {t!r}")

    def spine(self, t: SurfaceTerm, scope: list[str]) -> core.Term:
        args: list[SurfaceTerm] = []
        head = t
        while isinstance(head, SApp):
            args.append(head.arg)
            head = head.fn
        args.reverse()
        resolved = [self.term(a, scope) for a in args]
        if isinstance(head, SPrim):
            return _saturate(head.name, resolved, t.span)
        out = self.term(head, scope)
        for a, s in zip(resolved, args):
            out = core.App(out, a, span=head.span.to(s.span))
        return out

    def declaration(self, d: SDecl) -> core.Declaration:
        if d.name in self.globals:
            raise CheckError("DuplicateDefinition", f"'{d.name}' is already defined", d.span)
        scope: list[str] = []
        param_types: list[core.Term] = []
        for p in d.params:
            param_types.append(self.term(p.type, scope))
            scope.append(p.name)
        ty = self.term(d.type, scope) if d.type is not None else None
        body = self.term(d.body, scope) if d.body is not None else None
        for p, pty in zip(reversed(d.params), reversed(param_types)):
            if ty is not None:
                ty = core.Pi(p.name, pty, ty, span=p.span)
            if body is not None:
                body = core.Lam(p.name, body, span=p.span)
        if d.kind == "axiom":
            kind: Union[core.Definition, core.Axiom] = core.Axiom(ty)
        else:
            kind = core.Definition(ty, body)
        self.globals.add(d.name)
        return core.Declaration(d.name, kind, d.span)


def resolve(m: ModuleFile, globals_: Iterable[str]) -> list[core.Declaration]:
    """Resolve every declaration of ``m`` against the given global names."""
    r = Resolver(globals_)
    return [r.declaration(d) for d in m.declarations]


def resolve_term(t: SurfaceTerm, globals_: Iterable[str], scope: Optional[list[str]] = None) -> core.Term:
    return Resolver(globals_).term(t, list(scope or []))


def read_term(source: str, globals_: Iterable[str] = (), scope: Optional[list[str]] = None) -> core.Term:
    """Parse and resolve a single expression."""
    return resolve_term(parse_term(source), globals_, scope)


def read_module(source: str, name: str = "<input>", file: Optional[str] = None) -> ModuleFile:
    return parse_module(lex(source, file or name), name)

