"""Bidirectional type checking and the global environment."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from . import nbe
from .conversion import Converter
from .errors import CheckError
from .nbe import (
    Value,
    VId,
    VNat,
    VPi,
    VRefl,
    VSigma,
    VUnit,
    VUniverse,
    VZero,
    apply_all,
    apply_value,
    evaluate,
    fresh,
    readback,
    vfst,
)
from .syntax import (
    Ann,
    App,
    Axiom,
    Const,
    Declaration,
    Definition,
    Fst,
    Id,
    J,
    Lam,
    Nat,
    NatElim,
    Pair,
    Pi,
    Refl,
    Sigma,
    Snd,
    Star,
    Suc,
    Term,
    Unit,
    Universe,
    Var,
    Zero,
    constants,
    pretty,
    scope_audit,
    subst_top,
)


@dataclass(frozen=True, eq=False)
class _Entry:
    decl: Declaration
    type: Value
    value: Optional[Value]  # None for axioms


class GlobalEnv:
    """Ordered store of checked declarations.

    Extension returns a new environment; existing snapshots never change, so
    values that captured an older snapshot stay valid.
    """

    def __init__(self, entries: Optional[dict] = None, deps: Optional[dict] = None):
        self._entries: dict[str, _Entry] = dict(entries or {})
        self.deps: dict[str, frozenset[str]] = dict(deps or {})

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> list[str]:
        return list(self._entries)

    def declarations(self) -> list[Declaration]:
        return [e.decl for e in self._entries.values()]

    def declaration(self, name: str) -> Declaration:
        return self._lookup(name).decl

    @property
    def axioms(self) -> frozenset[str]:
        return frozenset(n for n, e in self._entries.items() if e.value is None)

    def _lookup(self, name: str) -> _Entry:
        try:
            return self._entries[name]
        except KeyError:
            raise CheckError("UnknownName", f"unknown name '{name}'") from None

    def type_of(self, name: str) -> Value:
        return self._lookup(name).type

    def value_of(self, name: str) -> Value:
        e = self._lookup(name)
        if e.value is None:
            return nbe.VNeutral(nbe.Neutral(nbe.HConst(name)))
        return e.value

    def extend(self, decl: Declaration, type_: Value, value: Optional[Value]) -> "GlobalEnv":
        if decl.name in self._entries:
            raise CheckError("DuplicateDefinition", f"'{decl.name}' is already defined", decl.span)
        refs = constants(decl.type)
        if isinstance(decl.kind, Definition):
            refs |= constants(decl.kind.body)
        entries = dict(self._entries)
        entries[decl.name] = _Entry(decl, type_, value)
        deps = dict(self.deps)
        deps[decl.name] = frozenset(refs)
        return GlobalEnv(entries, deps)

    def merge(self, other: "GlobalEnv") -> "GlobalEnv":
        """Union of two environments; shared names must be the same declaration."""
        entries = dict(self._entries)
        deps = dict(self.deps)
        for name, e in other._entries.items():
            mine = entries.get(name)
            if mine is None:
                entries[name] = e
                deps[name] = other.deps[name]
            elif mine is not e:
                raise CheckError("DuplicateDefinition", f"'{name}' is defined twice", e.decl.span)
        return GlobalEnv(entries, deps)


def axiom_closure(name: str, env: GlobalEnv) -> set[str]:
    """All axioms that ``name`` transitively depends on (itself included)."""
    if name not in env:
        raise CheckError("UnknownName", f"unknown name '{name}'")
    seen: set[str] = set()
    stack = [name]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        stack.extend(env.deps.get(n, ()))
    return {n for n in seen if n in env.axioms}


# --------------------------------------------------------------------------
# contexts


@dataclass(frozen=True)
class Context:
    """Local typing context; entry ``i`` sits at de Bruijn level ``i``."""

    names: tuple = ()
    types: tuple = ()

    def __len__(self) -> int:
        return len(self.types)

    def extend(self, name: str, ty: Value) -> "Context":
        return Context(self.names + (name,), self.types + (ty,))

    @property
    def env(self) -> nbe.Env:
        return nbe.context_env(len(self.types))

    def fresh(self) -> Value:
        return fresh(len(self.types))


class Checker:
    def __init__(self, env: GlobalEnv):
        self.globals = env

    # -- helpers

    def eval(self, ctx: Context, t: Term) -> Value:
        return evaluate(ctx.env, t, self.globals)

    def show(self, ctx: Context, v: Value) -> str:
        return pretty(readback(len(ctx), v), list(ctx.names))

    def show_term(self, ctx: Context, t: Term) -> str:
        return pretty(t, list(ctx.names))

    def conv(self, ctx: Context, ty: Value, a: Value, b: Value) -> bool:
        return Converter(self.globals, ctx.types).conv(ty, a, b)

    def conv_type(self, ctx: Context, a: Value, b: Value) -> bool:
        return Converter(self.globals, ctx.types).conv_type(a, b)

    def mismatch(self, ctx: Context, t: Term, expected: Value, actual: Value) -> CheckError:
        return CheckError(
            "TypeMismatch",
            f"type mismatch in {self.show_term(ctx, t)}",
            t.span,
            expected=self.show(ctx, expected),
            actual=self.show(ctx, actual),
        )

    def check_type(self, ctx: Context, t: Term) -> Term:
        return self.check(ctx, t, VUniverse())

    # -- checking

    def check(self, ctx: Context, t: Term, expected: Value) -> Term:
        try:
            return self._check(ctx, t, expected)
        except CheckError as e:
            raise e.with_span(t.span)

    def _check(self, ctx: Context, t: Term, expected: Value) -> Term:
        match t:
            case Lam(name, body):
                if not isinstance(expected, VPi):
                    raise CheckError(
                        "TypeMismatch",
                        "a function was given where a non-function type is expected",
                        t.span,
                        expected=self.show(ctx, expected),
                        actual="a function type",
                    )
                x = ctx.fresh()
                body_ = self.check(ctx.extend(name, expected.domain), body, expected.codomain(x))
                return Lam(name, body_, span=t.span)
            case Pair(a, b):
                if not isinstance(expected, VSigma):
                    raise CheckError(
                        "TypeMismatch",
                        "a pair was given where a non-pair type is expected",
                        t.span,
                        expected=self.show(ctx, expected),
                        actual="a dependent pair type",
                    )
                a_ = self.check(ctx, a, expected.first)
                b_ = self.check(ctx, b, expected.second(self.eval(ctx, a_)))
                return Pair(a_, b_, span=t.span)
            case Refl(a):
                if not isinstance(expected, VId):
                    raise CheckError(
                        "NotAnIdentityType",
                        "refl checked against a type that is not an identity type",
                        t.span,
                        expected=self.show(ctx, expected),
                    )
                a_ = self.check(ctx, a, expected.type)
                va = self.eval(ctx, a_)
                for side, endpoint in (("left", expected.lhs), ("right", expected.rhs)):
                    if not self.conv(ctx, expected.type, va, endpoint):
                        raise CheckError(
                            "TypeMismatch",
                            f"{self.show_term(ctx, Refl(a_))} does not match the {side} endpoint",
                            t.span,
                            expected=self.show(ctx, expected),
                            actual=self.show(ctx, VId(expected.type, va, va)),
                        )
                return Refl(a_, span=t.span)
        t_, actual = self.infer(ctx, t)
        if not self.conv_type(ctx, expected, actual):
            raise self.mismatch(ctx, t, expected, actual)
        return t_

    # -- inference

    def infer(self, ctx: Context, t: Term) -> tuple[Term, Value]:
        """Return the elaborated term (annotations erased) and its type."""
        try:
            return self._infer(ctx, t)
        except CheckError as e:
            raise e.with_span(t.span)

    def _infer(self, ctx: Context, t: Term) -> tuple[Term, Value]:
        match t:
            case Var(i):
                level = len(ctx) - 1 - i
                if level < 0:
                    raise CheckError("UnboundIdentifier", f"variable #{i} is out of scope", t.span)
                return t, ctx.types[level]
            case Const(name):
                return t, self.globals.type_of(name)
            case Universe():
                return t, VUniverse()
            case Pi(name, a, b) | Sigma(name, a, b):
                a_ = self.check_type(ctx, a)
                b_ = self.check_type(ctx.extend(name, self.eval(ctx, a_)), b)
                return type(t)(name, a_, b_, span=t.span), VUniverse()
            case App(Lam(_, body), arg):
                # a beta-redex with a bare lambda head: infer through the substitution
                arg_, _ = self.infer(ctx, arg)
                return self.infer(ctx, subst_top(body, arg_))
            case App(f, a):
                f_, fty = self.infer(ctx, f)
                if not isinstance(fty, VPi):
                    raise CheckError(
                        "NotAFunction",
                        f"{self.show_term(ctx, f_)} is applied but is not a function",
                        f.span or t.span,
                        actual=self.show(ctx, fty),
                    )
                a_ = self.check(ctx, a, fty.domain)
                return App(f_, a_, span=t.span), fty.codomain(self.eval(ctx, a_))
            case Fst(p) | Snd(p):
                p_, pty = self.infer(ctx, p)
                if not isinstance(pty, VSigma):
                    raise CheckError(
                        "NotAPair",
                        f"projection from {self.show_term(ctx, p_)}, which is not a pair",
                        t.span,
                        actual=self.show(ctx, pty),
                    )
                if isinstance(t, Fst):
                    return Fst(p_, span=t.span), pty.first
                return Snd(p_, span=t.span), pty.second(vfst(self.eval(ctx, p_)))
            case Unit() | Nat():
                return t, VUniverse()
            case Star():
                return t, VUnit()
            case Zero():
                return t, VNat()
            case Suc(n):
                return Suc(self.check(ctx, n, VNat()), span=t.span), VNat()
            case NatElim(m, z, s, n):
                m_ = self.check(ctx, m, nbe.nat_motive_type())
                vm = self.eval(ctx, m_)
                z_ = self.check(ctx, z, apply_value(vm, VZero()))
                s_ = self.check(ctx, s, nbe.nat_step_type(vm))
                n_ = self.check(ctx, n, VNat())
                return NatElim(m_, z_, s_, n_, span=t.span), apply_value(vm, self.eval(ctx, n_))
            case Id(a, x, y):
                a_ = self.check_type(ctx, a)
                va = self.eval(ctx, a_)
                x_ = self.check(ctx, x, va)
                y_ = self.check(ctx, y, va)
                return Id(a_, x_, y_, span=t.span), VUniverse()
            case J(a, x, c, d, y, p):
                a_ = self.check_type(ctx, a)
                va = self.eval(ctx, a_)
                x_ = self.check(ctx, x, va)
                vx = self.eval(ctx, x_)
                c_ = self.check(ctx, c, nbe.j_motive_type(va, vx))
                vc = self.eval(ctx, c_)
                d_ = self.check(ctx, d, apply_all(vc, vx, VRefl(vx)))
                y_ = self.check(ctx, y, va)
                vy = self.eval(ctx, y_)
                p_ = self.check(ctx, p, VId(va, vx, vy))
                return J(a_, x_, c_, d_, y_, p_, span=t.span), apply_all(vc, vy, self.eval(ctx, p_))
            case Ann(x, ty):
                ty_ = self.check_type(ctx, ty)
                vty = self.eval(ctx, ty_)
                return self.check(ctx, x, vty), vty
            case Lam() | Pair() | Refl():
                what = {Lam: "a lambda", Pair: "a pair", Refl: "refl"}[type(t)]
                raise CheckError(
                    "CannotInfer",
                    f"cannot infer the type of {what}; add a type annotation",
                    t.span,
                )
        raise CheckError("InternalError", f"unexpected term {t!r}", t.span)

    # -- declarations

    def declaration(self, d: Declaration) -> GlobalEnv:
        try:
            return self._declaration(d)
        except CheckError as e:
            raise e.with_span(d.span)

    def _declaration(self, d: Declaration) -> GlobalEnv:
        if d.name in self.globals:
            raise CheckError("DuplicateDefinition", f"'{d.name}' is already defined", d.span)
        ctx = Context()
        for t in (d.kind.type, getattr(d.kind, "body", None)):
            if t is not None and scope_audit(t, 0):
                raise CheckError("InternalError", f"'{d.name}' is not closed", d.span)
        if isinstance(d.kind, Axiom):
            ty_ = self.check_type(ctx, d.kind.type)
            decl = Declaration(d.name, Axiom(ty_), d.span)
            return self.globals.extend(decl, self.eval(ctx, ty_), None)
        if d.kind.type is None:
            body_, vty = self.infer(ctx, d.kind.body)
            ty_ = readback(0, vty)
        else:
            ty_ = self.check_type(ctx, d.kind.type)
            vty = self.eval(ctx, ty_)
            body_ = self.check(ctx, d.kind.body, vty)
        decl = Declaration(d.name, Definition(ty_, body_), d.span)
        return self.globals.extend(decl, vty, self.eval(ctx, body_))


# --------------------------------------------------------------------------
# functional surface


def infer(ctx: Context, t: Term, env: GlobalEnv) -> Value:
    return Checker(env).infer(ctx, t)[1]


def check(ctx: Context, t: Term, expected: Value, env: GlobalEnv) -> Term:
    return Checker(env).check(ctx, t, expected)


def check_declaration(d: Declaration, env: GlobalEnv) -> GlobalEnv:
    """Check ``d`` and return the extended environment (``env`` is untouched)."""
    return Checker(env).declaration(d)


def check_declarations(decls: Iterable[Declaration], env: GlobalEnv) -> GlobalEnv:
    for d in decls:
        env = check_declaration(d, env)
    return env
