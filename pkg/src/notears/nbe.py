"""Normalization by evaluation.

Terms evaluate into a semantic domain where binders become closures and
stuck computations become neutrals.  Readback turns values into beta-normal
terms, introducing fresh variables as de Bruijn *levels* and converting them
to indices at the binder site.  Evaluation is untyped; eta lives in
:mod:`notears.conversion`.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Union

from .errors import FuelExhausted
from .syntax import (
    Ann,
    App,
    Const,
    Fst,
    Id,
    InternalError,
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
)

if TYPE_CHECKING:
    from .checker import GlobalEnv

Env = tuple  # tuple of Values; index i lives at env[-1 - i]


class Value:
    __slots__ = ()


@dataclass(frozen=True, eq=False)
class Closure:
    env: Env
    body: Term
    globals: Optional["GlobalEnv"]
    name: str = "_"

    def __call__(self, arg: "Value") -> "Value":
        return evaluate(self.env + (arg,), self.body, self.globals)


@dataclass(frozen=True, eq=False)
class VUniverse(Value):
    pass


@dataclass(frozen=True, eq=False)
class VPi(Value):
    domain: Value
    codomain: Closure


@dataclass(frozen=True, eq=False)
class VLam(Value):
    closure: Closure


@dataclass(frozen=True, eq=False)
class VSigma(Value):
    first: Value
    second: Closure


@dataclass(frozen=True, eq=False)
class VPair(Value):
    fst: Value
    snd: Value


@dataclass(frozen=True, eq=False)
class VUnit(Value):
    pass


@dataclass(frozen=True, eq=False)
class VStar(Value):
    pass


@dataclass(frozen=True, eq=False)
class VNat(Value):
    pass


@dataclass(frozen=True, eq=False)
class VZero(Value):
    pass


@dataclass(frozen=True, eq=False)
class VSuc(Value):
    pred: Value


@dataclass(frozen=True, eq=False)
class VId(Value):
    type: Value
    lhs: Value
    rhs: Value


@dataclass(frozen=True, eq=False)
class VRefl(Value):
    point: Value


# neutral heads


@dataclass(frozen=True)
class HVar:
    level: int


@dataclass(frozen=True)
class HConst:
    name: str


# spine frames


@dataclass(frozen=True, eq=False)
class FApp:
    arg: Value


@dataclass(frozen=True, eq=False)
class FFst:
    pass


@dataclass(frozen=True, eq=False)
class FSnd:
    pass


@dataclass(frozen=True, eq=False)
class FNatElim:
    motive: Value
    base: Value
    step: Value


@dataclass(frozen=True, eq=False)
class FJ:
    type: Value
    base: Value
    motive: Value
    d_refl: Value
    other: Value


Frame = Union[FApp, FFst, FSnd, FNatElim, FJ]


@dataclass(frozen=True, eq=False)
class Neutral:
    head: Union[HVar, HConst]
    spine: tuple = ()

    def push(self, frame: Frame) -> "Neutral":
        return Neutral(self.head, self.spine + (frame,))


@dataclass(frozen=True, eq=False)
class VNeutral(Value):
    neutral: Neutral


def fresh(level: int) -> Value:
    return VNeutral(Neutral(HVar(level)))


# --------------------------------------------------------------------------
# fuel

_fuel: contextvars.ContextVar[Optional[list[int]]] = contextvars.ContextVar("notears_fuel", default=None)


@contextlib.contextmanager
def fuel_limit(steps: Optional[int]):
    """Bound the number of evaluation/conversion steps inside the block."""
    token = _fuel.set([steps] if steps is not None else None)
    try:
        yield
    finally:
        _fuel.reset(token)


def tick() -> None:
    box = _fuel.get()
    if box is not None:
        box[0] -= 1
        if box[0] < 0:
            raise FuelExhausted()


# --------------------------------------------------------------------------
# evaluation


def evaluate(env: Env, t: Term, globals_: Optional["GlobalEnv"] = None) -> Value:
    tick()
    match t:
        case Var(i):
            try:
                return env[-1 - i]
            except IndexError:
                raise InternalError(f"unbound index {i} in environment of size {len(env)}") from None
        case Const(name):
            if globals_ is None:
                raise InternalError(f"no global environment to resolve '{name}'")
            return globals_.value_of(name)
        case Universe():
            return VUniverse()
        case Pi(name, a, b):
            return VPi(evaluate(env, a, globals_), Closure(env, b, globals_, name))
        case Lam(name, b):
            return VLam(Closure(env, b, globals_, name))
        case App(f, a):
            return apply_value(evaluate(env, f, globals_), evaluate(env, a, globals_))
        case Sigma(name, a, b):
            return VSigma(evaluate(env, a, globals_), Closure(env, b, globals_, name))
        case Pair(a, b):
            return VPair(evaluate(env, a, globals_), evaluate(env, b, globals_))
        case Fst(p):
            return vfst(evaluate(env, p, globals_))
        case Snd(p):
            return vsnd(evaluate(env, p, globals_))
        case Unit():
            return VUnit()
        case Star():
            return VStar()
        case Nat():
            return VNat()
        case Zero():
            return VZero()
        case Suc(n):
            return VSuc(evaluate(env, n, globals_))
        case NatElim(m, z, s, n):
            ev = [evaluate(env, x, globals_) for x in (m, z, s, n)]
            return vnat_elim(*ev)
        case Id(a, x, y):
            return VId(evaluate(env, a, globals_), evaluate(env, x, globals_), evaluate(env, y, globals_))
        case Refl(x):
            return VRefl(evaluate(env, x, globals_))
        case J(a, x, c, d, y, p):
            ev = [evaluate(env, u, globals_) for u in (a, x, c, d, y, p)]
            return vj(*ev)
        case Ann(x, _):
            return evaluate(env, x, globals_)
    raise InternalError(f"cannot evaluate {t!r}")


def apply_value(fn: Value, arg: Value) -> Value:
    match fn:
        case VLam(closure):
            return closure(arg)
        case VNeutral(n):
            return VNeutral(n.push(FApp(arg)))
    raise InternalError(f"cannot apply {type(fn).__name__}")


def apply_all(fn: Value, *args: Value) -> Value:
    for a in args:
        fn = apply_value(fn, a)
    return fn


def vfst(p: Value) -> Value:
    match p:
        case VPair(a, _):
            return a
        case VNeutral(n):
            return VNeutral(n.push(FFst()))
    raise InternalError(f"fst of {type(p).__name__}")


def vsnd(p: Value) -> Value:
    match p:
        case VPair(_, b):
            return b
        case VNeutral(n):
            return VNeutral(n.push(FSnd()))
    raise InternalError(f"snd of {type(p).__name__}")


def vnat_elim(motive: Value, base: Value, step: Value, n: Value) -> Value:
    # iterate from the innermost numeral outwards to avoid deep recursion
    preds: list[Value] = []
    while isinstance(n, VSuc):
        preds.append(n.pred)
        n = n.pred
    match n:
        case VZero():
            acc = base
        case VNeutral(neu):
            acc = VNeutral(neu.push(FNatElim(motive, base, step)))
        case _:
            raise InternalError(f"natElim on {type(n).__name__}")
    for k in reversed(preds):
        tick()
        acc = apply_all(step, k, acc)
    return acc


def vj(a: Value, x: Value, motive: Value, d: Value, y: Value, p: Value) -> Value:
    match p:
        case VRefl():
            return d
        case VNeutral(n):
            return VNeutral(n.push(FJ(a, x, motive, d, y)))
    raise InternalError(f"J on {type(p).__name__}")


# --------------------------------------------------------------------------
# readback


def readback(depth: int, v: Value) -> Term:
    """Quote ``v`` as a beta-normal term valid under ``depth`` binders."""
    tick()
    match v:
        case VUniverse():
            return Universe()
        case VPi(a, b):
            return Pi(b.name, readback(depth, a), readback(depth + 1, b(fresh(depth))))
        case VLam(b):
            return Lam(b.name, readback(depth + 1, b(fresh(depth))))
        case VSigma(a, b):
            return Sigma(b.name, readback(depth, a), readback(depth + 1, b(fresh(depth))))
        case VPair(a, b):
            return Pair(readback(depth, a), readback(depth, b))
        case VUnit():
            return Unit()
        case VStar():
            return Star()
        case VNat():
            return Nat()
        case VZero():
            return Zero()
        case VSuc():
            k = 0
            while isinstance(v, VSuc):
                v, k = v.pred, k + 1
            out = readback(depth, v)
            for _ in range(k):
                out = Suc(out)
            return out
        case VId(a, x, y):
            return Id(readback(depth, a), readback(depth, x), readback(depth, y))
        case VRefl(x):
            return Refl(readback(depth, x))
        case VNeutral(n):
            return readback_neutral(depth, n)
    raise InternalError(f"cannot read back {v!r}")


def readback_neutral(depth: int, n: Neutral) -> Term:
    match n.head:
        case HVar(level):
            if not 0 <= level < depth:
                raise InternalError(f"level {level} escapes depth {depth}")
            out: Term = Var(depth - 1 - level)
        case HConst(name):
            out = Const(name)
    for f in n.spine:
        match f:
            case FApp(arg):
                out = App(out, readback(depth, arg))
            case FFst():
                out = Fst(out)
            case FSnd():
                out = Snd(out)
            case FNatElim(m, z, s):
                out = NatElim(readback(depth, m), readback(depth, z), readback(depth, s), out)
            case FJ(a, x, c, d, y):
                out = J(*(readback(depth, u) for u in (a, x, c, d, y)), out)
    return out


def context_env(depth: int) -> Env:
    """Environment binding every variable of a ``depth``-long context to itself."""
    return tuple(fresh(i) for i in range(depth))


def normalize(depth: int, t: Term, globals_: Optional["GlobalEnv"] = None) -> Term:
    """``readback . evaluate`` in a context of ``depth`` (neutral) variables."""
    return readback(depth, evaluate(context_env(depth), t, globals_))


# --------------------------------------------------------------------------
# typing-rule templates (closed terms evaluated in a small environment)

# (n : Nat) -> U
_NAT_MOTIVE = Pi("n", Nat(), Universe())
# env [C]: (n : Nat) -> C n -> C (suc n)
_NAT_STEP = Pi("n", Nat(), Pi("ih", App(Var(1), Var(0)), App(Var(2), Suc(Var(1)))))
# env [A, a]: (y : A) -> Id A a y -> U
_J_MOTIVE = Pi("y", Var(1), Pi("p", Id(Var(2), Var(1), Var(0)), Universe()))


def nat_motive_type() -> Value:
    return evaluate((), _NAT_MOTIVE)


def nat_step_type(motive: Value) -> Value:
    return evaluate((motive,), _NAT_STEP)


def j_motive_type(a: Value, x: Value) -> Value:
    return evaluate((a, x), _J_MOTIVE)
