"""Type-directed definitional equality on values.

Laws: beta and delta (via evaluation), the J and natElim computation rules,
and eta for Pi, Sigma and Unit.  There is no eta for Nat or Id.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional

from .nbe import (
    FApp,
    FFst,
    FJ,
    FNatElim,
    FSnd,
    HConst,
    HVar,
    Neutral,
    Value,
    VId,
    VNat,
    VNeutral,
    VPair,
    VPi,
    VRefl,
    VSigma,
    VStar,
    VSuc,
    VUnit,
    VUniverse,
    VZero,
    apply_all,
    apply_value,
    fresh,
    j_motive_type,
    nat_motive_type,
    nat_step_type,
    tick,
    vfst,
    vsnd,
)

if TYPE_CHECKING:
    from .checker import GlobalEnv


class Converter:
    """Decides ``a == b : type`` in a context whose variable types are ``types``.

    ``types[level]`` is the type of the variable at that de Bruijn level.
    """

    def __init__(self, globals_: "GlobalEnv", types: tuple = ()):
        self.globals = globals_
        self.types = tuple(types)

    def under(self, ty: Value) -> "Converter":
        return Converter(self.globals, self.types + (ty,))

    @property
    def depth(self) -> int:
        return len(self.types)

    # -- values at a type

    def conv(self, ty: Value, a: Value, b: Value) -> bool:
        tick()
        match ty:
            case VPi(dom, cod):
                x = fresh(self.depth)
                return self.under(dom).conv(cod(x), apply_value(a, x), apply_value(b, x))
            case VSigma(first, second):
                a1, b1 = vfst(a), vfst(b)
                if not self.conv(first, a1, b1):
                    return False
                return self.conv(second(a1), vsnd(a), vsnd(b))
            case VUnit():
                return True
            case VUniverse():
                return self.conv_type(a, b)
        match a, b:
            case VZero(), VZero():
                return True
            case VSuc(), VSuc():
                while isinstance(a, VSuc) and isinstance(b, VSuc):
                    a, b = a.pred, b.pred
                return self.conv(ty, a, b)
            case VRefl(x), VRefl(y) if isinstance(ty, VId):
                return self.conv(ty.type, x, y)
            case VStar(), VStar():
                return True
            case VNeutral(n), VNeutral(m):
                return self.neutral(n, m) is not None
        return False

    def conv_type(self, a: Value, b: Value) -> bool:
        tick()
        match a, b:
            case VUniverse(), VUniverse():
                return True
            case VUnit(), VUnit():
                return True
            case VNat(), VNat():
                return True
            case (VPi(d1, c1), VPi(d2, c2)) | (VSigma(d1, c1), VSigma(d2, c2)):
                if not self.conv_type(d1, d2):
                    return False
                x = fresh(self.depth)
                return self.under(d1).conv_type(c1(x), c2(x))
            case VId(t1, x1, y1), VId(t2, x2, y2):
                return self.conv_type(t1, t2) and self.conv(t1, x1, x2) and self.conv(t1, y1, y2)
            case VNeutral(n), VNeutral(m):
                return self.neutral(n, m) is not None
        return False

    # -- neutrals

    def head_type(self, n: Neutral) -> Optional[Value]:
        match n.head:
            case HVar(level):
                return self.types[level] if level < len(self.types) else None
            case HConst(name):
                return self.globals.type_of(name)
        return None

    def neutral(self, n: Neutral, m: Neutral) -> Optional[Value]:
        """Compare two neutrals; return their common type, or None if unequal."""
        if n.head != m.head or len(n.spine) != len(m.spine):
            return None
        ty = self.head_type(n)
        if ty is None:
            return None
        prefix: Value = VNeutral(Neutral(n.head))
        for f, g in zip(n.spine, m.spine):
            match f, g:
                case FApp(x), FApp(y):
                    if not isinstance(ty, VPi) or not self.conv(ty.domain, x, y):
                        return None
                    ty = ty.codomain(x)
                case FFst(), FFst():
                    if not isinstance(ty, VSigma):
                        return None
                    ty = ty.first
                case FSnd(), FSnd():
                    if not isinstance(ty, VSigma):
                        return None
                    ty = ty.second(vfst(prefix))
                case FNatElim(m1, z1, s1), FNatElim(m2, z2, s2):
                    if not (
                        self.conv(nat_motive_type(), m1, m2)
                        and self.conv(apply_value(m1, VZero()), z1, z2)
                        and self.conv(nat_step_type(m1), s1, s2)
                    ):
                        return None
                    ty = apply_value(m1, prefix)
                case FJ(a1, x1, c1, d1, y1), FJ(a2, x2, c2, d2, y2):
                    if not (
                        self.conv_type(a1, a2)
                        and self.conv(a1, x1, x2)
                        and self.conv(j_motive_type(a1, x1), c1, c2)
                        and self.conv(apply_all(c1, x1, VRefl(x1)), d1, d2)
                        and self.conv(a1, y1, y2)
                    ):
                        return None
                    ty = apply_all(c1, y1, prefix)
                case _:
                    return None
            prefix = VNeutral(prefix.neutral.push(f))
        return ty


def convertible(globals_: "GlobalEnv", types: tuple, ty: Value, a: Value, b: Value) -> bool:
    """``a`` and ``b`` are definitionally equal at ``ty``."""
    return Converter(globals_, types).conv(ty, a, b)


def convertible_types(globals_: "GlobalEnv", types: tuple, a: Value, b: Value) -> bool:
    return Converter(globals_, types).conv_type(a, b)


def convertible_spine(globals_: "GlobalEnv", types: tuple, n: Neutral, m: Neutral) -> Optional[Value]:
    return Converter(globals_, types).neutral(n, m)

