"""Exact genus-2 Jacobian arithmetic in Mumford representation (Cantor).

Only odd-degree (quintic) models are supported: a class (u, v) stands for
D - deg(u)*oo where D is the effective divisor cut out by u(x) = 0, y = v(x).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .exactfield import Poly, poly_gcd, poly_to_json, poly_xgcd
from .genus2 import HyperCurve


class JacobianError(ValueError):
    pass


@dataclass(frozen=True)
class MumfordClass:
    u: Poly
    v: Poly
    curve: HyperCurve

    def is_identity(self) -> bool:
        return self.u.degree == 0 and self.v.is_zero()

    def __add__(self, other: "MumfordClass") -> "MumfordClass":
        return cantor_add(self, other, self.curve)

    def __neg__(self) -> "MumfordClass":
        return MumfordClass(self.u, (-self.v) % self.u, self.curve)

    def __sub__(self, other: "MumfordClass") -> "MumfordClass":
        return self + (-other)

    def __mul__(self, n: int) -> "MumfordClass":
        return scalar_mul(n, self)

    __rmul__ = __mul__

    def to_json(self, curve_id: str = "") -> dict:
        return {"u": poly_to_json(self.u), "v": poly_to_json(self.v),
                "curve_id": curve_id or self.curve.label}


@dataclass(frozen=True)
class TorsionClass:
    cls: MumfordClass
    factor: Poly


def identity(c: HyperCurve) -> MumfordClass:
    fld = c.field
    return MumfordClass(Poly(fld, [1]), Poly(fld, []), c)


def _require_odd(c: HyperCurve):
    if c.f.degree != 5:
        raise JacobianError("exact Cantor arithmetic needs an odd-degree (quintic) model")


def mumford_make(u: Poly, v: Poly, c: HyperCurve) -> MumfordClass:
    _require_odd(c)
    if u.is_zero() or u.lc != u.field.one:
        raise JacobianError("u must be monic")
    if u.degree > 2:
        raise JacobianError("deg u must be <= 2")
    if not v.is_zero() and v.degree >= max(u.degree, 1):
        raise JacobianError("deg v must be < deg u")
    if (v * v - c.f) % u:
        raise JacobianError("u does not divide v^2 - f")
    return MumfordClass(u, v, c)


def _reduce(u: Poly, v: Poly, c: HyperCurve) -> MumfordClass:
    f = c.f
    v = v % u
    while u.degree > 2:
        u = (f - v * v).exact_div(u).monic()
        v = (-v) % u
    return MumfordClass(u.monic(), v % u.monic(), c)


def cantor_compose(a: MumfordClass, b: MumfordClass) -> tuple[Poly, Poly]:
    """Composition step: (u, v) with u = u1 u2 / d^2, unreduced."""
    u1, v1, u2, v2 = a.u, a.v, b.u, b.v
    f = a.curve.f
    d0, e1, e2 = poly_xgcd(u1, u2)
    if d0.degree == 0:
        d, c1, c2 = d0, e1, e2
        s1, s2, s3 = c1, c2, Poly(f.field, [])
    else:
        d, c1, c2 = poly_xgcd(d0, v1 + v2)
        s1, s2, s3 = c1 * e1, c1 * e2, c2
    u = (u1 * u2).exact_div(d * d)
    v = (s1 * u1 * v2 + s2 * u2 * v1 + s3 * (v1 * v2 + f)).exact_div(d) % u
    return u, v


def cantor_add(a: MumfordClass, b: MumfordClass, c: Optional[HyperCurve] = None) -> MumfordClass:
    c = c or a.curve
    if a.curve.f != c.f or b.curve.f != c.f:
        raise JacobianError("classes live on different curves")
    _require_odd(c)
    u, v = cantor_compose(a, b)
    return _reduce(u, v, c)


def scalar_mul(n: int, a: MumfordClass) -> MumfordClass:
    if n < 0:
        return scalar_mul(-n, -a)
    result = identity(a.curve)
    base = a
    while n:
        if n & 1:
            result = cantor_add(result, base)
        base = cantor_add(base, base)
        n >>= 1
    return result


def reduce_class(a: MumfordClass) -> MumfordClass:
    return _reduce(a.u, a.v, a.curve)


def two_torsion_from_factor(G: Poly, c: HyperCurve) -> TorsionClass:
    """Class (G/lc(G), 0) of the Weierstrass points cut out by a factor G | f."""
    _require_odd(c)
    if G.degree < 0 or G.degree > 2:
        raise JacobianError("factor must have degree <= 2")
    if c.f % G:
        raise JacobianError("G does not divide f")
    u = G.monic()
    return TorsionClass(MumfordClass(u, Poly(c.field, []), c), G)


def class_from_points(points, c: HyperCurve) -> MumfordClass:
    """Sum of [P - oo] over rational points P = (x, y) on c."""
    fld = c.field
    acc = identity(c)
    for x0, y0 in points:
        if c.f(x0) != fld.convert(y0) * y0:
            raise JacobianError(f"point ({x0}, {y0}) is not on the curve")
        acc = cantor_add(acc, MumfordClass(Poly(fld, [-fld.convert(x0), 1]),
                                           Poly(fld, [y0]), c))
    return acc


def is_squarefree_u(u: Poly) -> bool:
    return u.degree < 2 or poly_gcd(u, u.derivative()).degree == 0
