"""Dense univariate polynomials over an arbitrary field object.

A field object only needs ``zero``, ``one`` and ``convert``; elements need the
four arithmetic operators, ``==`` and truthiness.  Coefficients are stored in
ascending degree with trailing zeros stripped, so the zero polynomial has an
empty coefficient tuple and degree -1.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class FieldMismatchError(TypeError):
    pass


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs: Iterable = ()):
        conv = field.convert
        cs = [conv(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def _raw(cls, field, coeffs: list) -> "Poly":
        # coefficients already in the field; only strip zeros
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        p = object.__new__(cls)
        object.__setattr__(p, "field", field)
        object.__setattr__(p, "coeffs", tuple(coeffs))
        return p

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def x(cls, field) -> "Poly":
        return cls(field, [0, 1])

    @classmethod
    def constant(cls, field, c) -> "Poly":
        return cls(field, [c])

    @classmethod
    def from_roots(cls, field, roots: Sequence, lead=1) -> "Poly":
        p = cls(field, [lead])
        for r in roots:
            p = p * cls(field, [-field.convert(r), 1])
        return p

    # -- basic queries --------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        if not self.coeffs:
            return self.field.zero
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def coeff(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.field.zero

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- arithmetic -----------------------------------------------------
    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError(
                    f"polynomials over {self.field} and {other.field}")
            return other
        try:
            return Poly._raw(self.field, [self.field.convert(other)])
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Poly._raw(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return Poly._raw(self.field, [])
        zero = self.field.zero
        out = [zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return Poly._raw(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = Poly._raw(self.field, [self.field.one])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Poly":
        c = self.field.convert(c)
        return Poly._raw(self.field, [c * a for a in self.coeffs])

    def __divmod__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        db = o.degree
        inv = self.field.one / o.lc
        if len(rem) - 1 < db:
            return Poly._raw(self.field, []), self
        quo = [self.field.zero] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] * inv
            quo[k] = c
            if c:
                for j, bj in enumerate(o.coeffs):
                    rem[k + j] = rem[k + j] - c * bj
        return Poly._raw(self.field, quo), Poly._raw(self.field, rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def derivative(self) -> "Poly":
        return Poly._raw(self.field,
                         [c * k for k, c in enumerate(self.coeffs) if k > 0])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = self.field.one / self.lc
        return Poly._raw(self.field, [c * inv for c in self.coeffs])

    def compose(self, q: "Poly") -> "Poly":
        """Return self(q(x))."""
        acc = Poly._raw(self.field, [])
        for c in reversed(self.coeffs):
            acc = acc * q + c
        return acc

    def shift(self, a) -> "Poly":
        """Return self(x + a)."""
        return self.compose(Poly(self.field, [a, 1]))

    def map_coeffs(self, fn, field) -> "Poly":
        return Poly(field, [fn(c) for c in self.coeffs])

    # -- comparison / display -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        try:
            c = self.field.convert(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == ((c,) if c else ())

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({self.field}, {list(self.coeffs)!r})"

    def __str__(self):
        return self.format("x")

    def format(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            cs = str(c)
            if mono and cs == "1":
                terms.append(mono)
            elif mono and cs == "-1":
                terms.append("-" + mono)
            elif mono:
                terms.append(f"{_wrap(cs)}*{mono}")
            else:
                terms.append(_wrap(cs) if len(self.coeffs) > 1 else cs)
        return " + ".join(terms)


def _wrap(cs: str) -> str:
    if " " in cs or "*" in cs or "+" in cs[1:] or "-" in cs[1:]:
        return f"({cs})"
    return cs


def poly_arith(p: Poly, q: Poly, op: str):
    """Dispatch ``add``, ``mul``, ``divrem`` or ``derivative`` (which ignores q)."""
    if op == "derivative":
        return p.derivative()
    if q is not None and isinstance(q, Poly) and q.field != p.field:
        raise FieldMismatchError(f"polynomials over {p.field} and {q.field}")
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    if op == "divrem":
        return divmod(p, q)
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    a, b = p, q
    while b:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(p: Poly, q: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with g = s*p + t*q and g monic."""
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    field = p.field
    zero, one = Poly._raw(field, []), Poly._raw(field, [field.one])
    r0, r1 = p, q
    s0, s1 = one, zero
    t0, t1 = zero, one
    while r1:
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    inv = field.one / r0.lc
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def resultant(a: Poly, b: Poly):
    """Resultant over a field via the Euclidean remainder sequence."""
    field = a.field
    if a.is_zero() or b.is_zero():
        return field.zero
    acc = field.one
    while True:
        m, n = a.degree, b.degree
        if n == 0:
            return acc * b.lc ** m
        if m == 0:
            return acc * a.lc ** n
        r = a % b
        if r.is_zero():
            return field.zero
        if (m * n) % 2:
            acc = -acc
        acc = acc * b.lc ** (m - r.degree)
        a, b = b, r


def poly_discriminant(p: Poly):
    """disc(p) = (-1)^(n(n-1)/2) res(p, p') / lc(p)."""
    n = p.degree
    if n < 1:
        raise ValueError("discriminant of a constant polynomial")
    res = resultant(p, p.derivative())
    if (n * (n - 1) // 2) % 2:
        res = -res
    return res / p.lc


def is_squarefree(p: Poly) -> bool:
    if p.degree < 1:
        return True
    return poly_gcd(p, p.derivative()).degree == 0
