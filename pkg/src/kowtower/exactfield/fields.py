"""Field objects: Q, Q(i), univariate fraction fields over them, and a
software-float real field used by the numeric tower mode.

The parameter field Q(i)(H)(I2) is the tower ``FractionField(FractionField(QQi,
"H"), "I2")``; elements are nested normalized fractions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from mpmath.ctx_mp import MPContext

from .gaussian import GaussianRational
from .poly import Poly, poly_gcd


class PoleError(ZeroDivisionError):
    """Raised when specializing an element whose denominator vanishes."""


class RationalField:
    name = "QQ"
    exact = True
    has_i = False
    zero = Fraction(0)
    one = Fraction(1)

    def convert(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, GaussianRational) and x.im == 0:
            return x.re
        raise TypeError(f"{type(x).__name__} is not an element of QQ")

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return "QQ"


class GaussianField:
    name = "QQ(i)"
    exact = True
    has_i = True
    zero = GaussianRational(0)
    one = GaussianRational(1)
    i = GaussianRational(0, 1)

    def convert(self, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        raise TypeError(f"{type(x).__name__} is not an element of QQ(i)")

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return "QQi"


QQ = RationalField()
QQi = GaussianField()


class RatFunc:
    """Element num/den of a univariate fraction field, kept in canonical form:
    gcd(num, den) = 1 and den monic."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: "FractionField", num: Poly, den: Poly | None = None,
                 _canonical: bool = False):
        if den is None:
            den = Poly._raw(field.base, [field.base.one])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _canonical:
            num, den = _normalize(num, den)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    def _coerce(self, other):
        if isinstance(other, RatFunc) and other.field == self.field:
            return other
        try:
            return self.field.convert(other)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.field, self.num + o.num, self.den)
        return RatFunc(self.field, self.num * o.den + o.num * self.den,
                       self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.field, -self.num, self.den, _canonical=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.degree == 0 and o.den.degree == 0:
            return RatFunc(self.field, self.num * o.num,
                           self.den, _canonical=True)
        return RatFunc(self.field, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.field, self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.field, self.num ** n, self.den ** n, _canonical=True)

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den.degree == 0 and self.num.degree <= 0:
            return hash(self.num.coeff(0))
        return hash((self.num.coeffs, self.den.coeffs))

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        var = self.field.var
        n = self.num.format(var)
        if self.den.degree == 0:
            return n
        return f"({n})/({self.den.format(var)})"


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return num, Poly._raw(den.field, [den.field.one])
    if den.degree > 0 and num.degree > 0:
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
    lc = den.lc
    if lc != den.field.one:
        inv = den.field.one / lc
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


class FractionField:
    """K(var) for a base field K."""

    exact = True

    def __init__(self, base, var: str):
        self.base = base
        self.var = var
        self.has_i = base.has_i
        self.name = f"{base.name}({var})"
        one = Poly._raw(base, [base.one])
        self.zero = RatFunc(self, Poly._raw(base, []), one, _canonical=True)
        self.one = RatFunc(self, one, one, _canonical=True)
        self.gen = RatFunc(self, Poly._raw(base, [base.zero, base.one]), one,
                           _canonical=True)
        if self.has_i:
            self.i = self.convert(base.i)

    def __eq__(self, other):
        return (isinstance(other, FractionField) and self.var == other.var
                and self.base == other.base)

    def __hash__(self):
        return hash((self.var, self.base.name))

    def __repr__(self):
        return self.name

    def convert(self, x) -> RatFunc:
        if isinstance(x, RatFunc) and x.field == self:
            return x
        c = self.base.convert(x)
        return RatFunc(self, Poly._raw(self.base, [c] if c else []),
                       Poly._raw(self.base, [self.base.one]), _canonical=True)

    def from_polys(self, num, den=None) -> RatFunc:
        num = num if isinstance(num, Poly) else Poly(self.base, num)
        if den is not None and not isinstance(den, Poly):
            den = Poly(self.base, den)
        return RatFunc(self, num, den)

    def generators(self) -> list:
        """All transcendental generators of the tower, bottom-up."""
        below = self.base.generators() if isinstance(self.base, FractionField) else []
        return [self.convert(g) for g in below] + [self.gen]

    def variables(self) -> list[str]:
        below = self.base.variables() if isinstance(self.base, FractionField) else []
        return below + [self.var]

    def specialize(self, e, values: dict):
        """Evaluate e at {var: value}, bottom-up through the tower."""
        e = self.convert(e)
        v = values[self.var]
        num = self._eval(e.num, v, values)
        den = self._eval(e.den, v, values)
        if not den:
            raise PoleError(f"denominator vanishes at {self.var} = {v}")
        return num / den

    def _eval(self, p: Poly, v, values):
        if isinstance(self.base, FractionField):
            cs = [self.base.specialize(c, values) for c in p.coeffs]
        else:
            cs = list(p.coeffs)
        acc = 0
        for c in reversed(cs):
            acc = acc * v + c
        return acc


class RealField:
    """Software-float reals with a private mpmath context (no global state)."""

    exact = False
    has_i = False

    def __init__(self, prec: int = 128):
        self.prec = prec
        self.ctx = MPContext()
        self.ctx.prec = prec
        self.name = f"RR{prec}"
        self.zero = self.ctx.mpf(0)
        self.one = self.ctx.mpf(1)

    def __eq__(self, other):
        return isinstance(other, RealField) and other.prec == self.prec

    def __hash__(self):
        return hash(("RR", self.prec))

    def __repr__(self):
        return self.name

    def convert(self, x):
        ctx = self.ctx
        if isinstance(x, ctx.mpf):
            return x
        if isinstance(x, Fraction):
            return ctx.mpf(x.numerator) / x.denominator
        if isinstance(x, GaussianRational):
            if x.im != 0:
                raise TypeError("complex value in a real field")
            return self.convert(x.re)
        if isinstance(x, (int, float)):
            return ctx.mpf(x)
        if hasattr(x, "_mpf_"):
            return ctx.mpf(x)
        raise TypeError(f"{type(x).__name__} is not convertible to {self.name}")


@lru_cache(maxsize=None)
def real_field(prec: int = 128) -> RealField:
    return RealField(prec)


_PARAM = FractionField(FractionField(QQi, "H"), "I2")


def param_field() -> FractionField:
    """The tower Q(i)(H)(I2)."""
    return _PARAM


def param_generators():
    """(H, I2) as elements of Q(i)(H)(I2)."""
    H, I2 = _PARAM.generators()
    return H, I2


def field_of(x):
    """Smallest supported field containing a scalar."""
    if isinstance(x, RatFunc):
        return x.field
    if isinstance(x, GaussianRational):
        return QQi
    if isinstance(x, (int, Fraction)):
        return QQ
    if hasattr(x, "_mpf_"):
        return real_field(x.context.prec) if hasattr(x, "context") else real_field()
    raise TypeError(f"no field for {type(x).__name__}")


_LEVEL = {"QQ": 0, "QQ(i)": 1}


def common_field(*fields):
    """Join of supported fields along QQ < QQ(i) < QQ(i)(H) < QQ(i)(H)(I2)."""
    best = fields[0]
    for f in fields[1:]:
        if f == best:
            continue
        if _rank(f) > _rank(best):
            best = f
    return best


def _rank(f) -> int:
    if isinstance(f, FractionField):
        return 2 + _rank(f.base)
    if isinstance(f, RealField):
        return 0
    return _LEVEL[f.name]


def param_specialize(e, h, k):
    """Specialize an element of Q(i)(H)(I2) at (H, I2) = (h, k) in Q(i)."""
    h = QQi.convert(h)
    k = QQi.convert(k)
    out = _PARAM.specialize(e, {"H": h, "I2": k})
    return QQi.convert(out)


def specialize_poly(p: Poly, h, k, target=QQ) -> Poly:
    """Specialize a polynomial over Q(i)(H)(I2) coefficientwise.

    ``target`` defaults to QQ; pass QQi when imaginary parts may appear.
    """
    return Poly(target, [param_specialize(c, h, k) for c in p.coeffs])


def to_complex(x) -> complex:
    if isinstance(x, GaussianRational):
        return complex(x)
    if isinstance(x, (int, Fraction)):
        return complex(float(x))
    if isinstance(x, RatFunc):
        if not x.is_constant():
            raise TypeError("cannot convert a non-constant rational function")
        return to_complex(x.num.coeff(0))
    return complex(x)
