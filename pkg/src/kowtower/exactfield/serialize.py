"""JSON encoding of exact field elements and polynomials.

Rationals are ``"p/q"`` strings (``"0/1"`` for zero), Gaussian rationals are
``{"re": .., "im": ..}``, polynomials are ascending coefficient arrays and
fraction-field elements are nested ``{"num": [...], "den": [...]}`` trees.
Decoding needs the target field, since the encoding is not self-describing.
"""

from __future__ import annotations

from fractions import Fraction

from .fields import QQ, QQi, FractionField, RatFunc, RealField, param_field, real_field
from .gaussian import GaussianRational
from .poly import Poly


def rational_to_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s) -> Fraction:
    """Parse ``"p/q"`` or an integer string; floats are rejected."""
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    if not isinstance(s, str):
        raise ValueError(f"expected a rational string, got {s!r}")
    text = s.strip()
    if any(ch in text for ch in ".eE") and "/" not in text:
        raise ValueError(f"floating-point literal {s!r} is not an exact rational")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid rational {s!r}") from exc


def elem_to_json(x):
    if isinstance(x, RatFunc):
        return {"num": poly_to_json(x.num), "den": poly_to_json(x.den)}
    if isinstance(x, GaussianRational):
        return {"re": rational_to_str(x.re), "im": rational_to_str(x.im)}
    if isinstance(x, (int, Fraction)):
        return rational_to_str(x)
    if hasattr(x, "_mpf_"):
        return {"float": str(x)}
    raise TypeError(f"cannot serialize {type(x).__name__}")


def elem_from_json(field, data):
    if isinstance(field, FractionField):
        return RatFunc(field, poly_from_json(field.base, data["num"]),
                       poly_from_json(field.base, data["den"]), _canonical=True)
    if field is QQi:
        return GaussianRational(parse_rational(data["re"]), parse_rational(data["im"]))
    if field is QQ:
        return parse_rational(data)
    if isinstance(field, RealField):
        return field.ctx.mpf(data["float"])
    raise TypeError(f"unsupported field {field!r}")


def poly_to_json(p: Poly) -> list:
    return [elem_to_json(c) for c in p.coeffs]


def poly_from_json(field, data) -> Poly:
    return Poly(field, [elem_from_json(field, c) for c in data])


def field_to_name(field) -> str:
    return field.name


def field_from_name(name: str):
    if name == "QQ":
        return QQ
    if name == "QQ(i)":
        return QQi
    if name == param_field().name:
        return param_field()
    if name == param_field().base.name:
        return param_field().base
    if name.startswith("RR"):
        return real_field(int(name[2:]))
    raise ValueError(f"unknown field {name!r}")
