"""Exact fields and polynomials, checked against sympy as an independent oracle."""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kowtower.exactfield import (
    QQ,
    QQi,
    FieldMismatchError,
    GaussianRational,
    PoleError,
    Poly,
    elem_from_json,
    elem_to_json,
    field_from_name,
    is_squarefree,
    param_field,
    param_generators,
    param_specialize,
    parse_rational,
    poly_discriminant,
    poly_from_json,
    poly_gcd,
    poly_to_json,
    poly_xgcd,
    resultant,
    specialize_poly,
)

X = sympy.Symbol("x")
rats = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussianRational, rats, rats)
coeff_lists = st.lists(rats, min_size=1, max_size=7)


def to_sympy(p: Poly):
    cs = [sympy.Rational(c.numerator, c.denominator) for c in p.coeffs]
    return sympy.Poly(list(reversed(cs)) or [0], X, domain="QQ")


def from_fracs(cs):
    return Poly(QQ, cs)


@given(gauss, gauss, gauss)
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == GaussianRational(1)
        assert (b / a) * a == b


def test_gaussian_i_squared():
    i = QQi.i
    assert i * i == -QQi.one
    assert complex(GaussianRational(Fraction(1, 2), -3)) == complex(0.5, -3)


@given(coeff_lists, coeff_lists)
def test_divmod_matches_sympy(a, b):
    p, q = from_fracs(a), from_fracs(b)
    if not q:
        with pytest.raises(ZeroDivisionError):
            divmod(p, q)
        return
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    assert rem.degree < q.degree or rem.is_zero()
    sq, sr = sympy.div(to_sympy(p), to_sympy(q))
    assert to_sympy(quo) == sq and to_sympy(rem) == sr


@settings(max_examples=60)
@given(coeff_lists, coeff_lists)
def test_gcd_and_xgcd(a, b):
    p, q = from_fracs(a), from_fracs(b)
    if not p and not q:
        return
    g = poly_gcd(p, q)
    assert to_sympy(g) == sympy.gcd(to_sympy(p), to_sympy(q)).monic()
    g2, s, t = poly_xgcd(p, q)
    assert s * p + t * q == g2


@settings(max_examples=60)
@given(st.lists(rats, min_size=2, max_size=6), st.lists(rats, min_size=2, max_size=5))
def test_resultant_matches_sympy(a, b):
    p, q = from_fracs(a), from_fracs(b)
    if p.degree < 1 or q.degree < 1:
        return
    assert resultant(p, q) == sympy.resultant(to_sympy(p), to_sympy(q))


@settings(max_examples=60)
@given(st.lists(rats, min_size=3, max_size=7))
def test_discriminant_matches_sympy(a):
    p = from_fracs(a)
    if p.degree < 2:
        return
    assert poly_discriminant(p) == sympy.discriminant(to_sympy(p))
    assert is_squarefree(p) == (sympy.discriminant(to_sympy(p)) != 0)


def test_squarefree_examples():
    x = Poly.x(QQ)
    assert not is_squarefree((x - 1) * (x - 1) * (x + 2))
    assert is_squarefree(x * (x - 1) * (x + 2))


def test_field_mismatch_is_an_error():
    with pytest.raises(FieldMismatchError):
        Poly(QQ, [1, 2]) * Poly(param_field(), [1, 2]) + Poly(QQi, [1])


def test_param_field_normalizes_and_specializes():
    H, I2 = param_generators()
    e = (H * H - I2) / (H - I2) * (H - I2)
    assert e == H * H - I2
    assert param_specialize(e, 3, 5) == GaussianRational(4)
    with pytest.raises(PoleError):
        param_specialize(1 / (H - 1), 1, 2)


def test_specialize_poly_commutes_with_arithmetic():
    H, I2 = param_generators()
    fld = param_field()
    x = Poly.x(fld)
    p = x * x + x.scale(2 * H) + I2 / 4
    q = x - H
    for h, k in [(1, 2), (Fraction(3, 2), 5)]:
        assert specialize_poly(p * q, h, k) == specialize_poly(p, h, k) * specialize_poly(q, h, k)


@given(rats)
def test_rational_round_trip(q):
    assert parse_rational(elem_to_json(q)) == q


@pytest.mark.parametrize("bad", ["1.5", "2e3", "abc", "1/0"])
def test_parse_rational_refuses_floats_and_garbage(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_rational(bad)


def test_json_round_trip_exact():
    H, I2 = param_generators()
    fld = param_field()
    p = Poly(fld, [H / (I2 + 1), QQi.i, 1])
    data = poly_to_json(p)
    assert poly_from_json(fld, data) == p
    g = GaussianRational(Fraction(1, 3), -2)
    assert elem_from_json(QQi, elem_to_json(g)) == g
    assert field_from_name("QQ(i)") is QQi
