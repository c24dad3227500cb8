"""Curves, splittings, Richelot's transformation, Z and the pullback matrix."""

import random
import re
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kowtower.exactfield import QQ, QQi, Poly, param_field, param_generators
from kowtower.genus2 import (
    CurveError,
    HyperCurve,
    QuadSplit,
    RichelotError,
    affine_change,
    affine_twist_relation,
    bracket,
    correspondence,
    curve_from_poly,
    dual_splitting,
    eval_bivar,
    make_splitting,
    pullback_matrix,
    richelot_trace_pullback,
    richelot_transform,
    split_delta,
    translation_pullback,
    twist_pullback,
)
from kowtower.igusa import curve_invariants, weighted_equal
from kowtower.kowtop import curve_C1, curve_C2, kowalewski_velocity_ttilde, ttilde_to_t

rats = st.fractions(min_value=-9, max_value=9, max_denominator=7)


def quad(fld, a, b, c):
    return Poly(fld, [c, b, a])


def test_image_is_twist_of_c1_symbolic():
    H, I2 = param_generators()
    c2, s = curve_C2(H, I2)
    r = richelot_transform(c2, s)
    assert r.delta == param_field().one
    c1 = curve_C1(H, I2)
    moved = affine_change(r.image, -H, 1)
    assert moved.f == c1.f or moved.f == -c1.f
    # the Z model is the -1 twist of the image
    assert r.z_model.f == -r.image.f


def test_canonical_splitting_shape():
    H, I2 = param_generators()
    c2, s = curve_C2(H, I2)
    x = Poly.x(param_field())
    assert s.G1 == x
    assert s.G3 == s.G2 - 1
    assert s.product() == c2.f


def _check_duality(s: QuadSplit):
    r = richelot_transform(HyperCurve(s.product()), s) if s.product().degree in (5, 6) else None
    G = s.factors
    L = (bracket(G[1], G[2]), bracket(G[2], G[0]), bracket(G[0], G[1]))
    d = split_delta(s)
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        assert bracket(L[j], L[k]) == G[i].scale(2 * d)
    if r is not None:
        assert r.factors == L


def test_bracket_duality_canonical_symbolic():
    H, I2 = param_generators()
    _check_duality(curve_C2(H, I2)[1])


def test_bracket_duality_random_rational():
    rng = random.Random(11)
    for _ in range(100):
        cs = [Fraction(rng.randint(-30, 30), rng.randint(1, 9)) for _ in range(9)]
        s = QuadSplit(quad(QQ, *cs[:3]), quad(QQ, *cs[3:6]), quad(QQ, *cs[6:]))
        _check_duality(s)


def test_delta_matches_sympy_determinant():
    rng = random.Random(3)
    for _ in range(20):
        cs = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(9)]
        s = QuadSplit(quad(QQ, *cs[:3]), quad(QQ, *cs[3:6]), quad(QQ, *cs[6:]))
        M = sympy.Matrix(3, 3, [sympy.Rational(c.numerator, c.denominator) for c in cs])
        assert split_delta(s) == M.det()


def test_degenerate_delta_rejected():
    x = Poly.x(QQ)
    G1 = x * x - 1
    G2 = x * x - 4
    G3 = G1.scale(2) - G2  # rows linearly dependent
    c = HyperCurve(G1 * G2 * G3)
    with pytest.raises(RichelotError, match="delta"):
        richelot_transform(c, QuadSplit(G1, G2, G3))


def test_curve_validation():
    x = Poly.x(QQ)
    with pytest.raises(CurveError, match="degree"):
        curve_from_poly(x * x * x)
    with pytest.raises(CurveError, match="squarefree"):
        curve_from_poly((x - 1) * (x - 1) * x * (x + 1) * (x + 2))
    with pytest.raises(RichelotError):
        make_splitting(HyperCurve(x * (x - 1) * (x + 1) * (x - 2) * (x + 2)), x, x - 1, x + 1)


@pytest.mark.parametrize("h,k,name", [(Fraction(1, 2), 1, "4H² − I2 = 0"), (1, 0, "I2 = 0"),
                                      (1, 4, "I2 = 4"), (0, 4, "I2 = 4"),
                                      (Fraction(1, 2), 5, "4H² − I2 + 4 = 0")])
def test_degenerate_parameters(h, k, name):
    with pytest.raises(CurveError, match=re.escape(name)):
        curve_C2(h, k)


@settings(max_examples=25, deadline=None)
@given(rats, rats)
def test_image_is_twist_of_c1_specializations(h, k):
    try:
        c2, s = curve_C2(h, k)
    except CurveError:
        return
    r = richelot_transform(c2, s)
    rel = affine_twist_relation(r.image, curve_C1(h, k))
    assert rel is not None
    a, t = rel
    assert a == -h and t in (1, -1)


def test_affine_twist_relation_round_trip():
    c1 = curve_C1(1, 2)
    moved = affine_change(c1, Fraction(2, 3), -5)
    a, t = affine_twist_relation(c1, moved)
    assert (a, t) == (Fraction(2, 3), -5)
    assert affine_twist_relation(c1, curve_C2(1, 2)[0]) is None


def test_dual_step_returns_to_start():
    c2, s = curve_C2(Fraction(3, 2), 5)
    r = richelot_transform(c2, s)
    for model in ("image", "z"):
        base = r.image if model == "image" else r.z_model
        back = richelot_transform(base, dual_splitting(r, model))
        assert weighted_equal(curve_invariants(back.image).weighted, curve_invariants(c2).weighted)


def test_correspondence_relations_hold_at_points():
    """Both relations of Z vanish at (x, X) pairs computed from the fiber."""
    c2, s = curve_C2(1, 2)
    r = richelot_transform(c2, s)
    Z = correspondence(c2, s, r)
    x0 = Fraction(3, 7)
    fib = Z.fiber_over_x(x0)
    sx = sympy.Symbol("X")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * sx ** k for k, c in enumerate(fib.coeffs))
    for X0 in sympy.solve(expr, sx):
        val = sum(sympy.Rational(v.numerator, v.denominator) * x0 ** i * X0 ** j
                  for (i, j), v in Z.rel1.items())
        assert sympy.simplify(val) == 0
        # second relation squared: (G1 L1 (x - X))^2 = f(x) * (-F/delta)(X)
        g1 = s.G1(x0)
        l1 = sum(sympy.Rational(c.numerator, c.denominator) * X0 ** k for k, c in enumerate(r.L1.coeffs))
        F = sum(sympy.Rational(c.numerator, c.denominator) * X0 ** k for k, c in enumerate(r.z_model.f.coeffs))
        fx = c2.f(x0)
        assert sympy.simplify((g1 * l1 * (x0 - X0)) ** 2 - fx * F) == 0
    assert eval_bivar(Z.rel2, x0, Fraction(1, 5)) == Z.second_relation(x0, Fraction(1, 5))


def test_pullback_matrix_maps_dubrovin_velocity_exactly():
    pb = pullback_matrix(Fraction(3, 2))
    v2 = (QQi.zero, -QQi.one)  # (0, -sqrt 2) in units of sqrt 2
    v1 = pb.transport(v2)
    assert v1 == (QQi.zero, QQi.i)  # (0, sqrt(-2)) in the same units
    # Kowalewski's (0, i) in t~ becomes (0, i sqrt 2) in t
    k = ttilde_to_t(kowalewski_velocity_ttilde())
    assert k.coords == v1 and k.sqrt2_power == 1
    assert pb.det() == -QQi.one


def test_pullback_composition_matches_parts():
    """trace, then the translation by -H, then the twist by i assemble the matrix."""
    for H in (Fraction(5, 3), Fraction(-2), Fraction(0)):
        chain = richelot_trace_pullback(QQi).then(translation_pullback(-H, QQi)).then(
            twist_pullback(QQi.i, QQi))
        assert chain.matrix == pullback_matrix(H).matrix
        assert chain.source_basis == ("dxi/eta", "xi dxi/eta")
        assert chain.target_basis == ("dx/u", "x dx/u")
    with pytest.raises(ValueError, match="basis"):
        translation_pullback(1, QQi).then(translation_pullback(1, QQi))
