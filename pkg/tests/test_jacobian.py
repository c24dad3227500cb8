"""Exact Cantor arithmetic, checked against interpolation oracles built from
rational points on a curve of the form y^2 = g(x)^2 + c * prod(x - a_i)."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kowtower.exactfield import QQ, Poly
from kowtower.genus2 import HyperCurve
from kowtower.jacobian import (
    JacobianError,
    class_from_points,
    identity,
    mumford_make,
    scalar_mul,
    two_torsion_from_factor,
)
from kowtower.kowtop import curve_C2

X = Poly.x(QQ)
A = [Fraction(v) for v in (-2, -1, 0, 1, 3)]
G = X * X - X + 2


def _curve():
    prod = Poly(QQ, [1])
    for a in A:
        prod = prod * (X - a)
    return HyperCurve(G * G + prod)


CURVE = _curve()
POINTS = [(a, s * G(a)) for a in A for s in (1, -1)]


def _pt(k):
    return class_from_points([POINTS[k]], CURVE)


def test_points_on_curve():
    for x0, y0 in POINTS:
        assert CURVE.f(x0) == y0 * y0
    with pytest.raises(JacobianError):
        class_from_points([(Fraction(0), Fraction(1))], CURVE)


def test_sum_of_two_points_is_interpolation():
    (x1, y1), (x2, y2) = POINTS[0], POINTS[4]
    D = _pt(0) + _pt(4)
    slope = (y2 - y1) / (x2 - x1)
    assert D.u == (X - x1) * (X - x2)
    assert D.v == Poly(QQ, [y1 - slope * x1, slope])


def test_double_of_point_is_tangent():
    x0, y0 = POINTS[2]
    D = _pt(2) + _pt(2)
    assert D.u == (X - x0) * (X - x0)
    tangent = CURVE.f.derivative()(x0) / (2 * y0)
    assert D.v == Poly(QQ, [y0 - tangent * x0, tangent])


def test_inverse_and_identity():
    for k in range(len(POINTS)):
        P = _pt(k)
        assert (P + (-P)).is_identity()
        assert P + identity(CURVE) == P
    # the hyperelliptic conjugate is the inverse
    assert (_pt(0) + _pt(1)).is_identity()


idx = st.integers(min_value=0, max_value=len(POINTS) - 1)


@settings(max_examples=30, deadline=None)
@given(idx, idx, idx, idx)
def test_group_axioms(i, j, k, m):
    P, Q, R = _pt(i) + _pt(m), _pt(j), _pt(k)
    assert P + Q == Q + P
    assert (P + Q) + R == P + (Q + R)
    S = P + Q + R
    assert S.u.degree <= 2 and S.u.lc == 1
    assert not ((S.v * S.v - CURVE.f) % S.u)


@settings(max_examples=10, deadline=None)
@given(idx, st.integers(min_value=-5, max_value=7))
def test_scalar_mul_matches_repeated_addition(i, n):
    P = _pt(i) + _pt((i + 3) % len(POINTS))
    acc = identity(CURVE)
    for _ in range(abs(n)):
        acc = acc + (P if n >= 0 else -P)
    assert scalar_mul(n, P) == acc


def test_mumford_make_validation():
    with pytest.raises(JacobianError, match="monic"):
        mumford_make(X.scale(2), Poly(QQ, []), CURVE)
    with pytest.raises(JacobianError, match="divide"):
        mumford_make(X - 7, Poly(QQ, [1]), CURVE)
    x0, y0 = POINTS[0]
    assert mumford_make(X - x0, Poly(QQ, [y0]), CURVE) == _pt(0)
    sextic = HyperCurve(X * (X - 1) * (X - 2) * (X - 3) * (X - 4) * (X - 5))
    with pytest.raises(JacobianError, match="odd-degree"):
        identity(sextic) + identity(sextic)


@pytest.mark.parametrize("h,k", [(1, 2), (Fraction(3, 2), 5)])
def test_kernel_classes_of_canonical_splitting(h, k):
    c2, s = curve_C2(h, k)
    cls = [two_torsion_from_factor(g, c2).cls for g in s.factors]
    for D in cls:
        assert not D.is_identity()
        assert (D + D).is_identity()
    assert cls[0] + cls[1] == cls[2]
    # a factor that does not divide f is rejected
    with pytest.raises(JacobianError):
        two_torsion_from_factor(X - 100, c2)


def test_mumford_json():
    D = _pt(0) + _pt(4)
    data = D.to_json("C")
    assert data["curve_id"] == "C"
    assert len(data["u"]) == 3
