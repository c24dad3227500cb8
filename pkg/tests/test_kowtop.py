"""The top: exact first integrals, RK4 drift, the Lax spectral identity,
the curves C1/C2, the xi-chart and the velocity bookkeeping."""

import cmath
from fractions import Fraction

import numpy as np
import pytest
import sympy

from kowtower.exactfield import QQ, QQi
from kowtower.kowtop import (
    TopError,
    TopState,
    c2_value,
    canonical_velocities,
    curve_C1,
    curve_C2,
    directional_derivative,
    dubrovin_velocity_omega,
    integrate_top,
    invariants_of,
    lax_matrix,
    omega_to_canonical,
    random_state,
    spectral_mus,
    spectral_residual,
    spectral_to_canonical,
    ttilde_to_t,
    xi_dynamic_residual,
    xi_variables,
)

S0 = TopState((1.0, 0.0, 1.0), (0.0, 1.0, 0.0))


def test_invariants_at_reference_state():
    inv = invariants_of(TopState((1, 0, 1), (0, 1, 0)))
    assert (inv.H, inv.I1, inv.I2, inv.gamma) == (Fraction(3, 2), 0, 5, 1)


@pytest.mark.parametrize("name", ["H", "I1", "I2", "gamma"])
def test_first_integrals_are_exact(name):
    rng = np.random.default_rng(4)
    for _ in range(5):
        s = TopState(tuple(Fraction(int(v), 7) for v in rng.integers(-20, 20, 3)),
                     tuple(Fraction(int(v), 5) for v in rng.integers(-20, 20, 3)))
        assert directional_derivative(lambda t: getattr(invariants_of(t), name), s) == 0


def test_rk4_drift_over_ten_time_units():
    tr = integrate_top(S0, 10.0, 1e-3)
    drift = tr.drift()
    assert max(drift.values()) < 1e-7
    assert len(tr.t) == 10001


def test_integrate_preconditions():
    with pytest.raises(TopError, match="violates"):
        integrate_top(TopState((1.0, 0.0, 1.0), (1.0, 1.0, 0.0)), 1.0, 1e-3)
    with pytest.raises(ValueError):
        integrate_top(S0, 1.0, 0.0)
    with pytest.raises(TopError):
        TopState((1, 2), (0, 1, 0))


def test_time_reversal():
    fwd = integrate_top(S0, 1.0, 1e-3)
    back = integrate_top(fwd.state(-1), 1.0, -1e-3)
    assert np.max(np.abs(back.states[-1] - fwd.states[0])) < 1e-10


def test_spectral_identity_and_negative_control():
    rng = np.random.default_rng(0)
    worst_on, worst_off = 0.0, 0.0
    for _ in range(50):
        lam = complex(*rng.normal(size=2))
        mu = complex(*rng.normal(size=2))
        worst_on = max(worst_on, spectral_residual(random_state(rng), lam, mu))
        worst_off = max(worst_off, spectral_residual(random_state(rng, constrained=False), lam, mu))
    assert worst_on <= 1e-10
    assert worst_off > 1e-4
    with pytest.raises(TopError):
        lax_matrix(S0, 0)


def test_spectral_points_land_on_c2():
    H, I2 = 1.5, 5.0
    for z in (0.3 + 0.2j, -1.1 + 0.7j, 2.0 - 0.4j):
        for mu in spectral_mus(z, H, I2):
            x, u = spectral_to_canonical(z, mu, H, I2)
            assert abs(u * u - c2_value(x, H, I2)) <= 1e-10 * max(1.0, abs(u) ** 2)
    with pytest.raises(TopError, match="off the spectral curve"):
        spectral_to_canonical(0.5, 10.0, H, I2)


def test_curves_match_stated_polynomials():
    xs, h, k = sympy.symbols("x h k")
    h0, k0 = sympy.Rational(3, 2), 5
    c1 = 2 * xs * ((xs - h) ** 2 + 1 - k / 4) * ((xs - h) ** 2 - k / 4)
    c2 = xs * (xs ** 2 + 2 * h * xs + k / 4) * (xs ** 2 + 2 * h * xs - 1 + k / 4)
    for ours, ref in ((curve_C1(Fraction(3, 2), 5).f, c1), (curve_C2(Fraction(3, 2), 5)[0].f, c2)):
        expect = sympy.Poly(ref.subs({h: h0, k: k0}), xs).all_coeffs()[::-1]
        assert [sympy.Rational(c.numerator, c.denominator) for c in ours.coeffs] == expect
    assert curve_C1(1, 2).field is QQ


def test_xi_chart_stays_on_c1():
    tr = integrate_top(S0, 2.0, 1e-2)
    checked = 0
    for k in range(len(tr.t)):
        s = tr.state(k)
        if abs(s.l[1]) < 0.05:
            continue
        xi_variables(s, tol=1e-6)
        checked += 1
    assert checked > 100
    with pytest.raises(TopError, match="l2 = 0"):
        xi_variables(S0)


def test_xi_chart_off_constraint_fails():
    s = random_state(np.random.default_rng(2), constrained=False)
    assert xi_dynamic_residual(s) > 1e-3


def test_velocity_bookkeeping():
    v2, v1 = canonical_velocities()
    assert omega_to_canonical(dubrovin_velocity_omega()) == v2
    n2, n1 = v2.numeric(), v1.numeric()
    assert abs(n2[1] + 2 ** 0.5) < 1e-15 and n2[0] == 0
    assert abs(n1[1] - cmath.sqrt(-2)) < 1e-15
    assert v1.coords == (QQi.zero, QQi.i)
    with pytest.raises(ValueError):
        ttilde_to_t(v1)
