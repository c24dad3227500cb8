"""Acceptance criteria 1-9, each at its stated tolerance and time budget.

Every test prints one line ``[acceptance] N PASS|FAIL ...`` to the terminal.
"""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from kowtower.exactfield import QQ, QQi, Poly, param_field, param_generators
from kowtower.genus2 import (
    QuadSplit,
    affine_change,
    bracket,
    correspondence,
    pullback_matrix,
    richelot_transform,
    split_delta,
)
from kowtower.igusa import curve_invariants, isomorphic_over_closure
from kowtower.jacobian import two_torsion_from_factor
from kowtower.kowtop import TopState, curve_C1, curve_C2, integrate_top, random_state, spectral_residual
from kowtower.numverify import NumCtx, kernel_check, mult2_check, num_correspondence, trace_check
from kowtower.numverify.flows import dubrovin_check, flow_transport_check, top_to_curve_check
from kowtower.tower import build_tower, tower_report

SAMPLES = [(1, 2), (Fraction(3, 2), 5), (2, 3), (5, 7), (1, Fraction(1, 2))]


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance] {n} {'PASS' if ok else 'FAIL'} {detail}")
    return emit


def _nz(h, k, prec=None):
    c2, s = curve_C2(h, k)
    r = richelot_transform(c2, s)
    return c2, s, num_correspondence(correspondence(c2, s, r), NumCtx(prec))


def test_1_image_equals_c1(report):
    t0 = time.perf_counter()
    H, I2 = param_generators()
    c2, s = curve_C2(H, I2)
    r = richelot_transform(c2, s)
    x = Poly.x(param_field())
    q = (x - H) * (x - H)
    target = x.scale(2) * (q + 1 - I2 / 4) * (q - I2 / 4)
    moved = affine_change(r.image, -H, 1)  # X~ = X + H
    ok = moved.f == target or moved.f == -target
    dt = time.perf_counter() - t0
    ok = ok and dt < 1.0
    report(1, ok, f"image translated by H equals C1 up to -1 twist, {dt:.2f}s")
    assert ok


def _duality(s):
    G = s.factors
    L = (bracket(G[1], G[2]), bracket(G[2], G[0]), bracket(G[0], G[1]))
    d = split_delta(s)
    return all(bracket(L[j], L[k]) == G[i].scale(2 * d)
               for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)))


def test_2_bracket_duality(report):
    t0 = time.perf_counter()
    H, I2 = param_generators()
    ok = _duality(curve_C2(H, I2)[1])
    rng = random.Random(2)
    for _ in range(100):
        cs = [Fraction(rng.randint(-50, 50), rng.randint(1, 12)) for _ in range(9)]
        ok = ok and _duality(QuadSplit(*(Poly(QQ, [cs[3 * j + 2], cs[3 * j + 1], cs[3 * j]])
                                         for j in range(3))))
    dt = time.perf_counter() - t0
    ok = ok and dt < 10.0
    report(2, ok, f"[Lj, Lk] = 2 delta Gi symbolic + 100 random, {dt:.2f}s")
    assert ok


def test_3_generic_nonisomorphism(report):
    t0 = time.perf_counter()
    ok = True
    for h, k in SAMPLES:
        c1, c2 = curve_C1(h, k), curve_C2(h, k)[0]
        ok = ok and curve_invariants(c1).absolute() != curve_invariants(c2).absolute()
        ok = ok and isomorphic_over_closure(c1, affine_change(c1, 0, -1))
        ok = ok and isomorphic_over_closure(c2, affine_change(c2, 0, -1))
    dt = time.perf_counter() - t0
    ok = ok and dt < 10.0
    report(3, ok, f"C1 !~ C2 at 5 samples, twist controls isomorphic, {dt:.2f}s")
    assert ok


def test_4_kernel_structure(report):
    c2, s = curve_C2(1, 2)
    cls = [two_torsion_from_factor(G, c2).cls for G in s.factors]
    exact = all((D + D).is_identity() for D in cls) and cls[0] + cls[1] == cls[2]
    _, _, nz = _nz(1, 2)
    root = nz.ctx.roots([nz.ctx.mk(c) for c in s.G2.coeffs])[0]
    rep = kernel_check(nz, list(zip(("G1", "G2", "G3"), s.factors)), c2,
                       extra=[("single root of G2", [(root, 0 * root)])])
    control = rep["controls"][0]["distance_from_identity"]
    ok = exact and rep["max_error"] <= 1e-6 and rep["controls"][0]["nonzero"]
    report(4, ok, f"exact 2[Gi] = 0, G1 + G2 = G3; numeric residual {rep['max_error']:.1e} "
                  f"<= 1e-6, control {control:.1e}")
    assert ok


def test_5_mult2(report):
    _, _, nz = _nz(1, 2)
    lo = mult2_check(nz, samples=20, seed=0)
    _, _, nz64 = _nz(1, 2, 64)
    _, _, nz128 = _nz(1, 2, 128)
    mid = mult2_check(nz64, samples=20, seed=0)
    hi = mult2_check(nz128, samples=20, seed=0)
    errs = [lo["max_error"], mid["max_error"], hi["max_error"]]
    ok = errs[0] <= 1e-6 and errs[2] < errs[1] < errs[0]
    report(5, ok, "mult2 max error double/mp64/mp128 = " + ", ".join(f"{e:.1e}" for e in errs))
    assert ok


def test_6_pullback_matrix(report):
    _, _, nz = _nz(1, 2)
    good = trace_check(nz, samples=50, seed=0, degree=1)
    bad = trace_check(nz, samples=50, seed=0, degree=2)
    mapped = pullback_matrix(Fraction(1)).transport((QQi.zero, -QQi.one)) == (QQi.zero, QQi.i)
    ok = good["max_error"] <= 1e-6 and bad["max_error"] > 1e-6 and mapped
    report(6, ok, f"trace S in {{1, X}} {good['max_error']:.1e}; S = X^2 control "
                  f"{bad['max_error']:.1e}; (0, -sqrt2) -> (0, sqrt-2) exact: {mapped}")
    assert ok


def test_7_flow_transport(report):
    t0 = time.perf_counter()
    dub = dubrovin_check(Fraction(3, 2), 5, t_end=0.5, dt=1e-4)
    flow = flow_transport_check(Fraction(3, 2), 5, t_end=0.5, dt=1e-4)
    dt = time.perf_counter() - t0
    ok = dub["max_error"] <= 1e-5 and flow["max_error"] <= 1e-4 and dt < 60.0
    report(7, ok, f"Dubrovin Abel {dub['max_error']:.1e} <= 1e-5; transported "
                  f"{flow['max_error']:.1e} <= 1e-4, {dt:.2f}s")
    assert ok


def test_8_physical_consistency(report):
    s0 = TopState((1.0, 0.0, 1.0), (0.0, 1.0, 0.0))
    drift = integrate_top(s0, 10.0, 1e-3).drift()
    worst_drift = max(drift.values())
    chart = top_to_curve_check(s0, t_end=10.0, dt=1e-3)
    rng = np.random.default_rng(8)
    on, off = 0.0, 0.0
    for _ in range(100):
        lam, mu = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        on = max(on, spectral_residual(random_state(rng), lam, mu))
        off = max(off, spectral_residual(random_state(rng, constrained=False), lam, mu))
    xi_res = chart["max_error"]  # the xi-chart residual on unmasked samples
    ok = worst_drift < 1e-7 and xi_res <= 1e-6 and on <= 1e-10 and off > 1e-10
    report(8, ok, f"drift {worst_drift:.1e}; xi residual {xi_res:.1e}; spectral "
                  f"{on:.1e} (off-constraint {off:.1e})")
    assert ok


def test_9_tower(report):
    t0 = time.perf_counter()
    tw = build_tower(Fraction(3, 2), 5, 5, mode="real-numeric")
    rep = tower_report(tw, samples=20)
    edges_ok = len(rep["edges"]) == 4 and all(e["mult2"]["pass"] for e in rep["edges"])
    curves_ok = len(rep["levels"]) == 5 and all(lv["min_root_gap"] > 0 for lv in rep["levels"])
    ex = build_tower(Fraction(3, 2), 5, 2, mode="exact")
    prov = ex.edges[0].provenance["image_to_C1"]
    pair_ok = (ex.node(1).curve == curve_C1(Fraction(3, 2), 5)
               and ex.node(2).curve.f == curve_C2(Fraction(3, 2), 5)[0].f
               and prov == {"translation": "-3/2", "twist": "1/1"})
    dt = time.perf_counter() - t0
    ok = edges_ok and curves_ok and pair_ok and dt < 120.0
    worst = max(e["mult2"]["max_error"] for e in rep["edges"])
    report(9, ok, f"depth 5: 5 curves, 4 edges, mult2 worst {worst:.1e} at {rep['precision']}; "
                  f"depth-2 exact provenance {prov}, {dt:.2f}s")
    assert ok
