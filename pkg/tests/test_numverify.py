"""Numeric harness: pushes through Z, the kernel, multiplication by 2,
the trace identity and the transported flows."""

import json
from fractions import Fraction

import numpy as np
import pytest

from kowtower.exactfield import param_generators
from kowtower.genus2 import correspondence, richelot_transform
from kowtower.kowtop import TopState, curve_C2
from kowtower.numverify import (
    NumCtx,
    NumericError,
    class_from_points,
    kernel_check,
    mult2_check,
    num_correspondence,
    push_class,
    push_point,
    trace_check,
)
from kowtower.numverify.flows import (
    dubrovin_check,
    flow_transport_check,
    spectral_check,
    top_to_curve_check,
)
from kowtower.numverify.numeric import class_distance, identity_class


def _setup(h=1, k=2, prec=None):
    ctx = NumCtx(prec)
    c2, s = curve_C2(h, k)
    r = richelot_transform(c2, s)
    return c2, s, num_correspondence(correspondence(c2, s, r), ctx)


def test_push_point_images_lie_on_target():
    _, _, nz = _setup()
    rng = np.random.default_rng(1)
    for _ in range(20):
        x, y = nz.source.random_point(rng)
        imgs = push_point((x, y), nz)
        assert len(imgs) == 2
        for q in imgs:
            # direct substitution into the target equation
            assert nz.target.residual(q.x, q.y) <= 1e-9
        conj = push_point((x, -y), nz)
        for q in imgs:
            assert min(abs(q.x - c.x) + abs(q.y + c.y) for c in conj) < 1e-9


def test_push_point_backward_and_bad_direction():
    _, _, nz = _setup()
    rng = np.random.default_rng(2)
    X, Y = nz.target.random_point(rng)
    for q in push_point((X, Y), nz, "backward"):
        assert nz.source.residual(q.x, q.y) <= 1e-9
    with pytest.raises(ValueError):
        push_point((X, Y), nz, "sideways")


def test_weierstrass_point_is_perturbed_and_flagged():
    _, _, nz = _setup()
    imgs = push_point((0j, 0j), nz)  # x = 0 is a root of C2
    assert all("weierstrass_perturbed" in q.flags for q in imgs)
    assert all(q.residual <= 1e-9 for q in imgs)


def _kernel(prec):
    c2, s, nz = _setup(prec=prec)
    ctx = nz.ctx
    root = ctx.roots([ctx.mk(c) for c in s.G2.coeffs])[0]
    return kernel_check(nz, list(zip(("G1", "G2", "G3"), s.factors)), c2,
                        extra=[("single root", [(root, 0 * root)])])


def test_kernel_classes_die_and_control_survives():
    rep = _kernel(None)
    assert rep["pass"] and rep["max_error"] <= 1e-6
    assert rep["controls"][0]["nonzero"]
    hi = _kernel(128)
    assert hi["pass"] and hi["max_error"] <= max(rep["max_error"], 1e-30)


def test_push_class_of_identity():
    _, _, nz = _setup()
    D = class_from_points([], nz.source)
    assert class_distance(push_class(D, nz), identity_class(nz.target)) == 0


def test_mult2_double_and_precision_improves():
    _, _, nz = _setup()
    lo = mult2_check(nz, samples=20, seed=0)
    assert lo["pass"] and lo["max_error"] <= 1e-6
    _, _, nz128 = _setup(prec=128)
    hi = mult2_check(nz128, samples=5, seed=0)
    assert hi["pass"] and hi["precision"] == "mp128"
    assert hi["max_error"] < 1e-6 * lo["max_error"]


def test_trace_identity_and_negative_control():
    _, _, nz = _setup()
    rep = trace_check(nz, samples=50, seed=0, degree=1)
    assert rep["pass"] and set(rep["per_S"]) == {"1", "X"}
    bad = trace_check(nz, samples=20, seed=0, degree=2)
    assert not bad["pass"] and bad["max_error"] > 1e-3


def test_reports_are_json_and_deterministic():
    _, _, nz = _setup()
    a = trace_check(nz, samples=10, seed=3)
    b = trace_check(nz, samples=10, seed=3)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_dubrovin_abel_sums():
    rep = dubrovin_check(Fraction(3, 2), 5, t_end=0.5, dt=1e-4)
    assert rep["pass"], rep
    v = rep["velocity"]
    assert abs(v[0]["re"]) + abs(v[0]["im"]) < 1e-5
    assert abs(v[1]["re"] + 2 ** 0.5) < 1e-5


def test_flow_transport():
    rep = flow_transport_check(Fraction(3, 2), 5, t_end=0.5, dt=1e-4)
    assert rep["pass"], rep
    assert rep["max_error"] <= 1e-4


def test_top_to_curve():
    rep = top_to_curve_check(TopState((1.0, 0.0, 1.0), (0.0, 1.0, 0.0)), t_end=2.0, dt=1e-3)
    assert rep["pass"], rep


def test_spectral_check_and_control():
    assert spectral_check(samples=100, seed=0)["pass"]
    off = spectral_check(samples=20, seed=0, constrained=False)
    assert off["pass"] and off["max_error"] > 1e-3


def test_precision_floor():
    assert NumCtx(20).tag == "double"
    assert NumCtx(64).tag == "mp64"
    H, I2 = param_generators()
    with pytest.raises(NumericError, match="symbolic"):
        NumCtx().mk(curve_C2(H, I2)[0].f.coeffs[1])
