"""Pushing points and classes through the correspondence Z, the kernel check,
the multiplication-by-2 check and the differential trace check."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..genus2 import CorrespondenceZ
from .numeric import (
    NumClass,
    NumCtx,
    NumCurve,
    NumericError,
    class_add,
    class_distance,
    class_double,
    class_from_points,
    identity_class,
    num_curve,
    peval,
    pderiv,
    quintic_model,
    to_numpoly,
)
from .report import TOLERANCES, make_report


@dataclass
class CPoint:
    x: object
    y: object
    residual: float
    flags: tuple = ()


@dataclass
class NumZ:
    """Numeric form of Z: R(x, X) = G1(x)L1(X) + G2(x)L2(X) = 0 and
    G1(x)L1(X)(x - X) = yY, between ``source`` and ``target``."""

    g1: list
    g2: list
    l1: list
    l2: list
    source: NumCurve
    target: NumCurve
    ctx: NumCtx

    def fiber_over_x(self, x):
        a, b = peval(self.g1, x), peval(self.g2, x)
        n = max(len(self.l1), len(self.l2))
        return [a * _c(self.l1, k) + b * _c(self.l2, k) for k in range(n)]

    def fiber_over_X(self, X):
        a, b = peval(self.l1, X), peval(self.l2, X)
        n = max(len(self.g1), len(self.g2))
        return [_c(self.g1, k) * a + _c(self.g2, k) * b for k in range(n)]

    def fiber_at_infinity_x(self):
        a, b = _c(self.g1, 2), _c(self.g2, 2)
        n = max(len(self.l1), len(self.l2))
        return [a * _c(self.l1, k) + b * _c(self.l2, k) for k in range(n)]

    def yY(self, x, X):
        return peval(self.g1, x) * peval(self.l1, X) * (x - X)

    def dX_dx(self, x, X):
        """Implicit derivative of X(x) on R(x, X) = 0."""
        Rx = peval(pderiv(self.g1), x) * peval(self.l1, X) + peval(pderiv(self.g2), x) * peval(self.l2, X)
        RX = peval(self.g1, x) * peval(pderiv(self.l1), X) + peval(self.g2, x) * peval(pderiv(self.l2), X)
        return -Rx / RX


def _c(p, k):
    return p[k] if k < len(p) else 0


def num_correspondence(Z: CorrespondenceZ, ctx: NumCtx) -> NumZ:
    return NumZ(to_numpoly(Z.G1, ctx), to_numpoly(Z.G2, ctx), to_numpoly(Z.L1, ctx),
                to_numpoly(Z.L2, ctx), num_curve(Z.source, ctx), num_curve(Z.target, ctx), ctx)


def _images(nz: NumZ, x, y, forward: bool):
    ctx = nz.ctx
    fib = nz.fiber_over_x(x) if forward else nz.fiber_over_X(x)
    lead = fib[2] if len(fib) > 2 else 0
    scale = max(ctx.abs(c) for c in fib) or 1.0
    flags = ()
    if ctx.abs(lead) < 1e3 * ctx.eps * scale:
        flags = ("image_at_infinity",)
        roots = ctx.roots(fib[:2])
    else:
        roots = ctx.roots(fib)
    out = []
    for X in roots:
        val = nz.yY(x, X) if forward else nz.yY(X, x)
        out.append((X, val / y))
    return out, flags


def push_point(P, nz: NumZ, direction: str = "forward", eps: float | None = None) -> list:
    """The images of P under Z (forward: C -> C^, backward: C^ -> C).

    Weierstrass points (y = 0) are handled by moving along the curve with the
    local parameter s = y, pushing at s = eps and eps/2, and Richardson
    extrapolating the second coordinate back to s = 0.
    """
    forward = direction == "forward"
    if direction not in ("forward", "backward"):
        raise ValueError(f"unknown direction {direction!r}")
    ctx = nz.ctx
    src = nz.source if forward else nz.target
    dst = nz.target if forward else nz.source
    x, y = P
    scale = max(1.0, ctx.abs(x)) ** 3 * max(1.0, max(ctx.abs(c) for c in src.f)) ** 0.5
    wtol = ctx.eps ** 0.5 * scale * 1e-2
    flags = ()
    if ctx.abs(y) > wtol:
        pairs, flags = _images(nz, x, y, forward)
    else:
        pairs, flags = _weierstrass_images(nz, src, x, forward, eps)
        flags = flags + ("weierstrass_perturbed",)
    return [CPoint(X, Y, dst.residual(X, Y), flags) for X, Y in pairs]


def _point_at(src: NumCurve, x0, s):
    # solve f(x) = s^2 near the root x0 (Newton)
    ctx = src.ctx
    df = pderiv(src.f)
    x = x0 + s * s / peval(df, x0)
    for _ in range(30):
        step = (peval(src.f, x) - s * s) / peval(df, x)
        x = x - step
        if ctx.abs(step) < ctx.eps * max(1.0, ctx.abs(x)):
            break
    return x


def _weierstrass_images(nz: NumZ, src: NumCurve, x0, forward: bool, eps):
    ctx = nz.ctx
    if eps is None:
        eps = ctx.eps ** 0.25
    eps = ctx.mk(eps)
    X0s, flags = _images_fiber(nz, x0, forward)
    ests = []
    for s in (eps, eps / 2):
        pts, _ = _images(nz, _point_at(src, x0, s), s, forward)
        ests.append(pts)
    a = _match(X0s, ests[0], ctx)
    b = _match(X0s, ests[1], ctx)
    # first-order Richardson in s (a double root of the fiber branches like s)
    out = [(X0, 2 * pb[1] - pa[1]) for X0, pa, pb in zip(X0s, a, b)]
    return _snap(nz, out, forward), flags


def _match(targets, pts, ctx):
    """Assign pts to targets one-to-one (at most two of each) by total distance."""
    if len(targets) < 2 or len(pts) < 2:
        return [min(pts, key=lambda p: ctx.abs(p[0] - t)) for t in targets]
    d0 = ctx.abs(pts[0][0] - targets[0]) + ctx.abs(pts[1][0] - targets[1])
    d1 = ctx.abs(pts[1][0] - targets[0]) + ctx.abs(pts[0][0] - targets[1])
    return [pts[0], pts[1]] if d0 <= d1 else [pts[1], pts[0]]


def _images_fiber(nz: NumZ, x, forward: bool):
    ctx = nz.ctx
    fib = nz.fiber_over_x(x) if forward else nz.fiber_over_X(x)
    lead = fib[2] if len(fib) > 2 else 0
    scale = max(ctx.abs(c) for c in fib) or 1.0
    if ctx.abs(lead) < 1e3 * ctx.eps * scale:
        return ctx.roots(fib[:2]), ("image_at_infinity",)
    a, b, c = fib[2], fib[1], fib[0]
    disc = b * b - 4 * a * c
    if ctx.abs(disc) < 1e3 * ctx.eps * max(ctx.abs(b * b), ctx.abs(4 * a * c)):
        # a double root of the fiber: rounding would split it by ~sqrt(eps)
        X = -b / (2 * a)
        return [X, X], ("double_fiber",)
    return ctx.roots(fib), ()


def _snap(nz: NumZ, pts, forward: bool):
    """Replace extrapolated Y by the nearer of +-sqrt(f(X)) on the image curve."""
    dst = nz.target if forward else nz.source
    ctx = nz.ctx
    out = []
    for X, Y in pts:
        fX = dst(X)
        if ctx.abs(fX) < 1e3 * ctx.eps * dst.scale_at(X):
            out.append((X, 0 * X))  # a Weierstrass image: sqrt would amplify rounding
            continue
        r = ctx.sqrt(fX)
        out.append((X, r if ctx.abs(r - Y) <= ctx.abs(r + Y) else -r))
    return out


# -- classes ---------------------------------------------------------------

def infinity_correction(nz: NumZ) -> NumClass | None:
    """K = [Z*(oo) - 2 oo^] for quintic source and target.

    Z*(oo) is iota-invariant: a conjugate pair (K = 0) or two distinct
    Weierstrass points (K = their two-torsion class).
    """
    ctx = nz.ctx
    tgt = nz.target
    c2 = nz.fiber_at_infinity_x()
    roots = ctx.roots(c2)
    if len(roots) < 2:
        raise NumericError("an image of oo lies at infinity; no odd-model correction")
    r1, r2 = roots
    tol = ctx.eps ** 0.5 * 1e2
    if ctx.abs(r1 - r2) < tol * max(1.0, ctx.abs(r1)):
        return identity_class(tgt)
    return class_from_points([(r1, 0 * r1), (r2, 0 * r2)], tgt)


def push_class(D: NumClass, nz: NumZ) -> NumClass:
    """phi[D] for a class on the quintic source, landing on the quintic target."""
    if nz.source.degree != 5 or nz.target.degree != 5:
        raise NumericError("push_class needs odd-degree source and target models")
    pts = D.points()
    images = []
    for P in pts:
        images += [(q.x, q.y) for q in push_point(P, nz, "forward")]
    cls = class_from_points(images, nz.target)
    if len(pts) % 2:
        cls = class_add(cls, infinity_correction(nz))  # K has order 2
    return cls


def kernel_check(nz: NumZ, factors, source_curve, extra=None, precision=None) -> dict:
    """Push the two-torsion classes of the splitting factors; they must die.

    ``extra`` lists additional (label, points) classes expected NOT to die
    (negative controls).
    """
    ctx = nz.ctx
    tol = TOLERANCES["kernel"]
    rows = []
    worst = 0.0
    for name, G in factors:
        pts = [(r, 0 * r) for r in ctx.roots(to_numpoly(G, ctx))]
        D = class_from_points(pts, nz.source)
        img = push_class(D, nz)
        err = class_distance(img, identity_class(nz.target))
        worst = max(worst, err)
        rows.append({"class": name, "residual": err, "identity": err <= tol})
    controls = []
    ok_controls = True
    for name, pts in (extra or []):
        D = class_from_points(pts, nz.source)
        img = push_class(D, nz)
        err = class_distance(img, identity_class(nz.target))
        nonzero = err > 1e3 * tol
        ok_controls = ok_controls and nonzero
        controls.append({"class": name, "distance_from_identity": err, "nonzero": nonzero})
    return make_report("kernel", {}, len(rows), worst, tol, worst <= tol and ok_controls,
                       ctx, classes=rows, controls=controls)


def _class_from_curve_points(pts, qm):
    return class_from_points([qm.to_model(P) for P in pts], qm.curve)


def mult2_sample(nz: NumZ, rng, qm=None):
    """One random class D = [P1 + P2 - Q1 - Q2] on the target; returns (Z Z^T D, 2D)."""
    qm = qm or quintic_model(nz.target)
    tgt = nz.target
    P = [tgt.random_point(rng) for _ in range(2)]
    Q = [tgt.random_point(rng) for _ in range(2)]

    def round_trip(points):
        out = []
        for p in points:
            for q in push_point(p, nz, "backward"):
                out += [(r.x, r.y) for r in push_point((q.x, q.y), nz, "forward")]
        return out
    lhs = class_add(_class_from_curve_points(round_trip(P), qm),
                    _class_from_curve_points(round_trip(Q), qm).neg())
    D = class_add(_class_from_curve_points(P, qm), _class_from_curve_points(Q, qm).neg())
    return lhs, class_double(D)


def mult2_check(nz: NumZ, samples: int = 20, seed: int = 0, params=None) -> dict:
    """phi o phi^ = [2] on random classes of the target (phi^ via Z transposed)."""
    rng = np.random.default_rng(seed)
    qm = quintic_model(nz.target)
    errs = []
    tries = 0
    while len(errs) < samples:
        tries += 1
        if tries > 5 * samples:
            raise NumericError("too many degenerate samples in mult2_check")
        try:
            lhs, rhs = mult2_sample(nz, rng, qm)
        except (NumericError, ZeroDivisionError, np.linalg.LinAlgError):
            continue  # degenerate configuration: resample
        errs.append(class_distance(lhs, rhs))
    tol = TOLERANCES["mult2"]
    worst = max(errs) if errs else 0.0
    return make_report("mult2", params or {}, samples, worst, tol, worst <= tol, nz.ctx,
                       errors=errs, resampled=tries - samples)


def mult2_identity(nz: NumZ) -> bool:
    """The identity class round-trips to the identity exactly (no points)."""
    qm = quintic_model(nz.target)
    return class_from_points([], qm.curve).is_identity(0.0)


def trace_sum(nz: NumZ, x, u, S) -> tuple:
    """(sum over the two branches of S(X) X'(x) / W, S(x)/u) at a point (x, u)."""
    acc = 0
    for X, W in _images(nz, x, u, True)[0]:
        acc = acc + S(X) * nz.dX_dx(x, X) / W
    return acc, S(x) / u


def trace_check(nz: NumZ, samples: int = 50, seed: int = 0, degree: int = 1,
                params=None) -> dict:
    """delta(S(X) dX/W) = S(x) dx/u for S in {1, X} (degree 1) or S = X^2."""
    rng = np.random.default_rng(seed)
    ctx = nz.ctx
    funcs = {0: [("1", lambda X: 1 + 0 * X)],
             1: [("1", lambda X: 1 + 0 * X), ("X", lambda X: X)],
             2: [("X^2", lambda X: X * X)]}[degree]
    errs = {name: [] for name, _ in funcs}
    n = 0
    while n < samples:
        x, u = nz.source.random_point(rng)
        fib = nz.fiber_over_x(x)
        disc = fib[1] ** 2 - 4 * fib[2] * fib[0]
        if ctx.abs(u) < 1e-3 or ctx.abs(disc) < 1e-6 * max(1.0, ctx.abs(fib[1]) ** 2):
            continue  # too close to a branch point
        n += 1
        for name, S in funcs:
            lhs, rhs = trace_sum(nz, x, u, S)
            errs[name].append(ctx.abs(lhs - rhs) / max(ctx.abs(rhs), 1e-300))
    tol = TOLERANCES["trace"]
    worst = max(max(v) for v in errs.values())
    passed = worst <= tol
    return make_report("trace", params or {}, samples, worst, tol, passed, ctx,
                       S=[name for name, _ in funcs],
                       per_S={k: max(v) for k, v in errs.items()})
