"""Numeric contexts, list polynomials, and numeric Cantor arithmetic.

A context is either hardware double (Python complex, numpy roots) or a
private mpmath context of a given mantissa precision.  Polynomials are
ascending coefficient lists of context numbers.
"""

from __future__ import annotations

import cmath
import os
from math import comb
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath.ctx_mp import MPContext

from ..exactfield import GaussianRational, RatFunc

DOUBLE_BITS = 53


class NumericError(ArithmeticError):
    pass


class NumCtx:
    def __init__(self, prec: int | None = None):
        if prec is None:
            prec = int(os.environ.get("RK_PRECISION_BITS", DOUBLE_BITS))
        self.prec = prec
        self.double = prec <= DOUBLE_BITS
        if self.double:
            self.prec = DOUBLE_BITS
            self.mp = None
        else:
            self.mp = MPContext()
            self.mp.prec = prec
        self.eps = 2.0 ** (-self.prec)

    def __repr__(self):
        return f"NumCtx({self.prec})"

    @property
    def tag(self) -> str:
        return "double" if self.double else f"mp{self.prec}"

    def mk(self, x):
        """Context number from an exact or float scalar."""
        if isinstance(x, RatFunc):
            if not x.is_constant():
                raise NumericError("symbolic coefficient in a numeric computation")
            return self.mk(x.num.coeff(0))
        if isinstance(x, GaussianRational):
            return self.mk(x.re) + self.mk(x.im) * self.i
        if isinstance(x, Fraction):
            if self.double:
                return complex(x.numerator / x.denominator)
            return self.mp.mpc(self.mp.mpf(x.numerator) / x.denominator)
        if self.double:
            return complex(x)
        if hasattr(x, "_mpf_") or hasattr(x, "_mpc_"):
            return self.mp.mpc(x)
        return self.mp.mpc(x)

    @property
    def i(self):
        return 1j if self.double else self.mp.mpc(0, 1)

    def sqrt(self, z):
        return cmath.sqrt(z) if self.double else self.mp.sqrt(z)

    def abs(self, z) -> float:
        return abs(z) if self.double else float(abs(z))

    def roots(self, c):
        """Roots of the ascending coefficient list c."""
        c = ptrim(c)
        if len(c) <= 1:
            return []
        if len(c) == 2:
            return [-c[0] / c[1]]
        if len(c) == 3:
            a, b, cc = c[2], c[1], c[0]
            d = self.sqrt(b * b - 4 * a * cc)
            q = -(b + d) / 2 if self.abs(b + d) >= self.abs(b - d) else -(b - d) / 2
            if q == 0:
                return [0 * a, 0 * a]
            return [q / a, cc / q]
        if self.double:
            rs = [complex(r) for r in np.roots(list(reversed(c)))]
            return [_newton(c, r, self) for r in rs]
        return list(self.mp.polyroots(list(reversed(c)), maxsteps=200, extraprec=self.prec))

    def solve(self, A, b):
        if self.double:
            return [complex(v) for v in np.linalg.solve(np.array(A, dtype=complex),
                                                         np.array(b, dtype=complex))]
        M = self.mp.matrix(A)
        return list(self.mp.lu_solve(M, self.mp.matrix(b)))

    def rng_complex(self, rng, scale=1.0):
        re, im = rng.normal(0.0, scale, 2)
        return self.mk(complex(float(re), float(im)))


def _newton(c, r, ctx, steps=3):
    dc = pderiv(c)
    for _ in range(steps):
        d = peval(dc, r)
        if d == 0:
            break
        r = r - peval(c, r) / d
    return r


# -- list polynomials ----------------------------------------------------

def ptrim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def peval(c, x):
    acc = 0 * x
    for a in reversed(c):
        acc = acc * x + a
    return acc


def pderiv(c):
    return [k * c[k] for k in range(1, len(c))]


def padd(a, b):
    n = max(len(a), len(b))
    return [(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)]


def pneg(a):
    return [-x for x in a]


def pmul(a, b):
    if not a or not b:
        return []
    out = [0 * a[0]] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def pdivmod(a, b):
    """Quotient and remainder; b's leading coefficient must be nonzero."""
    b = ptrim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], rem
    quo = [0] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        q = rem[k + db] / b[-1]
        quo[k] = q
        for j, bj in enumerate(b):
            rem[k + j] = rem[k + j] - q * bj
    return quo, rem[:db]


def pmonic(a):
    a = ptrim(a)
    return [x / a[-1] for x in a]


def pfromroots(rs, one):
    p = [one]
    for r in rs:
        p = pmul(p, [-r, one])
    return p


def to_numpoly(p, ctx: NumCtx):
    """Exact/real Poly -> list of context numbers."""
    return [ctx.mk(c) for c in p.coeffs]


# -- numeric curves and points --------------------------------------------

@dataclass
class NumCurve:
    f: list
    ctx: NumCtx
    label: str = ""

    @property
    def degree(self) -> int:
        return len(self.f) - 1

    def __call__(self, x):
        return peval(self.f, x)

    def scale_at(self, x) -> float:
        """Magnitude used to normalize on-curve residuals at x."""
        ax = max(1.0, self.ctx.abs(x))
        return max(1.0, sum(self.ctx.abs(c) for c in self.f) * ax ** self.degree)

    def residual(self, x, y) -> float:
        return self.ctx.abs(y * y - self(x)) / self.scale_at(x)

    def random_point(self, rng):
        x = self.ctx.rng_complex(rng)
        y = self.ctx.sqrt(self(x))
        if rng.random() < 0.5:
            y = -y
        return (x, y)


def num_curve(c, ctx: NumCtx) -> NumCurve:
    return NumCurve(to_numpoly(c.f, ctx), ctx, getattr(c, "label", ""))


@dataclass
class QuinticModel:
    """Odd-degree model of a curve: identity for quintics; for sextics the
    root r is sent to infinity by T = 1/(X - r), S = Y T^3."""

    base: NumCurve
    curve: NumCurve
    r: object = None

    def to_model(self, P):
        if self.r is None:
            return P
        X, Y = P
        T = 1 / (X - self.r)
        return (T, Y * T ** 3)

    def from_model(self, P):
        if self.r is None:
            return P
        T, S = P
        return (self.r + 1 / T, S / T ** 3)


def quintic_model(c: NumCurve) -> QuinticModel:
    if c.degree == 5:
        return QuinticModel(c, c, None)
    if c.degree != 6:
        raise NumericError("genus-2 model needs degree 5 or 6")
    ctx = c.ctx
    roots = ctx.roots(c.f)
    # root of largest modulus keeps the new model well scaled
    r = max(roots, key=lambda z: ctx.abs(z))
    # h(s) = f(s + r); g(T) = T^6 h(1/T) is the reversal of h
    h = [0 * c.f[0]] * 7
    binom = [[1], [1, 1], [1, 2, 1], [1, 3, 3, 1], [1, 4, 6, 4, 1],
             [1, 5, 10, 10, 5, 1], [1, 6, 15, 20, 15, 6, 1]]
    for k, ck in enumerate(c.f):
        for j in range(k + 1):
            h[j] = h[j] + ck * binom[k][j] * r ** (k - j)
    g = list(reversed(h))[:6]
    return QuinticModel(c, NumCurve(g, ctx, c.label + "~"), r)


# -- numeric Mumford classes ---------------------------------------------

@dataclass
class NumClass:
    u: list
    v: list
    curve: NumCurve

    def is_identity(self, tol: float) -> bool:
        return len(ptrim_tol(self.u, tol)) == 1 and all(
            self.curve.ctx.abs(c) < tol for c in self.v)

    def points(self):
        ctx = self.curve.ctx
        return [(r, peval(self.v, r)) for r in ctx.roots(self.u)]

    def neg(self) -> "NumClass":
        return NumClass(self.u, pneg(self.v), self.curve)


def ptrim_tol(c, tol):
    c = list(c)
    while len(c) > 1 and abs(complex(c[-1])) < tol:
        c.pop()
    return c


def identity_class(c: NumCurve) -> NumClass:
    return NumClass([c.ctx.mk(1)], [], c)


def _sqrt_series(f, X, Y, n):
    """Taylor coefficients of the branch y(X + t) with y(X) = Y, to order n."""
    # coefficients of f(X + t)
    m = len(f)
    fs = []
    for k in range(min(n, m)):
        acc = 0 * X
        for j in range(k, m):
            acc = acc + f[j] * comb(j, k) * X ** (j - k)
        fs.append(acc)
    fs += [0 * X] * (n - len(fs))
    a = [Y]
    for k in range(1, n):
        s = fs[k] - sum((a[j] * a[k - j] for j in range(1, k)), 0 * X)
        a.append(s / (2 * Y))
    return a


def _cluster(points, ctx: NumCtx, tol: float):
    """Cancel P + iota(P) pairs (including doubled Weierstrass points) and merge
    repeated points into (X, Y, multiplicity)."""
    pts = list(points)
    out = []
    while pts:
        X, Y = pts.pop(0)
        scale = max(1.0, ctx.abs(X))
        yscale = max(1.0, ctx.abs(Y))
        # opposite partner?
        k_opp = next((k for k, (X2, Y2) in enumerate(pts)
                      if ctx.abs(X2 - X) < tol * scale and ctx.abs(Y2 + Y) < tol * yscale), None)
        if k_opp is not None:
            pts.pop(k_opp)
            continue
        mult = 1
        k = 0
        while k < len(pts):
            X2, Y2 = pts[k]
            if ctx.abs(X2 - X) < tol * scale and ctx.abs(Y2 - Y) < tol * yscale:
                pts.pop(k)
                mult += 1
            else:
                k += 1
        out.append((X, Y, mult))
    return out


def class_from_points(points, c: NumCurve, tol: float | None = None) -> NumClass:
    """Reduced class of sum [P_i - oo] on an odd-degree model."""
    ctx = c.ctx
    if c.degree != 5:
        raise NumericError("numeric Cantor needs a quintic model")
    if tol is None:
        tol = ctx.eps ** 0.5 * 10
    groups = _cluster(points, ctx, tol)
    if not groups:
        return identity_class(c)
    one = ctx.mk(1)
    u = [one]
    rows, rhs = [], []
    n = sum(m for _, _, m in groups)
    for X, Y, m in groups:
        u = pmul(u, pfromroots([X] * m, one))
        if m > 1 and ctx.abs(Y) < tol:
            raise NumericError("repeated Weierstrass point survived cancellation")
        ser = _sqrt_series(c.f, X, Y, m) if m > 1 else [Y]
        for d in range(m):
            # d-th Taylor coefficient of v at X equals ser[d]
            row = [(comb(k, d) * X ** (k - d) if k >= d else 0 * X) for k in range(n)]
            rows.append(row)
            rhs.append(ser[d])
    v = ctx.solve(rows, rhs)
    return reduce_class(u, v, c)


def reduce_class(u, v, c: NumCurve) -> NumClass:
    u = pmonic(u)
    _, v = pdivmod(v, u)
    while len(u) - 1 > 2:
        num = padd(c.f, pneg(pmul(v, v)))
        u, _ = pdivmod(num, u)
        u = pmonic(ptrim(u))
        _, v = pdivmod(pneg(v), u)
    return NumClass(u, v, c)


def class_add(a: NumClass, b: NumClass, tol: float | None = None) -> NumClass:
    return class_from_points(a.points() + b.points(), a.curve, tol)


def class_double(a: NumClass, tol: float | None = None) -> NumClass:
    pts = a.points()
    return class_from_points(pts + pts, a.curve, tol)


def class_distance(a: NumClass, b: NumClass) -> float:
    """Max coefficient gap of the Mumford pairs (u padded to degree 2, v to 1)."""
    ctx = a.curve.ctx

    def pad(p, n):
        p = list(p) + [0] * (n - len(p))
        return p[:n]
    ua, ub = pad(a.u, 3), pad(b.u, 3)
    va, vb = pad(a.v, 2), pad(b.v, 2)
    gap = [ctx.abs(x - y) for x, y in zip(ua + va, ub + vb)]
    scale = max([1.0] + [ctx.abs(x) for x in ua + va])
    return max(gap) / scale
