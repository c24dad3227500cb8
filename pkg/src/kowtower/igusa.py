"""Igusa-Clebsch invariants of binary sextics and geometric isomorphism tests.

The exact route goes through Clebsch's invariants A, B, C, D built from
transvectants of the sextic form; the Igusa-Clebsch tuple (I2, I4, I6, I10)
is then a fixed polynomial in them (Mestre's normalization).  Quintic models
are read as sextic forms with a root at infinity.  ``root_oracle`` is an
independent computation from root differences, used to cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import comb, factorial, gcd

from .exactfield import Poly, elem_to_json, param_specialize
from .genus2 import HyperCurve, affine_change


class IgusaError(ValueError):
    pass


# binary forms: coefficient list c with c[k] the coefficient of x^k z^(d-k)

def _dx(c):
    return [k * c[k] for k in range(1, len(c))]


def _dz(c):
    d = len(c) - 1
    return [(d - k) * c[k] for k in range(d)]


def _mul(a, b, zero):
    out = [zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return out


def _partials(c, k):
    """[d^k c / dx^(k-j) dz^j for j = 0..k]."""
    out = []
    for j in range(k + 1):
        p = c
        for _ in range(k - j):
            p = _dx(p)
        for _ in range(j):
            p = _dz(p)
        out.append(p)
    return out


def transvectant(f, g, k, zero):
    """k-th transvectant (f, g)_k, normalized by (m-k)!(n-k)!/(m!n!)."""
    m, n = len(f) - 1, len(g) - 1
    pf, pg = _partials(f, k), _partials(g, k)
    size = m + n - 2 * k + 1
    acc = [zero] * size
    for j in range(k + 1):
        term = _mul(pf[j], pg[k - j], zero)
        s = comb(k, j) * (-1) ** j
        for t in range(size):
            acc[t] = acc[t] + term[t] * s
    scale = Fraction(factorial(m - k) * factorial(n - k), factorial(m) * factorial(n))
    return [a * scale for a in acc]


def _form(f: Poly):
    if f.degree not in (5, 6):
        raise IgusaError(f"need a quintic or sextic, got degree {f.degree}")
    return [f.coeff(k) for k in range(7)]


def clebsch_invariants(f: Poly):
    """Clebsch's (A, B, C, D) of the sextic form attached to f."""
    zero = f.field.zero
    F = _form(f)
    A = transvectant(F, F, 6, zero)[0]
    i = transvectant(F, F, 4, zero)
    delta = transvectant(i, i, 2, zero)
    y1 = transvectant(F, i, 4, zero)
    y2 = transvectant(i, y1, 2, zero)
    y3 = transvectant(i, y2, 2, zero)
    B = transvectant(i, i, 4, zero)[0]
    C = transvectant(i, delta, 4, zero)[0]
    D = transvectant(y3, y1, 2, zero)[0]
    return A, B, C, D


@dataclass(frozen=True)
class IgusaInvariants:
    weighted: tuple  # (I2, I4, I6, I10)

    WEIGHTS = (2, 4, 6, 10)

    @property
    def I10(self):
        return self.weighted[3]

    def absolute(self) -> tuple:
        """Weight-0 invariants; normalized by the first nonvanishing of I2, I4, I6.

        With I2 != 0: (I2^5/I10, I2^3 I4/I10, I2^2 I6/I10).
        """
        I2, I4, I6, I10 = self.weighted
        if not I10:
            raise IgusaError("I10 = 0: singular sextic")
        if I2:
            return (I2 ** 5 / I10, I2 ** 3 * I4 / I10, I2 ** 2 * I6 / I10)
        if I4:
            return (I4 ** 5 / I10 ** 2, I6 ** 5 / I10 ** 3)
        if I6:
            return (I6 ** 5 / I10 ** 3,)
        return ()

    def to_json(self) -> dict:
        out = {"weighted": [elem_to_json(w) for w in self.weighted]}
        try:
            out["absolute"] = [elem_to_json(a) for a in self.absolute()]
        except IgusaError:
            out["absolute"] = None
        return out


def igusa_clebsch(f: Poly) -> IgusaInvariants:
    A, B, C, D = clebsch_invariants(f)
    I2 = -120 * A
    I4 = -720 * A ** 2 + 6750 * B
    I6 = 8640 * A ** 3 - 108000 * A * B + 202500 * C
    I10 = (-62208 * A ** 5 + 972000 * A ** 3 * B + 1620000 * A ** 2 * C
           - 3037500 * A * B ** 2 - 6075000 * B * C - 4556250 * D)
    return IgusaInvariants((I2, I4, I6, I10))


def curve_invariants(c: HyperCurve) -> IgusaInvariants:
    inv = igusa_clebsch(c.f)
    if not inv.I10:
        raise IgusaError("degenerate input: I10 = 0")
    return inv


def weighted_equal(a: tuple, b: tuple, weights=IgusaInvariants.WEIGHTS) -> bool:
    """Equality of points in weighted projective space.

    b = lambda^w * a for some lambda over the closure; decided by the
    zero pattern and all pairwise cross relations a_i^(w_j/g) b_j^(w_i/g) =
    b_i^(w_j/g) a_j^(w_i/g), g = gcd(w_i, w_j).
    """
    if [bool(x) for x in a] != [bool(x) for x in b]:
        return False
    n = len(weights)
    for i in range(n):
        for j in range(i + 1, n):
            g = gcd(weights[i], weights[j])
            p, q = weights[j] // g, weights[i] // g
            if a[i] ** p * b[j] ** q != b[i] ** p * a[j] ** q:
                return False
    return True


def isomorphic_over_closure(c1: HyperCurve, c2: HyperCurve) -> bool:
    i1, i2 = curve_invariants(c1), curve_invariants(c2)
    return weighted_equal(i1.weighted, i2.weighted)


def generic_nonisomorphism(samples, curve_pair) -> dict:
    """Compare C1 and C2 at each (h, k).

    ``curve_pair(h, k)`` returns (C1, C2) or raises ValueError naming the
    degeneracy, which marks the sample as skipped.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("empty sample list")
    rows = []
    for h, k in samples:
        try:
            c1, c2 = curve_pair(h, k)
        except ValueError as exc:
            rows.append({"H": h, "I2": k, "verdict": "skipped", "reason": str(exc)})
            continue
        iso = isomorphic_over_closure(c1, c2)
        twist_ok = (isomorphic_over_closure(c1, affine_change(c1, 0, -1))
                    and isomorphic_over_closure(c2, affine_change(c2, 0, -1)))
        rows.append({"H": h, "I2": k,
                     "verdict": "isomorphic" if iso else "non-isomorphic",
                     "twist_control": twist_ok,
                     "C1": curve_invariants(c1), "C2": curve_invariants(c2)})
    done = [r for r in rows if r["verdict"] != "skipped"]
    if not done:
        raise ValueError("all samples degenerate")
    generic = all(r["verdict"] == "non-isomorphic" for r in done)
    return {"samples": rows, "generic": generic}


# -- numeric oracle -----------------------------------------------------

def _pair_sums(roots, sq):
    idx = range(6)
    s2 = s4 = s6 = 0
    # I2: the 15 ways to split 6 roots into 3 pairs
    seen = set()
    for p in permutations(idx):
        pairs = frozenset(frozenset(p[2 * k:2 * k + 2]) for k in range(3))
        if pairs in seen:
            continue
        seen.add(pairs)
        prod = 1
        for pr in pairs:
            a, b = tuple(pr)
            prod *= sq[a][b]
        s2 += prod
    # I4: the 10 splittings into two triples
    for t in combinations(idx, 3):
        if 0 not in t:
            continue
        u = tuple(k for k in idx if k not in t)
        s4 += (sq[t[0]][t[1]] * sq[t[1]][t[2]] * sq[t[2]][t[0]]
               * sq[u[0]][u[1]] * sq[u[1]][u[2]] * sq[u[2]][u[0]])
    # I6: the 60 terms (12)(23)(31)(45)(56)(64)(14)(25)(36), squared
    seen = set()
    for p in permutations(idx):
        a, b, c, d, e, g = p
        edges = frozenset(frozenset(x) for x in
                          ((a, b), (b, c), (c, a), (d, e), (e, g), (g, d), (a, d), (b, e), (c, g)))
        if edges in seen:
            continue
        seen.add(edges)
        prod = 1
        for ed in edges:
            x, y = tuple(ed)
            prod *= sq[x][y]
        s6 += prod
    return s2, s4, s6


def root_oracle(f: Poly, dps: int = 50) -> tuple:
    """(I2, I4, I6, I10) from high-precision complex roots of the sextic.

    Quintics are first moved by a unimodular substitution z -> t x + z
    (determinant 1, so the tuple is unchanged) with F(1, t) != 0.
    """
    import mpmath

    with mpmath.workdps(dps):
        coeffs = [_to_mp(c) for c in _form(f)]
        if f.degree == 5:
            for t in (1, 2, -1, 3, -2):
                shifted = _unimodular_shift(coeffs, t)
                if abs(shifted[6]) > mpmath.mpf(10) ** (-dps // 2) * max(abs(c) for c in coeffs):
                    break
            coeffs = shifted
        a6 = coeffs[6]
        roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=400, extraprec=4 * dps)
        sq = [[(roots[i] - roots[j]) ** 2 for j in range(6)] for i in range(6)]
        s2, s4, s6 = _pair_sums(roots, sq)
        s10 = 1
        for i, j in combinations(range(6), 2):
            s10 *= sq[i][j]
        return (a6 ** 2 * s2, a6 ** 4 * s4, a6 ** 6 * s6, a6 ** 10 * s10)


def _to_mp(c):
    import mpmath
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpmathify(complex(c)) if not hasattr(c, "_mpf_") else mpmath.mpf(c)


def _unimodular_shift(c, t=1):
    """Coefficients of F(x, t x + z) for F with coefficient list c."""
    # x^k (t x + z)^(6-k) = sum_j C(6-k, j) t^j x^(k+j) z^(6-k-j)
    out = [0] * 7
    for k, ck in enumerate(c):
        for j in range(7 - k):
            out[k + j] += comb(6 - k, j) * t ** j * ck
    return out


def specialize_invariants(inv: IgusaInvariants, h, k) -> IgusaInvariants:
    return IgusaInvariants(tuple(param_specialize(w, h, k) for w in inv.weighted))
