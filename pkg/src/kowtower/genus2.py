"""Genus-2 curve models y^2 = f(x), quadratic splittings, Richelot's
transformation, the correspondence Z, affine model changes and the
cotangent pullback matrix.

Conventions
-----------
* ``split_delta`` uses the coefficient rows (g2, g1, g0), descending degree.
* ``richelot_transform`` stores the image as Y^2 = F(X)/delta with
  F = L1*L2*L3.  The correspondence Z (G1(x)L1(X) + G2(x)L2(X) = 0,
  G1(x)L1(X)(x - X) = yY) lands on the -1 twist Y^2 = -F(X)/delta, exposed as
  ``RichelotOut.z_model``.  Numeric pushforwards always use ``z_model``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .exactfield import (
    QQ,
    QQi,
    FractionField,
    PoleError,
    Poly,
    RatFunc,
    common_field,
    field_of,
    is_squarefree,
    poly_discriminant,
    poly_to_json,
    elem_to_json,
    specialize_poly,
)


class CurveError(ValueError):
    """Invalid genus-2 model (wrong degree or singular)."""


class RichelotError(ValueError):
    """Degenerate Richelot configuration."""


@dataclass(frozen=True)
class HyperCurve:
    f: Poly
    label: str = ""

    def __post_init__(self):
        if self.f.degree not in (5, 6):
            raise CurveError(f"genus-2 model needs deg f in {{5, 6}}, got {self.f.degree}")

    @property
    def field(self):
        return self.f.field

    @property
    def degree(self) -> int:
        return self.f.degree

    def is_odd_model(self) -> bool:
        return self.f.degree == 5

    def __call__(self, x):
        return self.f(x)

    def to_json(self) -> dict:
        return {"field": self.field.name, "f": poly_to_json(self.f), "label": self.label}

    def __str__(self):
        return f"y^2 = {self.f}"


def curve_from_poly(f: Poly, label: str = "") -> HyperCurve:
    """Validated genus-2 curve y^2 = f(x)."""
    if f.degree not in (5, 6):
        raise CurveError(f"wrong degree: deg f = {f.degree}, expected 5 or 6")
    if f.field.exact:
        if not discriminant_nonzero(f):
            raise CurveError("f is not squarefree (discriminant vanishes)")
    elif not _numeric_squarefree(f):
        raise CurveError("f is numerically not squarefree")
    return HyperCurve(f, label)


# deterministic specialization points for certifying disc != 0 over Q(i)(H)(I2)
_CERT_POINTS = [(Fraction(3, 7), Fraction(11, 5)), (Fraction(-5, 3), Fraction(2, 9)),
                (Fraction(13, 4), Fraction(-7, 6)), (Fraction(2, 11), Fraction(17, 3))]


def discriminant_nonzero(f: Poly) -> bool:
    """Decide disc(f) != 0.

    Over a fraction-field tower, a nonzero discriminant of a specialization
    (with the degree preserved) certifies a nonzero generic discriminant; the
    exact remainder-sequence computation is the fallback.
    """
    fld = f.field
    if isinstance(fld, FractionField) and fld.variables() == ["H", "I2"]:
        for h, k in _CERT_POINTS:
            try:
                fs = specialize_poly(f, h, k, QQi)
            except PoleError:
                continue
            if fs.degree == f.degree and poly_discriminant(fs):
                return True
    return bool(poly_discriminant(f))


def _numeric_squarefree(f: Poly) -> bool:
    ctx = f.field.ctx
    roots = ctx.polyroots([c for c in reversed(f.coeffs)], maxsteps=200, extraprec=2 * f.field.prec)
    scale = max(1, max(abs(r) for r in roots))
    tol = ctx.mpf(2) ** (-(f.field.prec // 3)) * scale
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) < tol:
                return False
    return True


@dataclass(frozen=True)
class QuadSplit:
    G1: Poly
    G2: Poly
    G3: Poly

    @property
    def factors(self) -> tuple[Poly, Poly, Poly]:
        return (self.G1, self.G2, self.G3)

    def rows(self) -> list[tuple]:
        return [(g.coeff(2), g.coeff(1), g.coeff(0)) for g in self.factors]

    def product(self) -> Poly:
        return self.G1 * self.G2 * self.G3

    def to_json(self) -> dict:
        return {"G1": poly_to_json(self.G1), "G2": poly_to_json(self.G2),
                "G3": poly_to_json(self.G3)}


def make_splitting(c: HyperCurve, G1: Poly, G2: Poly, G3: Poly) -> QuadSplit:
    s = QuadSplit(G1, G2, G3)
    degs = [g.degree for g in s.factors]
    if any(d > 2 or d < 0 for d in degs):
        raise RichelotError(f"factor degrees {degs} not all in 0..2")
    if sum(1 for d in degs if d < 2) > 1:
        raise RichelotError("at most one factor may have degree < 2")
    if c.field.exact and s.product() != c.f:
        raise RichelotError("G1*G2*G3 does not equal f")
    return s


def bracket(Gj: Poly, Gk: Poly) -> Poly:
    """[Gj, Gk] = Gj' Gk - Gj Gk'."""
    return Gj.derivative() * Gk - Gj * Gk.derivative()


def det3(m) -> object:
    (a, b, c), (d, e, f), (g, h, k) = m
    return a * (e * k - f * h) - b * (d * k - f * g) + c * (d * h - e * g)


def split_delta(s: QuadSplit):
    return det3(s.rows())


@dataclass(frozen=True)
class RichelotOut:
    L1: Poly
    L2: Poly
    L3: Poly
    delta: object
    F: Poly
    image: HyperCurve

    @property
    def factors(self) -> tuple[Poly, Poly, Poly]:
        return (self.L1, self.L2, self.L3)

    @property
    def z_model(self) -> HyperCurve:
        """Y^2 = -F/delta: the model on which Z's second relation holds."""
        return HyperCurve(-self.image.f, self.image.label + "'" if self.image.label else "")

    def to_json(self) -> dict:
        return {"L1": poly_to_json(self.L1), "L2": poly_to_json(self.L2),
                "L3": poly_to_json(self.L3), "delta": elem_to_json(self.delta),
                "image": self.image.to_json()}


def richelot_transform(c: HyperCurve, s: QuadSplit, label: str = "") -> RichelotOut:
    """Richelot's construction for a splitting f = G1 G2 G3."""
    if c.field.exact and s.product() != c.f:
        raise RichelotError("splitting does not factor the curve polynomial")
    delta = split_delta(s)
    if not delta:
        raise RichelotError("delta = det(g_ij) = 0: degenerate configuration (split Jacobian)")
    G1, G2, G3 = s.factors
    L1, L2, L3 = bracket(G2, G3), bracket(G3, G1), bracket(G1, G2)
    F = L1 * L2 * L3
    try:
        image = curve_from_poly(F.scale(c.field.one / delta), label)
    except CurveError as exc:  # pragma: no cover - excluded when delta != 0
        raise AssertionError(f"Richelot image is not a genus-2 curve: {exc}") from exc
    return RichelotOut(L1, L2, L3, delta, F, image)


def dual_splitting(r: RichelotOut, model: str = "image") -> QuadSplit:
    """Splitting of the image curve by the L's (the reverse Richelot step).

    ``model="image"`` splits Y^2 = F/delta as (L1/delta, L2, L3);
    ``model="z"`` splits the Z-model Y^2 = -F/delta as (-L1/delta, L2, L3).
    Richelot applied to either returns a model of the original curve twisted
    by a square (4 for the image model).
    """
    inv = r.image.field.one / r.delta
    if model == "image":
        return QuadSplit(r.L1.scale(inv), r.L2, r.L3)
    if model == "z":
        return QuadSplit(r.L1.scale(-inv), r.L2, r.L3)
    raise ValueError(f"unknown model {model!r}")


def affine_change(c: HyperCurve, a, twist, label: Optional[str] = None) -> HyperCurve:
    """New model in the coordinate x_new = x - a, scaled by a twist.

    Returns y^2 = twist * f(x_new + a); the point (x, y) maps to
    (x - a, y * sqrt(twist)).
    """
    twist = c.field.convert(twist)
    if not twist:
        raise CurveError("zero twist")
    g = c.f.shift(a).scale(twist)
    return HyperCurve(g, c.label if label is None else label)


def affine_twist_relation(c1: HyperCurve, c2: HyperCurve):
    """Solve c2.f(x) = t * c1.f(x + a) for (a, t); None if no such pair."""
    f1, f2 = c1.f, c2.f
    if f1.degree != f2.degree:
        return None
    n = f1.degree
    t = f2.lc / f1.lc
    # x^(n-1) coefficient of t*f1(x+a) is t*(c_{n-1} + n*a*lc)
    a = (f2.coeff(n - 1) / t - f1.coeff(n - 1)) / (n * f1.lc)
    if f1.shift(a).scale(t) != f2:
        return None
    return a, t


def curves_equal(c1: HyperCurve, c2: HyperCurve) -> bool:
    return c1.f == c2.f


# -- correspondence Z --------------------------------------------------

def _bivar(px: Poly, pX: Poly) -> dict:
    out: dict = {}
    for i, a in enumerate(px.coeffs):
        for j, b in enumerate(pX.coeffs):
            out[(i, j)] = out.get((i, j), 0) + a * b
    return out


def _bivar_add(*terms: dict) -> dict:
    out: dict = {}
    for t in terms:
        for k, v in t.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class CorrespondenceZ:
    """Z in C x C^: G1(x)L1(X) + G2(x)L2(X) = 0 and G1(x)L1(X)(x - X) = yY.

    Bivariate relations are dicts {(i, j): coeff} for sum coeff * x^i X^j.
    """

    G1: Poly
    G2: Poly
    L1: Poly
    L2: Poly
    source: HyperCurve
    target: HyperCurve
    rel1: dict = dc_field(compare=False)
    rel2: dict = dc_field(compare=False)

    def fiber_over_x(self, x0) -> Poly:
        """Relation 1 at fixed x as a polynomial in X."""
        return self.L1.scale(self.G1(x0)) + self.L2.scale(self.G2(x0))

    def fiber_over_X(self, X0) -> Poly:
        """Relation 1 at fixed X as a polynomial in x."""
        return self.G1.scale(self.L1(X0)) + self.G2.scale(self.L2(X0))

    def fiber_at_infinity_x(self) -> Poly:
        """Limit of relation 1 / x^2 as x -> oo (a polynomial in X)."""
        return self.L1.scale(self.G1.coeff(2)) + self.L2.scale(self.G2.coeff(2))

    def fiber_at_infinity_X(self) -> Poly:
        return self.G1.scale(self.L1.coeff(2)) + self.G2.scale(self.L2.coeff(2))

    def second_relation(self, x0, X0):
        """G1(x)L1(X)(x - X), which equals y*Y on Z."""
        return self.G1(x0) * self.L1(X0) * (x0 - X0)

    def to_json(self) -> dict:
        def enc(rel):
            return [{"i": i, "j": j, "c": elem_to_json(v)} for (i, j), v in sorted(rel.items())]
        return {"rel1": enc(self.rel1), "rel2_equals_yY": enc(self.rel2)}


def correspondence(c: HyperCurve, s: QuadSplit, r: RichelotOut) -> CorrespondenceZ:
    fld = c.field
    x = Poly.x(fld)
    rel1 = _bivar_add(_bivar(s.G1, r.L1), _bivar(s.G2, r.L2))
    g1l1 = _bivar(s.G1 * x, r.L1)
    g1l1X = _bivar(s.G1, r.L1 * x)
    rel2 = _bivar_add(g1l1, {k: -v for k, v in g1l1X.items()})
    return CorrespondenceZ(s.G1, s.G2, r.L1, r.L2, c, r.z_model, rel1, rel2)


def eval_bivar(rel: dict, x0, X0):
    return sum((v * x0 ** i * X0 ** j for (i, j), v in rel.items()), 0)


# -- cotangent pullback ------------------------------------------------

@dataclass(frozen=True)
class DiffPullback:
    """2x2 matrix whose columns are the images of a source basis of
    holomorphic differentials, written in a target basis.

    ``matrix[r][c]`` is the coefficient of target basis form r in the image of
    source form c.  Velocity coordinates transform by the transpose.
    """

    matrix: tuple
    source_basis: tuple = ("dxi/eta", "xi dxi/eta")
    target_basis: tuple = ("dx/u", "x dx/u")

    def image_of(self, k: int) -> tuple:
        return (self.matrix[0][k], self.matrix[1][k])

    def det(self):
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def transport(self, v: tuple) -> tuple:
        """Velocity coordinates in target_basis -> coordinates in source_basis."""
        (a, b), (c, d) = self.matrix
        return (a * v[0] + c * v[1], b * v[0] + d * v[1])

    def then(self, other: "DiffPullback") -> "DiffPullback":
        """Pullback of the composite map: apply ``other``'s pullback after self's.

        If self pulls forms on B back to A and other pulls forms on C back to
        B, the result pulls forms on C back to A (matrix self @ other).
        """
        if other.target_basis != self.source_basis:
            raise ValueError("basis mismatch in pullback composition")
        A, B = self.matrix, other.matrix
        prod = tuple(tuple(sum((A[r][k] * B[k][c] for k in range(2)), 0) for c in range(2))
                     for r in range(2))
        return DiffPullback(prod, other.source_basis, self.target_basis)


def pullback_matrix(H, field=None) -> DiffPullback:
    """Cotangent map of psi = nu_* o phi in the bases (dxi/eta, xi dxi/eta) and
    (dx/u, x dx/u): dxi/eta -> -i dx/u, xi dxi/eta -> -iH dx/u - i x dx/u."""
    if field is None:
        field = field_of(H)
        if field is QQ:
            field = QQi
    if not getattr(field, "has_i", False):
        raise TypeError(f"working field {field} lacks i")
    H = field.convert(H)
    i = field.i
    return DiffPullback(((-i, -i * H), (field.zero, -i)))


def translation_pullback(a, field) -> DiffPullback:
    """Pullback along x_new = x - a: d(x_new)/y -> dx/y, x_new d(x_new)/y ->
    x dx/y - a dx/y."""
    a = field.convert(a)
    return DiffPullback(((field.one, -a), (field.zero, field.one)),
                        ("dX~/W", "X~ dX~/W"), ("dX/W", "X dX/W"))


def twist_pullback(k, field, basis=("dxi/eta", "xi dxi/eta"),
                   target=("dX~/W", "X~ dX~/W")) -> DiffPullback:
    """Pullback along (x, y) -> (x, k*y): forms dx/eta pull back to (1/k) dx/W."""
    inv = field.one / field.convert(k)
    return DiffPullback(((inv, field.zero), (field.zero, inv)), basis, target)


def richelot_trace_pullback(field) -> DiffPullback:
    """delta(S(X) dX/W) = S(x) dx/u for deg S <= 1: the identity in these bases."""
    return DiffPullback(((field.one, field.zero), (field.zero, field.one)),
                        ("dX/W", "X dX/W"), ("dx/u", "x dx/u"))


def promote(p: Poly, field) -> Poly:
    return Poly(field, p.coeffs) if p.field != field else p


def working_field(*xs):
    return common_field(*[field_of(x) for x in xs])
