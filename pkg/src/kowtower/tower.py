"""Iterated Richelot steps: the tower ... -> J_{n+1} -> J_n -> ... -> J_2 -> J_1
whose ending segment is fixed to (C2, C1).

Level 1 is C1 and level 2 is C2; the edge between them is the canonical
splitting of C2, recorded together with the affine change that carries the
Richelot image onto C1.  Levels n >= 3 come from C_n = Richelot(C_{n-1}, s),
so the isogeny J_{n-1} -> J_n is the forward step and the arrow of the tower
(J_n -> J_{n-1}) is its dual.  The splitting s is never the one that would
walk straight back down the tower.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactfield import QQ, QQi, GaussianRational, Poly, elem_to_json, poly_to_json, real_field
from .genus2 import (
    CurveError,
    HyperCurve,
    QuadSplit,
    RichelotError,
    RichelotOut,
    affine_twist_relation,
    correspondence,
    dual_splitting,
    richelot_transform,
)
from .igusa import IgusaError, igusa_clebsch
from .kowtop import curve_C1, curve_C2

DEPTH_CAP = 16
STRATEGIES = ("paired-real-roots", "lexicographic-exact")
MODES = ("exact", "real-numeric")


class SplittingError(ValueError):
    """No admissible splitting in the working field."""


class TowerError(ValueError):
    pass


@dataclass
class TowerNode:
    level: int
    curve: HyperCurve
    splitting: Optional[QuadSplit] = None  # toward level + 1
    provenance: dict = field(default_factory=dict)


@dataclass
class TowerEdge:
    source: int  # level n + 1
    target: int  # level n
    richelot: RichelotOut
    splitting: QuadSplit
    direction: str  # "forward" or "dual"
    step_from: int  # level the Richelot step starts on
    start: HyperCurve  # model of that level the step is computed on
    provenance: dict = field(default_factory=dict)

    def correspondence(self):
        return correspondence(self.start, self.splitting, self.richelot)


@dataclass
class Tower:
    H: object
    I2: object
    mode: str
    strategy: str
    nodes: list
    edges: list
    prec: int = 128

    def node(self, level: int) -> TowerNode:
        return self.nodes[level - 1]


# -- root helpers ------------------------------------------------------

def _roots(f: Poly, prec: int):
    """Numeric roots of f (mpmath, ``prec`` bits) in a fixed order."""
    R = real_field(prec)
    ctx = R.ctx
    cs = [_to_mp(c, ctx) for c in reversed(f.coeffs)]
    rts = ctx.polyroots(cs, maxsteps=400, extraprec=2 * prec)
    tol = ctx.mpf(2) ** (-(prec // 2)) * max(1, max(abs(r) for r in rts))
    out = []
    for r in rts:
        if abs(ctx.im(r)) < tol:
            r = ctx.mpc(ctx.re(r), 0)
        out.append(r)
    return sorted(out, key=lambda z: (float(ctx.re(z)), float(ctx.im(z)))), tol, ctx


def _to_mp(c, ctx):
    if isinstance(c, GaussianRational):
        return ctx.mpc(ctx.mpf(c.re.numerator) / c.re.denominator,
                       ctx.mpf(c.im.numerator) / c.im.denominator)
    if isinstance(c, (int, Fraction)):
        return ctx.mpf(Fraction(c).numerator) / Fraction(c).denominator
    return ctx.mpmathify(c)


def _pairings(n: int):
    """All partitions of range(n) (n even) into pairs, in lexicographic order."""
    if n == 0:
        yield ()
        return
    for j in range(1, n):
        rest = [k for k in range(1, n) if k != j]
        for tail in _pairings(n - 2):
            yield ((0, j),) + tuple((rest[a], rest[b]) for a, b in tail)


def _is_conj(a, b, tol, ctx) -> bool:
    return abs(a - ctx.conj(b)) < tol


def _real_admissible(pairing, roots, tol, ctx) -> bool:
    for i, j in pairing:
        a, b = roots[i], roots[j]
        if a is None or b is None:
            other = b if a is None else a
            if abs(ctx.im(other)) >= tol:
                return False
            continue
        real_pair = abs(ctx.im(a)) < tol and abs(ctx.im(b)) < tol
        if not (real_pair or _is_conj(a, b, tol, ctx)):
            return False
    return True


def _sorted_pairing(roots, tol, ctx):
    """Conjugate pairs together, real roots sorted and paired consecutively,
    the point at infinity (None) last."""
    n = len(roots)
    used = [False] * n
    pairs = []
    for i in range(n):
        if used[i] or roots[i] is None or abs(ctx.im(roots[i])) < tol:
            continue
        for j in range(i + 1, n):
            if not used[j] and roots[j] is not None and _is_conj(roots[i], roots[j], tol, ctx):
                pairs.append((i, j))
                used[i] = used[j] = True
                break
    reals = [i for i in range(n) if not used[i] and roots[i] is not None
             and abs(ctx.im(roots[i])) < tol]
    reals += [i for i in range(n) if roots[i] is None]
    if len(reals) % 2:
        return None
    pairs += [(reals[k], reals[k + 1]) for k in range(0, len(reals), 2)]
    return tuple(sorted(tuple(sorted(p)) for p in pairs))


def _canon(pairing):
    return tuple(sorted(tuple(sorted(p)) for p in pairing))


def _pairing_of(s: QuadSplit, roots, ctx):
    """Which pairing of ``roots`` the factors of ``s`` realize (nearest roots)."""
    idx_used = set()
    pairs = []
    for G in s.factors:
        if G.degree == 2:
            rts, _, _ = _roots(G, 128)
            rts = [ctx.mpmathify(complex(r)) for r in rts]
        else:
            rts = [_roots(G, 128)[0][0], None] if G.degree == 1 else [None, None]
        pair = []
        for r in rts:
            cands = [k for k in range(len(roots)) if k not in idx_used]
            if r is None:
                k = next((k for k in cands if roots[k] is None), None)
            else:
                k = min((k for k in cands if roots[k] is not None),
                        key=lambda k: abs(roots[k] - r), default=None)
            if k is None:
                return None
            idx_used.add(k)
            pair.append(k)
        pairs.append(tuple(pair))
    return _canon(pairs)


def _build_real(f: Poly, pairing, roots, fld):
    """Real quadratic factors (leading coefficient on the first) of f."""
    ctx = fld.ctx
    x = Poly.x(fld)
    facs = []
    for i, j in pairing:
        pr = [roots[k] for k in (i, j) if roots[k] is not None]
        # conjugate or real pairs: the real parts carry the whole factor
        g = Poly(fld, [fld.one])
        if len(pr) == 2:
            s_, p_ = pr[0] + pr[1], pr[0] * pr[1]
            g = Poly(fld, [fld.convert(ctx.re(p_)), fld.convert(-ctx.re(s_)), fld.one])
        elif len(pr) == 1:
            g = x - fld.convert(ctx.re(pr[0]))
        facs.append(g)
    facs[0] = facs[0].scale(fld.convert(f.lc))
    return QuadSplit(*facs)


def _build_exact(f: Poly, pairing, roots, ctx):
    """Exact factors over Q or Q(i) when the numeric ones round to divisors of f."""
    fld = f.field
    facs = []
    for i, j in pairing:
        pr = [roots[k] for k in (i, j) if roots[k] is not None]
        cs = [ctx.mpc(1)]
        for r in pr:
            cs = [(cs[k - 1] if k > 0 else 0) - r * (cs[k] if k < len(cs) else 0)
                  for k in range(len(cs) + 1)]
        coeffs = []  # cs is ascending
        for c in cs:
            re = Fraction(str(ctx.nstr(ctx.re(c), 40))).limit_denominator(10 ** 12)
            im = Fraction(str(ctx.nstr(ctx.im(c), 40))).limit_denominator(10 ** 12)
            if im and not fld.has_i:
                return None
            coeffs.append(fld.convert(GaussianRational(re, im)) if fld.has_i else fld.convert(re))
        facs.append(Poly(fld, coeffs))
    facs[0] = facs[0].scale(f.lc)
    s = QuadSplit(*facs)
    return s if s.product() == f else None


def _c2_pattern(f: Poly):
    """The canonical splitting when f is verbatim a C2 polynomial x G2 (G2 - 1)."""
    if f.degree != 5 or f.coeff(0) or f.lc != f.field.one:
        return None
    x = Poly.x(f.field)
    q, r = divmod(f, x)
    # q = (x^2 + b x + c)(x^2 + b x + c - 1): read b, c from the top coefficients
    b = q.coeff(3) / 2
    c = (q.coeff(2) - b * b + 1) / 2
    G2 = x * x + x.scale(b) + c
    G3 = G2 - 1
    if r or G2 * G3 != q:
        return None
    return QuadSplit(x, G2, G3)


def _admissible(c: HyperCurve, s: QuadSplit) -> bool:
    try:
        richelot_transform(c, s)
    except (RichelotError, CurveError, AssertionError, ZeroDivisionError):
        return False
    return True


def choose_splitting(f: Poly, strategy: str = "paired-real-roots", avoid: Optional[QuadSplit] = None,
                     prec: int = 128) -> QuadSplit:
    """A splitting f = G1 G2 G3 into factors of degree <= 2, deterministic given
    the strategy.  ``avoid`` excludes one pairing (the step back down the tower).

    paired-real-roots: factors with real coefficients; conjugate roots share
    a factor, real roots are sorted and paired consecutively (the point at
    infinity of a quintic pairs last).  Other real pairings follow in
    lexicographic order when the first is excluded or degenerate.

    lexicographic-exact: factors over the field of f.  C2's own product form
    returns its canonical splitting; otherwise the first pairing (in
    lexicographic order) whose numeric factors round to exact divisors.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if f.degree not in (5, 6):
        raise SplittingError(f"need deg f in {{5, 6}}, got {f.degree}")
    c = HyperCurve(f)
    if strategy == "lexicographic-exact":
        if not f.field.exact:
            raise SplittingError("lexicographic-exact needs an exact field")
        s = _c2_pattern(f)
        if s is not None and avoid is None:
            return s
        if f.field not in (QQ, QQi):
            raise SplittingError(f"no exact root search over {f.field.name}")
    roots, tol, ctx = _roots(f, prec)
    if f.degree == 5:
        roots = roots + [None]
    skip = _pairing_of(avoid, roots, ctx) if avoid is not None else None
    cands = list(_pairings(6))
    if strategy == "paired-real-roots":
        first = _sorted_pairing(roots, tol, ctx)
        cands = ([first] if first else []) + [p for p in cands if _canon(p) != first]
        fld = f.field if not f.field.exact else real_field(prec)
        fr = f if not f.field.exact else Poly(fld, [fld.convert(_real_coeff(a)) for a in f.coeffs])
        cr = HyperCurve(fr)
        for p in cands:
            if _canon(p) == skip or not _real_admissible(p, roots, tol, ctx):
                continue
            s = _build_real(fr, p, roots, fld)
            if _admissible(cr, s):
                return s
        raise SplittingError("no admissible real splitting")
    fields = [f] if f.field == QQi else [f, Poly(QQi, [QQi.convert(a) for a in f.coeffs])]
    for fe in fields:
        ce = HyperCurve(fe)
        for p in cands:
            if _canon(p) == skip:
                continue
            s = _build_exact(fe, p, roots, ctx)
            if s is not None and _admissible(ce, s):
                return s
    raise SplittingError(f"no splitting into factors of degree <= 2 over {f.field.name}")


def _real_coeff(a):
    if isinstance(a, GaussianRational):
        if a.im:
            raise SplittingError("complex coefficients have no real splitting")
        return a.re
    return a


def to_real(c: HyperCurve, prec: int = 128) -> HyperCurve:
    fld = real_field(prec)
    if not c.field.exact:
        return c
    return HyperCurve(Poly(fld, [fld.convert(_real_coeff(a)) for a in c.f.coeffs]), c.label)


# -- the tower ---------------------------------------------------------

def _as_number(v):
    if isinstance(v, float):
        raise TowerError("parameters must be exact rationals, not floats")
    return Fraction(v)


def build_tower(H, I2, depth: int, mode: str = "real-numeric", strategy: Optional[str] = None,
                prec: int = 128, depth_cap: int = DEPTH_CAP) -> Tower:
    """Nodes 1..depth and edges (n+1 -> n); level 1 = C1, level 2 = C2.

    In exact mode every level stays exact while an exact splitting exists and
    the tower switches to RealField(prec) from the first level without one.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if depth < 2:
        raise TowerError(f"depth must be >= 2, got {depth}")
    if depth > depth_cap:
        raise TowerError(f"depth {depth} exceeds the cap {depth_cap}")
    if prec < 64:
        raise TowerError("real-numeric mode needs at least a 64-bit mantissa")
    strategy = strategy or ("lexicographic-exact" if mode == "exact" else "paired-real-roots")
    H, I2 = _as_number(H), _as_number(I2)
    c1 = curve_C1(H, I2)
    c2, s2 = curve_C2(H, I2)
    r = richelot_transform(c2, s2, "C2^")
    rel = affine_twist_relation(r.image, c1)
    if rel is None:  # pragma: no cover - the identity of the ending segment
        raise TowerError("Richelot image of C2 is not an affine twist of C1")
    a, t = rel
    nodes = [TowerNode(1, c1, None, {"curve": "C1"}),
             TowerNode(2, c2, s2, {"curve": "C2", "splitting": "canonical"})]
    edges = [TowerEdge(2, 1, r, s2, "forward", 2, c2,
                       {"image_to_C1": {"translation": elem_to_json(a), "twist": elem_to_json(t)},
                        "z_model_twist": -1})]
    avoid = s2  # going back through the canonical kernel would return to C1
    cur = c2
    exact = mode == "exact"
    for level in range(3, depth + 1):
        s = None
        if exact:
            try:
                s = choose_splitting(cur.f, "lexicographic-exact", avoid, prec)
                how = "lexicographic-exact"
            except SplittingError as exc:
                exact = False
                nodes[-1].provenance["fallback"] = str(exc)
            else:
                if s.G1.field != cur.field:  # the splitting needed i
                    cur = HyperCurve(Poly(s.G1.field, [s.G1.field.convert(a) for a in cur.f.coeffs]),
                                     cur.label)
                    nodes[-1].provenance["working_model"] = cur.field.name
        if s is None:
            try:
                cur_r = to_real(cur, prec)
                s = choose_splitting(cur_r.f, "paired-real-roots" if strategy == "lexicographic-exact"
                                     else strategy, avoid, prec)
            except SplittingError as exc:
                raise TowerError(f"level {level - 1}: {exc}") from exc
            if cur_r is not cur:
                nodes[-1].provenance["working_model"] = cur_r.field.name
            cur = cur_r
            how = "paired-real-roots"
        try:
            r = richelot_transform(cur, s, f"C{level}")
        except (RichelotError, CurveError) as exc:
            raise TowerError(f"level {level - 1}: {exc}") from exc
        nodes[-1].splitting = s
        nodes[-1].provenance["splitting"] = how
        nodes.append(TowerNode(level, r.image, None, {"curve": f"Richelot(C{level - 1})",
                                                       "field": r.image.field.name}))
        edges.append(TowerEdge(level, level - 1, r, s, "dual", level - 1, cur,
                               {"z_model_twist": -1}))
        avoid = dual_splitting(r, "image")
        cur = r.image
    return Tower(H, I2, mode, strategy, nodes, edges, prec)


# -- report ------------------------------------------------------------

def _absolute(c: HyperCurve):
    try:
        return igusa_clebsch(c.f).absolute()
    except (IgusaError, ZeroDivisionError):
        return None


def _abs_close(a, b, rel=1e-8) -> bool:
    if a is None or b is None or len(a) != len(b):
        return False
    for u, v in zip(a, b):
        u, v = complex(u), complex(v)
        if abs(u - v) > rel * max(1.0, abs(u), abs(v)):
            return False
    return True


def double_step_consistent(c: HyperCurve, s: QuadSplit) -> bool:
    """Forward then back through the dual splitting: same absolute invariants."""
    r = richelot_transform(c, s)
    back = richelot_transform(r.image, dual_splitting(r, "image"))
    if c.field.exact:
        return _absolute(back.image) == _absolute(c)
    return _abs_close(_absolute(back.image), _absolute(c))


def _min_root_gap(c: HyperCurve, prec: int) -> float:
    roots, _, _ = _roots(c.f, prec)
    return min(float(abs(a - b)) for k, a in enumerate(roots) for b in roots[k + 1:])


def tower_report(tower: Tower, samples: int = 20, seed: int = 0, precision="auto",
                 checks: bool = True) -> dict:
    """Per-level curves, per-edge delta and kernel, and the edge checks.

    With ``precision="auto"`` the checks run at double precision on exact
    towers and at the tower's working precision once a level is real-numeric:
    sorted real pairings contract the roots level by level (the genus-2 AGM),
    so double precision loses digits quickly with depth.
    """
    from .numverify import NumCtx, mult2_check, num_correspondence
    from .numverify.report import TOLERANCES

    if precision == "auto":
        real = any(not e.start.field.exact for e in tower.edges)
        precision = tower.prec if real else None
    ctx = NumCtx(precision)
    levels = []
    for nd in tower.nodes:
        row = {"level": nd.level, "curve": nd.curve.to_json(), "degree": nd.curve.degree,
               "provenance": nd.provenance, "min_root_gap": _min_root_gap(nd.curve, tower.prec)}
        if nd.splitting is not None:
            row["splitting"] = nd.splitting.to_json()
        levels.append(row)
    edges = []
    ok = True
    for e in tower.edges:
        src = e.start
        row = {"source": e.source, "target": e.target, "direction": e.direction,
               "step_from": e.step_from, "delta": elem_to_json(e.richelot.delta),
               "kernel": [poly_to_json(g) for g in e.splitting.factors],
               "provenance": e.provenance}
        if checks:
            nz = num_correspondence(e.correspondence(), ctx)
            rep = mult2_check(nz, samples=samples, seed=seed,
                              params={"edge": [e.source, e.target]})
            row["mult2"] = {k: rep[k] for k in ("max_error", "tolerance", "pass", "samples")}
            row["double_step"] = double_step_consistent(src, e.splitting)
            ok = ok and rep["pass"] and row["double_step"]
        edges.append(row)
    inv = [_absolute(nd.curve) for nd in tower.nodes]
    distinct = all(not _abs_close(inv[k], inv[k + 1]) if not tower.nodes[k].curve.field.exact
                   or not tower.nodes[k + 1].curve.field.exact else inv[k] != inv[k + 1]
                   for k in range(len(inv) - 1))
    return {"schema": "rk-1", "check": "tower", "H": elem_to_json(tower.H),
            "I2": elem_to_json(tower.I2), "mode": tower.mode, "strategy": tower.strategy,
            "depth": len(tower.nodes), "levels": levels, "edges": edges,
            "consecutive_invariants_differ": distinct, "precision": ctx.tag,
            "tolerances": dict(TOLERANCES), "pass": ok and distinct}
