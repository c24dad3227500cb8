"""The Kowalewski top with inertia diag(1, 1, 1/2) and c = e1: equations of
motion, first integrals, the Lax matrix and spectral curve, the curves C1 and
C2, the xi-chart and the velocity vectors of the two linearized flows.

State arithmetic is generic: exact rationals and floats both work in
``invariants_of`` and ``top_vector_field``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exactfield import QQi, Poly, common_field, field_of
from .genus2 import CurveError, HyperCurve, QuadSplit


class TopError(ValueError):
    pass


@dataclass(frozen=True)
class TopState:
    l: tuple
    g: tuple

    def __post_init__(self):
        if len(self.l) != 3 or len(self.g) != 3:
            raise TopError("l and g must be 3-vectors")

    def as_floats(self) -> list[float]:
        return [float(v) for v in self.l] + [float(v) for v in self.g]

    @classmethod
    def from_seq(cls, v) -> "TopState":
        return cls(tuple(v[:3]), tuple(v[3:6]))


@dataclass(frozen=True)
class MotionInvariants:
    H: object
    I1: object
    I2: object
    gamma: object


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def invariants_of(s: TopState) -> MotionInvariants:
    l1, l2, l3 = s.l
    g1, g2, g3 = s.g
    H = (l1 * l1 + l2 * l2 + 2 * l3 * l3) / 2 - g1
    lg = l1 * g1 + l2 * g2 + l3 * g3
    I2 = (l1 * l1 - l2 * l2 + 2 * g1) ** 2 + 4 * (l1 * l2 + g2) ** 2
    return MotionInvariants(H, lg * lg, I2, g1 * g1 + g2 * g2 + g3 * g3)


def top_vector_field(s: TopState) -> TopState:
    """dl/dt = l x w + c x g, dg/dt = g x w with w = (l1, l2, 2 l3), c = e1."""
    l, g = s.l, s.g
    w = (l[0], l[1], 2 * l[2])
    lw = _cross(l, w)
    cg = (0 * g[0], -g[2], g[1])
    return TopState(tuple(a + b for a, b in zip(lw, cg)), _cross(g, w))


def directional_derivative(func, s: TopState):
    """d/dt of a polynomial ``func`` (degree <= 4 in the state) along the flow.

    The five-point stencil on the tangent line s + k*v, k = -2..2, is exact
    for quartics in k, so with rational states the result is exact.
    """
    v = top_vector_field(s)
    base = list(s.l) + list(s.g)
    dv = list(v.l) + list(v.g)

    def at(k):
        return func(TopState.from_seq([b + k * d for b, d in zip(base, dv)]))

    # exact first derivative at 0 of a quartic in k from k = -2..2
    return (at(-2) - 8 * at(-1) + 8 * at(1) - at(2)) / 12


@dataclass
class Trajectory:
    t: np.ndarray
    states: np.ndarray  # (n, 6) columns l1 l2 l3 g1 g2 g3
    backend: str

    def state(self, k: int) -> TopState:
        return TopState.from_seq([float(v) for v in self.states[k]])

    def invariants(self) -> dict:
        l = self.states[:, :3]
        g = self.states[:, 3:]
        H = 0.5 * (l[:, 0] ** 2 + l[:, 1] ** 2 + 2 * l[:, 2] ** 2) - g[:, 0]
        lg = np.sum(l * g, axis=1)
        I2 = (l[:, 0] ** 2 - l[:, 1] ** 2 + 2 * g[:, 0]) ** 2 + 4 * (l[:, 0] * l[:, 1] + g[:, 1]) ** 2
        return {"H": H, "I1": lg ** 2, "I2": I2, "gamma": np.sum(g * g, axis=1), "lg": lg}

    def drift(self) -> dict:
        """Max relative drift of H, I2, |g|^2 and the absolute drift of (l, g)."""
        inv = self.invariants()
        out = {}
        for key in ("H", "I2", "gamma"):
            ref = inv[key][0]
            out[key] = float(np.max(np.abs(inv[key] - ref)) / max(abs(ref), 1.0))
        out["lg"] = float(np.max(np.abs(inv["lg"])))
        return out

    def to_records(self) -> list[dict]:
        inv = self.invariants()
        recs = []
        for k in range(len(self.t)):
            recs.append({"t": float(self.t[k]), "l": [float(v) for v in self.states[k, :3]],
                         "g": [float(v) for v in self.states[k, 3:]],
                         "H": float(inv["H"][k]), "I1": float(inv["I1"][k]),
                         "I2": float(inv["I2"][k]), "gnorm": float(inv["gamma"][k])})
        return recs


def integrate_top(s0: TopState, t_end: float, dt: float, method: str = "rk4",
                  sample_every: int = 1, check_constraints: bool = True) -> Trajectory:
    """Fixed-step RK4 trajectory of the top (negative dt integrates backwards)."""
    if method != "rk4":
        raise ValueError(f"unknown method {method!r}")
    if dt == 0:
        raise ValueError("dt must be nonzero")
    if check_constraints:
        inv = invariants_of(TopState(*(tuple(float(x) for x in v) for v in (s0.l, s0.g))))
        if abs(inv.gamma - 1) > 1e-9 or abs(inv.I1) > 1e-9:
            raise TopError("initial state violates |g|^2 = 1 or (l, g) = 0")
    nsteps = int(round(abs(t_end) / abs(dt)))
    y0 = np.array(s0.as_floats(), dtype=float)
    out = kernels.rk4_top(y0, float(dt), nsteps, int(sample_every))
    t = np.arange(out.shape[0]) * dt * sample_every
    return Trajectory(t, out, kernels.BACKEND)


# -- Lax matrix and spectral curve --------------------------------------

def lax_matrix(s: TopState, lam: complex) -> np.ndarray:
    if lam == 0:
        raise TopError("lambda = 0 is a pole of L")
    l1, l2, l3 = (complex(v) for v in s.l)
    g1, g2, g3 = (complex(v) for v in s.g)
    a = 1 / lam
    return np.array([
        [g1 * a, g2 * a, -l2 + g3 * a, -l1],
        [g2 * a, -g1 * a, l1, -l2 - g3 * a],
        [l2 + g3 * a, -l1, -2 * lam - g1 * a, -2 * l3 + g2 * a],
        [l1, l2 - g3 * a, 2 * l3 + g2 * a, 2 * lam + g1 * a],
    ], dtype=complex)


def d1(z, H):
    return 1 / z - 2 * H + 2 * z


def d2(z, H, I2):
    return 1 / (z * z) - 4 * H / z + I2


def spectral_poly(lam, mu, H, I2):
    z = lam * lam
    return mu ** 4 - 2 * d1(z, H) * mu ** 2 + d2(z, H, I2)


def spectral_residual(s: TopState, lam: complex, mu: complex) -> float:
    """Relative gap between det(L(lam) - mu) and the spectral polynomial."""
    inv = invariants_of(TopState(tuple(float(v) for v in s.l), tuple(float(v) for v in s.g)))
    L = lax_matrix(s, lam)
    lhs = np.linalg.det(L - mu * np.eye(4))
    rhs = spectral_poly(lam, mu, inv.H, inv.I2)
    scale = max(1.0, abs(mu) ** 4, abs(d1(lam * lam, inv.H) * mu * mu), abs(d2(lam * lam, inv.H, inv.I2)))
    return abs(lhs - rhs) / scale


# -- the two curves ------------------------------------------------------

def degeneracy_factors(H, I2) -> list[tuple[str, object]]:
    """The four factors whose vanishing makes C1 and C2 singular."""
    return [("I2 = 0", I2), ("I2 = 4", I2 - 4), ("4H² − I2 = 0", 4 * H * H - I2),
            ("4H² − I2 + 4 = 0", 4 * H * H - I2 + 4)]


def check_nondegenerate(H, I2):
    for name, val in degeneracy_factors(H, I2):
        if not val:
            raise CurveError(f"degenerate parameters: {name}")


def _param_field(H, I2):
    fld = common_field(field_of(H), field_of(I2))
    return fld, fld.convert(H), fld.convert(I2)


def curve_C2(H, I2) -> tuple[HyperCurve, QuadSplit]:
    """u^2 = x (x^2 + 2Hx + I2/4)(x^2 + 2Hx - 1 + I2/4) with its canonical splitting."""
    fld, H, I2 = _param_field(H, I2)
    check_nondegenerate(H, I2)
    x = Poly.x(fld)
    G1 = x
    G2 = x * x + x.scale(2 * H) + I2 / 4
    G3 = G2 - 1
    return HyperCurve(G1 * G2 * G3, "C2"), QuadSplit(G1, G2, G3)


def curve_C1(H, I2) -> HyperCurve:
    """eta^2 = 2 xi ((xi - H)^2 + 1 - I2/4)((xi - H)^2 - I2/4)."""
    fld, H, I2 = _param_field(H, I2)
    check_nondegenerate(H, I2)
    x = Poly.x(fld)
    q = (x - H) * (x - H)
    return HyperCurve(x.scale(2) * (q + 1 - I2 / 4) * (q - I2 / 4), "C1")


# -- xi chart --------------------------------------------------------------

def R_poly(x, H, I2):
    return -x * x + 2 * H * x + 1 - I2 / 4


def _chart_xy(l1, l2):
    # The chart of the linearizing variables uses x, y = (l1 +- i l2)/sqrt(2)
    # in the present normalization (I33 = 1/2); see the notes on scaling.
    r = 1 / math.sqrt(2)
    return complex(l1, l2) * r, complex(l1, -l2) * r


@dataclass(frozen=True)
class XiChart:
    xi: tuple       # (xi1, xi2), unordered
    eta: tuple      # eta_i = +-sqrt(P_C1(xi_i)), principal branch
    residual: float
    H: float
    I2: float


def xi_pair(s: TopState, H=None, I2=None):
    """(xi1, xi2) from the state; H and I2 default to the state's values."""
    l1, l2, l3 = (float(v) for v in s.l)
    if l2 == 0:
        raise TopError("x = y (l2 = 0): the xi chart is singular")
    if H is None or I2 is None:
        inv = invariants_of(TopState((l1, l2, l3), tuple(float(v) for v in s.g)))
        H, I2 = inv.H, inv.I2
    x, y = _chart_xy(l1, l2)
    N = R_poly(x * y, H, I2)
    S = cmath.sqrt(R_poly(x * x, H, I2) * R_poly(y * y, H, I2))
    D = (x - y) ** 2
    return H + (N - S) / D, H + (N + S) / D


def c1_value(xi, H, I2):
    q = (xi - H) ** 2
    return 2 * xi * (q + 1 - I2 / 4) * (q - I2 / 4)


def xi_variables(s: TopState, tol: float = 1e-8) -> XiChart:
    inv = invariants_of(TopState(tuple(float(v) for v in s.l), tuple(float(v) for v in s.g)))
    H, I2 = inv.H, inv.I2
    xi1, xi2 = xi_pair(s, H, I2)
    etas = tuple(cmath.sqrt(c1_value(z, H, I2)) for z in (xi1, xi2))
    res = xi_dynamic_residual(s)
    if res > tol:
        raise TopError(f"xi chart off C1: residual {res:.3e}")
    return XiChart((xi1, xi2), etas, res, H, I2)


def xi_velocity(s: TopState, H=None, I2=None):
    """Analytic d(xi1)/dt, d(xi2)/dt along the flow (chain rule)."""
    l1, l2, l3 = (float(v) for v in s.l)
    g = tuple(float(v) for v in s.g)
    if H is None or I2 is None:
        inv = invariants_of(TopState((l1, l2, l3), g))
        H, I2 = inv.H, inv.I2
    v = top_vector_field(TopState((l1, l2, l3), g))
    x, y = _chart_xy(l1, l2)
    dx, dy = _chart_xy(v.l[0], v.l[1])
    Rp = lambda w: -2 * w + 2 * H  # noqa: E731
    N = R_poly(x * y, H, I2)
    dN = Rp(x * y) * (dx * y + x * dy)
    A, B = R_poly(x * x, H, I2), R_poly(y * y, H, I2)
    S = cmath.sqrt(A * B)
    dS2 = Rp(x * x) * 2 * x * dx * B + A * Rp(y * y) * 2 * y * dy
    dS = dS2 / (2 * S)
    D = (x - y) ** 2
    dD = 2 * (x - y) * (dx - dy)
    out = []
    for sign in (-1, 1):
        num = N + sign * S
        dnum = dN + sign * dS
        out.append((dnum * D - num * dD) / (D * D))
    return tuple(out)


def xi_dynamic_residual(s: TopState) -> float:
    """|eta_dyn^2 - P_C1(xi)| scaled, with eta_dyn = (xi_i - xi_j) dxi_i/dt~ / i.

    This is the content of the reduction to Kowalewski's equations: with
    that eta, both equations hold identically, so the check is that the
    points (xi_i, eta_i) lie on C1.
    """
    inv = invariants_of(TopState(tuple(float(v) for v in s.l), tuple(float(v) for v in s.g)))
    H, I2 = inv.H, inv.I2
    xi1, xi2 = xi_pair(s, H, I2)
    v1, v2 = xi_velocity(s, H, I2)
    rt2 = math.sqrt(2)
    worst = 0.0
    for a, b, va in ((xi1, xi2, v1), (xi2, xi1, v2)):
        eta = (a - b) * (va / rt2) / 1j
        p = c1_value(a, H, I2)
        scale = max(1.0, abs(p), abs(eta) ** 2, abs(a) ** 5)
        worst = max(worst, abs(eta * eta - p) / scale)
    return worst


def xi_eta_dynamic(s: TopState):
    """[(xi_i, eta_i)] with eta_i from the dynamics (branch fixed by the flow)."""
    inv = invariants_of(TopState(tuple(float(v) for v in s.l), tuple(float(v) for v in s.g)))
    xi1, xi2 = xi_pair(s, inv.H, inv.I2)
    v1, v2 = xi_velocity(s, inv.H, inv.I2)
    rt2 = math.sqrt(2)
    return [(xi1, (xi1 - xi2) * v1 / rt2 / 1j), (xi2, (xi2 - xi1) * v2 / rt2 / 1j)]


# -- spectral chart -> canonical model of C2 -------------------------------

def spectral_to_canonical(z: complex, mu: complex, H, I2, tol: float = 1e-8):
    if z == 0:
        raise TopError("z = 0 is a pole")
    H, I2 = float(H), float(I2)
    res = abs(mu ** 4 - 2 * d1(z, H) * mu ** 2 + d2(z, H, I2))
    scale = max(1.0, abs(mu) ** 4, abs(d1(z, H) * mu * mu), abs(d2(z, H, I2)))
    if res / scale > tol:
        raise TopError(f"(z, mu) is off the spectral curve (residual {res / scale:.3e})")
    x = (mu * mu - 1 / z) / 2
    u = mu / math.sqrt(2) * (x * x + 2 * H * x - 1 + I2 / 4)
    return x, u


def c2_value(x, H, I2):
    return x * (x * x + 2 * H * x + I2 / 4) * (x * x + 2 * H * x - 1 + I2 / 4)


def spectral_mus(z: complex, H, I2) -> list:
    """The four mu over z (roots of mu^4 - 2 d1 mu^2 + d2)."""
    a, b = d1(z, H), d2(z, H, I2)
    disc = cmath.sqrt(a * a - b)
    out = []
    for m2 in (a + disc, a - disc):
        r = cmath.sqrt(m2)
        out += [r, -r]
    return out


def omega0_spectral(z, mu, H):
    return 1 / (mu * z * (mu * mu - d1(z, H)))


# -- velocity vectors -------------------------------------------------------

@dataclass(frozen=True)
class VelocityVector:
    """Coordinates (exact, in Q(i)) times sqrt(2)^sqrt2_power, in a named basis."""

    coords: tuple
    basis: str
    sqrt2_power: int = 0
    time: str = "t"

    def numeric(self) -> tuple:
        k = math.sqrt(2) ** self.sqrt2_power
        return tuple(complex(c) * k for c in self.coords)


def canonical_velocities() -> tuple[VelocityVector, VelocityVector]:
    """Dubrovin velocity on J2 in (dx/u, x dx/u), Kowalewski velocity on J1
    in (dxi/eta, xi dxi/eta), both with respect to the time t."""
    z, m1, i = QQi.zero, -QQi.one, QQi.i
    v2 = VelocityVector((z, m1), "dx/u, x dx/u", 1)
    v1 = VelocityVector((z, i), "dxi/eta, xi dxi/eta", 1)
    return v2, v1


def dubrovin_velocity_omega() -> VelocityVector:
    return VelocityVector((QQi.zero, -QQi.one), "omega0, omega1", 0)


def kowalewski_velocity_ttilde() -> VelocityVector:
    return VelocityVector((QQi.zero, QQi.i), "dxi/eta, xi dxi/eta", 0, "t~")


def omega_to_canonical(v: VelocityVector) -> VelocityVector:
    """(omega0, omega1) = (dx, x dx)/(sqrt(2) u): coordinates gain a sqrt(2)."""
    if v.basis != "omega0, omega1":
        raise ValueError("expected the omega basis")
    return VelocityVector(v.coords, "dx/u, x dx/u", v.sqrt2_power + 1, v.time)


def ttilde_to_t(v: VelocityVector) -> VelocityVector:
    """t~ = sqrt(2) t: d/dt = sqrt(2) d/dt~."""
    if v.time != "t~":
        raise ValueError("velocity is not w.r.t. t~")
    return VelocityVector(v.coords, v.basis, v.sqrt2_power + 1, "t")


def transport_velocity(pb, v: VelocityVector) -> VelocityVector:
    """Carry a velocity through a cotangent pullback (transpose action)."""
    return VelocityVector(pb.transport(v.coords), ", ".join(pb.source_basis),
                          v.sqrt2_power, v.time)


def random_state(rng, constrained: bool = True, scale: float = 1.0) -> TopState:
    """Random (l, g) with |g| = 1 and, if ``constrained``, (l, g) = 0."""
    g = rng.normal(size=3)
    g /= np.linalg.norm(g)
    l = rng.normal(scale=scale, size=3)
    l -= np.dot(l, g) * g
    if not constrained:
        l += (0.5 + rng.random()) * g
    return TopState(tuple(float(v) for v in l), tuple(float(v) for v in g))
