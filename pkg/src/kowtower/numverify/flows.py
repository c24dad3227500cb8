"""Linearized flows: the Dubrovin system on Sym^2(C2), its transport to C1
through psi = (translation, twist) o phi, and the xi-chart of the physical top."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .. import kernels
from ..genus2 import affine_change, correspondence, richelot_transform
from ..kowtop import (
    TopError,
    TopState,
    c1_value,
    curve_C2,
    integrate_top,
    invariants_of,
    random_state,
    spectral_residual,
    xi_dynamic_residual,
    xi_eta_dynamic,
)
from .numeric import NumCtx, NumericError
from .push import num_correspondence, _images
from .report import TOLERANCES, make_report

RT2 = math.sqrt(2.0)


@dataclass
class FlowState:
    t: float
    points: list  # [(x1, u1), (x2, u2)] complex
    tags: dict = field(default_factory=dict)


@dataclass
class FlowTrajectory:
    t: np.ndarray
    x: np.ndarray  # (n, 2)
    u: np.ndarray  # (n, 2)
    fcoeffs: list

    def on_curve_drift(self) -> float:
        worst = 0.0
        for k in range(2):
            fx = np.polyval(list(reversed(self.fcoeffs)), self.x[:, k])
            scale = np.maximum(1.0, np.abs(fx))
            worst = max(worst, float(np.max(np.abs(self.u[:, k] ** 2 - fx) / scale)))
        return worst

    def abel_sums(self) -> np.ndarray:
        """Trapezoid quadrature of (dx/u, x dx/u) summed over both points, (n, 2)."""
        return _abel(self.x, 1.0 / self.u)


def _abel(x, inv_eta):
    """Cumulative sums of (d xi / eta, xi d xi / eta) along the paths (columns)."""
    dx = np.diff(x, axis=0)
    w0 = 0.5 * (inv_eta[1:] + inv_eta[:-1])
    w1 = 0.5 * (x[1:] * inv_eta[1:] + x[:-1] * inv_eta[:-1])
    s0 = np.concatenate([[0], np.cumsum(np.sum(dx * w0, axis=1))])
    s1 = np.concatenate([[0], np.cumsum(np.sum(dx * w1, axis=1))])
    return np.stack([s0, s1], axis=1)


def c2_coeffs(H, I2) -> list:
    c, _ = curve_C2(H, I2)
    return [complex(float(a.numerator) / a.denominator) if hasattr(a, "numerator") else complex(a)
            for a in c.f.coeffs]


def default_initial(H, I2, seed: int = 0) -> FlowState:
    """A reproducible generic divisor on C2 (away from Weierstrass points)."""
    rng = np.random.default_rng(seed)
    fc = c2_coeffs(H, I2)
    pts = []
    while len(pts) < 2:
        x = complex(*rng.normal(0.0, 0.7, 2))
        fx = np.polyval(list(reversed(fc)), x)
        if abs(fx) < 0.05 or any(abs(x - p[0]) < 0.3 for p in pts):
            continue
        pts.append((x, cmath.sqrt(fx)))
    return FlowState(0.0, pts)


def dubrovin_flow(initial: FlowState, fcoeffs, t_end: float, dt: float,
                  sample_every: int = 1) -> FlowTrajectory:
    (x1, u1), (x2, u2) = initial.points
    if abs(x1 - x2) < 1e-12:
        raise NumericError("x1 = x2: the Dubrovin system is singular")
    n = int(round(abs(t_end) / abs(dt)))
    out = kernels.rk4_dubrovin([x1, x2, u1, u2], list(fcoeffs), float(dt), n, sample_every)
    t = initial.t + np.arange(out.shape[0]) * dt * sample_every
    return FlowTrajectory(t, out[:, :2], out[:, 2:], list(fcoeffs))


def _fit_slope(t, y):
    A = np.stack([t - t[0], np.ones_like(t)], axis=1)
    coef = np.linalg.lstsq(A, y, rcond=None)[0]
    return coef[0]


def dubrovin_check(H, I2, t_end=0.5, dt=1e-4, seed=0) -> dict:
    fc = c2_coeffs(H, I2)
    init = default_initial(H, I2, seed)
    tr = dubrovin_flow(init, fc, t_end, dt)
    ab = tr.abel_sums()
    expect = np.stack([np.zeros_like(tr.t), -RT2 * (tr.t - tr.t[0])], axis=1)
    abel_err = float(np.max(np.abs(ab - expect)))
    drift = tr.on_curve_drift()
    back = dubrovin_flow(FlowState(tr.t[-1], [(tr.x[-1, 0], tr.u[-1, 0]), (tr.x[-1, 1], tr.u[-1, 1])]),
                         fc, t_end, -dt)
    rev = float(max(abs(back.x[-1, 0] - tr.x[0, 0]), abs(back.x[-1, 1] - tr.x[0, 1])))
    passed = (abel_err <= TOLERANCES["dubrovin_abel"] and drift <= TOLERANCES["dubrovin_on_curve"]
              and rev <= TOLERANCES["time_reversal"])
    return make_report("dubrovin", {"H": str(H), "I2": str(I2), "t_end": t_end, "dt": dt},
                       len(tr.t), abel_err, TOLERANCES["dubrovin_abel"], passed, None,
                       on_curve_drift=drift, time_reversal=rev, backend=kernels.BACKEND,
                       velocity=[complex(v) for v in _fit_slope(tr.t, ab)])


def _track(prev, new, use_eta=True):
    """Order ``new`` to continue ``prev`` by minimal total displacement."""
    w = 1.0 if use_eta else 0.0
    best, best_cost = None, None
    for perm in permutations(range(len(new))):
        cost = sum(abs(prev[i][0] - new[p][0]) + w * abs(prev[i][1] - new[p][1])
                   for i, p in enumerate(perm))
        if best_cost is None or cost < best_cost:
            best, best_cost = perm, cost
    return [new[p] for p in best]


def psi_images(nz, H, x, u):
    """The two images of (x, u) on C1: (xi, eta) = (X + H, i W)."""
    pts, flags = _images(nz, x, u, True)
    if flags:
        raise NumericError("image at infinity during transport")
    return [(X + H, 1j * W) for X, W in pts]


def flow_transport_check(H, I2, t_end=0.5, dt=1e-4, seed=0) -> dict:
    """Push the Dubrovin trajectory to C1 and test Kowalewski's linear flow."""
    fc = c2_coeffs(H, I2)
    init = default_initial(H, I2, seed)
    tr = dubrovin_flow(init, fc, t_end, dt)
    c2, s = curve_C2(H, I2)
    r = richelot_transform(c2, s)
    nz = num_correspondence(correspondence(c2, s, r), NumCtx())
    Hf = float(H)
    Hc = complex(Hf)
    I2f = float(I2)
    paths = []
    prev = None
    worst_curve = 0.0
    for k in range(len(tr.t)):
        imgs = []
        for j in range(2):
            imgs += psi_images(nz, Hc, complex(tr.x[k, j]), complex(tr.u[k, j]))
        if prev is not None:
            imgs = _track(prev, imgs)
        for xi, eta in imgs:
            p = c1_value(xi, Hf, I2f)
            worst_curve = max(worst_curve, abs(eta * eta - p) / max(1.0, abs(p)))
        paths.append(imgs)
        prev = imgs
    xi = np.array([[p[0] for p in row] for row in paths])
    eta = np.array([[p[1] for p in row] for row in paths])
    ab = _abel(xi, 1.0 / eta)
    tt = RT2 * (tr.t - tr.t[0])  # Kowalewski's time
    expect = np.stack([np.zeros_like(tt), 1j * tt], axis=1)
    dev = float(np.max(np.abs(ab - expect)))
    vel = _fit_slope(tr.t, ab)
    vel_target = np.array([0, 1j * RT2])
    vel_err = float(np.max(np.abs(vel - vel_target)))
    # zero time: transported initial divisor is the direct push
    direct = []
    for (x, u) in init.points:
        direct += psi_images(nz, Hc, x, u)
    zero_gap = max(min(abs(a[0] - b[0]) + abs(a[1] - b[1]) for b in direct) for a in paths[0])
    passed = dev <= TOLERANCES["flow_transport"] and vel_err <= TOLERANCES["velocity"]
    return make_report("flow", {"H": str(H), "I2": str(I2), "t_end": t_end, "dt": dt, "seed": seed},
                       len(tr.t), dev, TOLERANCES["flow_transport"], passed, None,
                       velocity=[complex(v) for v in vel], velocity_error=vel_err,
                       velocity_tolerance=TOLERANCES["velocity"], on_C1_residual=worst_curve,
                       zero_time_gap=zero_gap, dubrovin_abel_error=float(np.max(np.abs(
                           tr.abel_sums() - np.stack([np.zeros_like(tr.t), -RT2 * (tr.t - tr.t[0])], axis=1)))))


def top_to_curve_check(s0: TopState, t_end=2.0, dt=1e-3, mask=0.05, every=1,
                       xi_max=10.0, eta_min=0.05) -> dict:
    """Integrate the top; along the trajectory the xi-chart points lie on
    C1(H, I2) and, on each unmasked stretch, their Abel sums grow as (0, i) t~.

    Samples with |l2| < mask are masked (the chart is singular at l2 = 0).
    """
    inv0 = invariants_of(s0)
    if inv0.I1 != 0 or inv0.gamma != 1:
        raise TopError("precondition: (l, g) = 0 and |g|^2 = 1 required")
    H, I2 = float(inv0.H), float(inv0.I2)
    traj = integrate_top(s0, t_end, dt, sample_every=every)
    res = []
    segs, cur = [], []
    for k in range(len(traj.t)):
        s = traj.state(k)
        if abs(s.l[1]) < mask:
            if len(cur) > 2:
                segs.append(cur)
            cur = []
            continue
        res.append(xi_dynamic_residual(s))
        pts = xi_eta_dynamic(s)
        if max(abs(p[0]) for p in pts) > xi_max or min(abs(p[1]) for p in pts) < eta_min:
            # near the point at infinity or a Weierstrass point of C1 the
            # quadrature is unreliable: restart on the next stretch
            if len(cur) > 2:
                segs.append(cur)
            cur = []
            continue
        cur.append((traj.t[k], pts))
    if len(cur) > 2:
        segs.append(cur)
    # curve-side eta by continuity, then trapezoid Abel sums per stretch
    slope_err = 0.0
    for seg in segs:
        prev = seg[0][1]
        xs, es, ts = [], [], []
        for t, pts in seg:
            pts = _track(prev, pts, use_eta=False)
            fixed = []
            for (xi, eta_dyn), (pxi, peta) in zip(pts, prev):
                r = cmath.sqrt(c1_value(xi, H, I2))
                fixed.append((xi, r if abs(r - peta) <= abs(r + peta) else -r))
            prev = fixed
            xs.append([p[0] for p in fixed])
            es.append([p[1] for p in fixed])
            ts.append(t)
        ab = _abel(np.array(xs), 1.0 / np.array(es))
        tt = RT2 * (np.array(ts) - ts[0])
        slope_err = max(slope_err, float(np.max(np.abs(ab - np.stack([0 * tt, 1j * tt], axis=1))))
                        / max(1.0, tt[-1]))
    drift = traj.drift()
    inv_end = traj.invariants()
    consistency = float(max(abs(inv_end["H"][-1] - H), abs(inv_end["I2"][-1] - I2)))
    worst = max(res) if res else 0.0
    passed = worst <= TOLERANCES["xi_residual"] and slope_err <= 1e-3
    return make_report("top", {"l": [str(v) for v in s0.l], "g": [str(v) for v in s0.g],
                               "t_end": t_end, "dt": dt},
                       len(res), worst, TOLERANCES["xi_residual"], passed, None,
                       masked=len(traj.t) - len(res), abel_slope_error=slope_err,
                       invariant_consistency=consistency, drift=drift, H=H, I2=I2)


def spectral_check(samples: int = 100, seed: int = 0, constrained: bool = True) -> dict:
    """det(L(lam) - mu) against mu^4 - 2 d1 mu^2 + d2 at random (state, lam, mu)."""
    rng = np.random.default_rng(seed)
    errs = []
    for _ in range(samples):
        s = random_state(rng, constrained)
        lam = complex(*rng.normal(size=2))
        mu = complex(*rng.normal(size=2))
        if abs(lam) < 0.1:
            lam += 0.5
        errs.append(spectral_residual(s, lam, mu))
    tol = TOLERANCES["spectral"]
    worst = max(errs)
    passed = worst <= tol if constrained else worst > 1e3 * tol
    return make_report("spectral", {"seed": seed, "constrained": constrained}, samples,
                       worst, tol, passed, NumCtx(), min_error=min(errs))
