"""Pure-Python RK4 kernels (reference implementation and fallback)."""

from __future__ import annotations

import cmath

import numpy as np


def _top_rhs(y):
    l1, l2, l3, g1, g2, g3 = y
    w3 = 2.0 * l3
    return (
        l2 * w3 - l3 * l2,
        l3 * l1 - l1 * w3 - g3,
        g2,  # (l x w)_3 = 0 since w1, w2 = l1, l2
        g2 * w3 - g3 * l2,
        g3 * l1 - g1 * w3,
        g1 * l2 - g2 * l1,
    )


def rk4_top(y0, dt, nsteps, sample_every=1):
    """Integrate the top with fixed-step RK4; returns the sampled states."""
    y = [float(v) for v in y0]
    nout = nsteps // sample_every + 1
    out = np.empty((nout, 6))
    out[0] = y
    h2, h6 = dt / 2.0, dt / 6.0
    k = 1
    for step in range(1, nsteps + 1):
        k1 = _top_rhs(y)
        k2 = _top_rhs([a + h2 * b for a, b in zip(y, k1)])
        k3 = _top_rhs([a + h2 * b for a, b in zip(y, k2)])
        k4 = _top_rhs([a + dt * b for a, b in zip(y, k3)])
        y = [a + h6 * (b + 2.0 * c + 2.0 * d + e) for a, b, c, d, e in zip(y, k1, k2, k3, k4)]
        if step % sample_every == 0:
            out[k] = y
            k += 1
    return out


def _horner(c, x):
    acc = 0j
    for a in reversed(c):
        acc = acc * x + a
    return acc


def _dub_rhs(s, fc, dfc, rt2):
    x1, x2, u1, u2 = s
    d = x1 - x2
    dx1 = -rt2 * u1 / d
    dx2 = rt2 * u2 / d
    du1 = _horner(dfc, x1) / (2.0 * u1) * dx1
    du2 = _horner(dfc, x2) / (2.0 * u2) * dx2
    return (dx1, dx2, du1, du2)


def _project(x, u, fc):
    # put u back on the curve, keeping the branch nearest the current value
    r = cmath.sqrt(_horner(fc, x))
    return r if abs(r - u) <= abs(r + u) else -r


def rk4_dubrovin(s0, fcoeffs, dt, nsteps, sample_every=1):
    """Dubrovin system dx_i/dt = -sqrt(2) u_i/(x_i - x_j) on y^2 = f(x).

    ``s0`` = (x1, x2, u1, u2) complex; returns sampled states (n, 4).
    """
    fc = [complex(c) for c in fcoeffs]
    dfc = [k * fc[k] for k in range(1, len(fc))]
    rt2 = 2.0 ** 0.5
    s = [complex(v) for v in s0]
    nout = nsteps // sample_every + 1
    out = np.empty((nout, 4), dtype=complex)
    out[0] = s
    h2, h6 = dt / 2.0, dt / 6.0
    k = 1
    for step in range(1, nsteps + 1):
        k1 = _dub_rhs(s, fc, dfc, rt2)
        k2 = _dub_rhs([a + h2 * b for a, b in zip(s, k1)], fc, dfc, rt2)
        k3 = _dub_rhs([a + h2 * b for a, b in zip(s, k2)], fc, dfc, rt2)
        k4 = _dub_rhs([a + dt * b for a, b in zip(s, k3)], fc, dfc, rt2)
        s = [a + h6 * (b + 2.0 * c + 2.0 * d + e) for a, b, c, d, e in zip(s, k1, k2, k3, k4)]
        s[2] = _project(s[0], s[2], fc)
        s[3] = _project(s[1], s[3], fc)
        if step % sample_every == 0:
            out[k] = s
            k += 1
    return out
