"""Report records and the tolerance table shared by all checks."""

from __future__ import annotations

import math

# All thresholds at double precision; residuals are scaled by input magnitude.
TOLERANCES = {
    "push_point": 1e-9,
    "kernel": 1e-6,
    "mult2": 1e-6,
    "trace": 1e-6,
    "dubrovin_on_curve": 1e-8,
    "dubrovin_abel": 1e-5,
    "time_reversal": 1e-6,
    "flow_transport": 1e-4,
    "velocity": 1e-5,
    "top_drift": 1e-7,
    "xi_residual": 1e-6,
    "spectral": 1e-10,
}


def _clean(x):
    if hasattr(x, "item") and not hasattr(x, "__len__"):  # numpy scalars
        x = x.item()
    if isinstance(x, complex):
        return {"re": _clean(x.real), "im": _clean(x.imag)}
    if hasattr(x, "_mpc_"):
        return _clean(complex(x))
    if hasattr(x, "_mpf_"):
        return float(x)
    if isinstance(x, float):
        return float(x) if math.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def make_report(check, params, samples, max_error, tolerance, passed, ctx=None, **extra) -> dict:
    rep = {"check": check, "params": params, "samples": samples,
           "max_error": float(max_error), "tolerance": tolerance, "pass": bool(passed)}
    if ctx is not None:
        rep["precision"] = ctx.tag
    for k, v in extra.items():
        rep[k] = v
    return _clean(rep)
