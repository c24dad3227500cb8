"""Floating-point verification: points and classes through Z, the kernel,
multiplication by 2, the trace map, and the transport of the top's flows."""

from .numeric import NumClass, NumCtx, NumCurve, NumericError, class_from_points, num_curve
from .push import (
    CPoint,
    NumZ,
    kernel_check,
    mult2_check,
    num_correspondence,
    push_class,
    push_point,
    trace_check,
)
from .report import TOLERANCES, make_report

__all__ = [
    "NumClass", "NumCtx", "NumCurve", "NumericError", "class_from_points", "num_curve",
    "CPoint", "NumZ", "kernel_check", "mult2_check", "num_correspondence", "push_class",
    "push_point", "trace_check", "TOLERANCES", "make_report",
]
