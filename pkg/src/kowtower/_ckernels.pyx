# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled RK4 kernels; same interface and arithmetic as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double cabs(double complex)


cdef inline void _top_rhs(double *y, double *o) noexcept nogil:
    cdef double w3 = 2.0 * y[2]
    o[0] = y[1] * w3 - y[2] * y[1]
    o[1] = y[2] * y[0] - y[0] * w3 - y[5]
    o[2] = y[4]
    o[3] = y[4] * w3 - y[5] * y[1]
    o[4] = y[5] * y[0] - y[3] * w3
    o[5] = y[3] * y[1] - y[4] * y[0]


def rk4_top(y0, double dt, Py_ssize_t nsteps, Py_ssize_t sample_every=1):
    cdef Py_ssize_t nout = nsteps // sample_every + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((nout, 6))
    cdef double y[6]
    cdef double t[6]
    cdef double k1[6]
    cdef double k2[6]
    cdef double k3[6]
    cdef double k4[6]
    cdef double h2 = dt / 2.0, h6 = dt / 6.0
    cdef Py_ssize_t i, step, k = 1
    for i in range(6):
        y[i] = y0[i]
        out[0, i] = y[i]
    for step in range(1, nsteps + 1):
        _top_rhs(y, k1)
        for i in range(6):
            t[i] = y[i] + h2 * k1[i]
        _top_rhs(t, k2)
        for i in range(6):
            t[i] = y[i] + h2 * k2[i]
        _top_rhs(t, k3)
        for i in range(6):
            t[i] = y[i] + dt * k3[i]
        _top_rhs(t, k4)
        for i in range(6):
            y[i] = y[i] + h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        if step % sample_every == 0:
            for i in range(6):
                out[k, i] = y[i]
            k += 1
    return out


cdef inline double complex _horner(double complex *c, int n, double complex x) noexcept nogil:
    cdef double complex acc = 0
    cdef int i
    for i in range(n - 1, -1, -1):
        acc = acc * x + c[i]
    return acc


cdef inline void _dub_rhs(double complex *s, double complex *fc, int nf,
                          double complex *dfc, int nd, double rt2,
                          double complex *o) noexcept nogil:
    cdef double complex d = s[0] - s[1]
    o[0] = -rt2 * s[2] / d
    o[1] = rt2 * s[3] / d
    o[2] = _horner(dfc, nd, s[0]) / (2.0 * s[2]) * o[0]
    o[3] = _horner(dfc, nd, s[1]) / (2.0 * s[3]) * o[1]


cdef inline double complex _project(double complex x, double complex u,
                                    double complex *fc, int nf) noexcept nogil:
    cdef double complex r = csqrt(_horner(fc, nf, x))
    if cabs(r - u) <= cabs(r + u):
        return r
    return -r


def rk4_dubrovin(s0, fcoeffs, double dt, Py_ssize_t nsteps, Py_ssize_t sample_every=1):
    cdef int nf = len(fcoeffs), nd = nf - 1, i
    cdef double complex fc[16]
    cdef double complex dfc[16]
    if nf > 16:
        raise ValueError("curve degree too large for the compiled kernel")
    for i in range(nf):
        fc[i] = complex(fcoeffs[i])
    for i in range(1, nf):
        dfc[i - 1] = i * fc[i]
    cdef double rt2 = sqrt(2.0)
    cdef Py_ssize_t nout = nsteps // sample_every + 1
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty((nout, 4), dtype=complex)
    cdef double complex s[4]
    cdef double complex t[4]
    cdef double complex k1[4]
    cdef double complex k2[4]
    cdef double complex k3[4]
    cdef double complex k4[4]
    cdef double h2 = dt / 2.0, h6 = dt / 6.0
    cdef Py_ssize_t step, k = 1
    for i in range(4):
        s[i] = complex(s0[i])
        out[0, i] = s[i]
    for step in range(1, nsteps + 1):
        _dub_rhs(s, fc, nf, dfc, nd, rt2, k1)
        for i in range(4):
            t[i] = s[i] + h2 * k1[i]
        _dub_rhs(t, fc, nf, dfc, nd, rt2, k2)
        for i in range(4):
            t[i] = s[i] + h2 * k2[i]
        _dub_rhs(t, fc, nf, dfc, nd, rt2, k3)
        for i in range(4):
            t[i] = s[i] + dt * k3[i]
        _dub_rhs(t, fc, nf, dfc, nd, rt2, k4)
        for i in range(4):
            s[i] = s[i] + h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        s[2] = _project(s[0], s[2], fc, nf)
        s[3] = _project(s[1], s[3], fc, nf)
        if step % sample_every == 0:
            for i in range(4):
                out[k, i] = s[i]
            k += 1
    return out
