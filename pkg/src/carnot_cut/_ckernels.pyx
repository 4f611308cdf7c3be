# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops; same contracts as ``_pykernels``."""

from libc.math cimport sin, cos, sqrt, fabs

import numpy as np

from ._pykernels import _SER_A, _SER_B, _SER_AB, _SER_AZ, _SER_BZ

DEF NTERMS = 10
cdef double SMALL_PHASE = 0.5
cdef double SER[5][NTERMS]
for _i in range(NTERMS):
    SER[0][_i] = _SER_A[_i]
    SER[1][_i] = _SER_B[_i]
    SER[2][_i] = _SER_AB[_i]
    SER[3][_i] = _SER_AZ[_i]
    SER[4][_i] = _SER_BZ[_i]


cdef inline double _horner(int j, double x2) nogil:
    cdef double acc = 0.0
    cdef int k
    for k in range(NTERMS - 1, -1, -1):
        acc = acc * x2 + SER[j][k]
    return acc


cdef inline void _coeffs(double lam, double s, double* c) nogil:
    cdef double x = lam * s, x2, sx, cx, l2
    if fabs(x) < SMALL_PHASE:
        x2 = x * x
        c[0] = s * _horner(0, x2)
        c[1] = s * x * _horner(1, x2)
        c[2] = s * s * x * _horner(2, x2)
        c[3] = s * s * x2 * _horner(3, x2)
        c[4] = s * s * x * _horner(4, x2)
        return
    sx = sin(x)
    cx = cos(x)
    l2 = 2.0 * lam * lam
    c[0] = sx / lam
    c[1] = 2.0 * sin(0.5 * x) * sin(0.5 * x) / lam
    c[2] = (x - sx) / l2
    c[3] = (4.0 * sin(0.5 * x) * sin(0.5 * x) - x * sx) / l2
    c[4] = (x * (1.0 + cx) - 2.0 * sx) / l2


cdef void _exp(const double* p, double s, double* out) nogil:
    cdef double lam = sqrt(p[3] * p[3] + p[4] * p[4] + p[5] * p[5])
    cdef double n[3]
    cdef double a[3]
    cdef double b[3]
    cdef double axn[3]
    cdef double c[5]
    cdef double zc, aa
    cdef int i
    if lam == 0.0:
        for i in range(3):
            out[i] = s * p[i]
            out[i + 3] = 0.0
        return
    for i in range(3):
        n[i] = p[3 + i] / lam
    zc = p[0] * n[0] + p[1] * n[1] + p[2] * n[2]
    for i in range(3):
        a[i] = p[i] - zc * n[i]
    b[0] = n[1] * p[2] - n[2] * p[1]
    b[1] = n[2] * p[0] - n[0] * p[2]
    b[2] = n[0] * p[1] - n[1] * p[0]
    _coeffs(lam, s, c)
    aa = a[0] * a[0] + a[1] * a[1] + a[2] * a[2]
    axn[0] = a[1] * n[2] - a[2] * n[1]
    axn[1] = a[2] * n[0] - a[0] * n[2]
    axn[2] = a[0] * n[1] - a[1] * n[0]
    for i in range(3):
        out[i] = c[0] * a[i] + c[1] * b[i] + s * zc * n[i]
        out[i + 3] = c[2] * aa * n[i] + zc * (c[3] * axn[i] + c[4] * a[i])


def exp_cross(p, double s=1.0):
    cdef double buf[6]
    cdef double res[6]
    cdef int i
    for i in range(6):
        buf[i] = p[i]
    _exp(buf, s, res)
    return np.array([res[0], res[1], res[2], res[3], res[4], res[5]])


def exp_cross_jac(p, double s=1.0, double h=1e-6):
    cdef double buf[6]
    cdef double fp[6]
    cdef double fm[6]
    cdef double f0[6]
    cdef double keep, step, inv
    cdef int i, j
    for i in range(6):
        buf[i] = p[i]
    _exp(buf, s, f0)
    J = np.empty((6, 6))
    cdef double[:, ::1] Jv = J
    for j in range(6):
        keep = buf[j]
        step = h * (fabs(keep) if fabs(keep) > 1.0 else 1.0)
        buf[j] = keep + step
        _exp(buf, s, fp)
        buf[j] = keep - step
        _exp(buf, s, fm)
        buf[j] = keep
        inv = 0.5 / step
        for i in range(6):
            Jv[i, j] = (fp[i] - fm[i]) * inv
    return np.array([f0[0], f0[1], f0[2], f0[3], f0[4], f0[5]]), J


cdef inline void _rhs(const double* st, const double* q, double* d) nogil:
    d[0] = st[6]
    d[1] = st[7]
    d[2] = st[8]
    d[3] = 0.5 * (st[1] * st[8] - st[2] * st[7])
    d[4] = 0.5 * (st[2] * st[6] - st[0] * st[8])
    d[5] = 0.5 * (st[0] * st[7] - st[1] * st[6])
    d[6] = q[1] * st[8] - q[2] * st[7]
    d[7] = q[2] * st[6] - q[0] * st[8]
    d[8] = q[0] * st[7] - q[1] * st[6]


cdef void _rk4_step(double* st, const double* q, double h) nogil:
    cdef double k1[9]
    cdef double k2[9]
    cdef double k3[9]
    cdef double k4[9]
    cdef double tmp[9]
    cdef int i
    _rhs(st, q, k1)
    for i in range(9):
        tmp[i] = st[i] + 0.5 * h * k1[i]
    _rhs(tmp, q, k2)
    for i in range(9):
        tmp[i] = st[i] + 0.5 * h * k2[i]
    _rhs(tmp, q, k3)
    for i in range(9):
        tmp[i] = st[i] + h * k3[i]
    _rhs(tmp, q, k4)
    for i in range(9):
        st[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


def _rk4(p, double s, long steps, bint record):
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    cdef double st[9]
    cdef double q[3]
    cdef double h = s / steps
    cdef long k
    cdef int i
    for i in range(3):
        st[i] = 0.0
        st[i + 3] = 0.0
        st[i + 6] = p[i]
        q[i] = p[i + 3]
    path = np.empty((steps + 1 if record else 1, 9))
    cdef double[:, ::1] pv = path
    if record:
        for i in range(9):
            pv[0, i] = st[i]
    with nogil:
        for k in range(steps):
            _rk4_step(st, q, h)
            if record:
                for i in range(9):
                    pv[k + 1, i] = st[i]
    if record:
        return path
    return np.array([st[0], st[1], st[2], st[3], st[4], st[5], st[6], st[7], st[8]])


def rk4_cross(p, double s, long steps):
    return _rk4(p, s, steps, False)


def rk4_cross_path(p, double s, long steps):
    return _rk4(p, s, steps, True)
