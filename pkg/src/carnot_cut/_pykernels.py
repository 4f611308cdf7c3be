"""Pure-Python versions of the hot loops (fallback for the compiled ``_ckernels``).

A covector is a flat 6-sequence ``(xi1, xi2, xi3, tau1, tau2, tau3)``; a
point of the cross model is a flat 6-array ``(x1, x2, x3, t1, t2, t3)``.
"""

import math

import numpy as np

# for |lambda s| below this the curve coefficients use their Taylor series
SMALL_PHASE = 0.5
_NTERMS = 10
_F = math.factorial
# Taylor coefficients in x^2 of the five curve coefficients (see _coeffs)
_SER_A = tuple((-1) ** k / _F(2 * k + 1) for k in range(_NTERMS))
_SER_B = tuple((-1) ** k / _F(2 * k + 2) for k in range(_NTERMS))
_SER_AB = tuple((-1) ** (k + 1) / (2 * _F(2 * k + 1)) for k in range(1, _NTERMS + 1))
_SER_AZ = tuple((-1) ** k * (k - 1) / _F(2 * k) for k in range(2, _NTERMS + 2))
_SER_BZ = tuple((-1) ** k * (2 * k - 1) / (2 * _F(2 * k + 1)) for k in range(1, _NTERMS + 1))


def _horner(coef, x2):
    acc = 0.0
    for c in reversed(coef):
        acc = acc * x2 + c
    return acc


def _coeffs(lam, s):
    x = lam * s
    if abs(x) < SMALL_PHASE:
        x2 = x * x
        return (
            s * _horner(_SER_A, x2),
            s * x * _horner(_SER_B, x2),
            s * s * x * _horner(_SER_AB, x2),
            s * s * x2 * _horner(_SER_AZ, x2),
            s * s * x * _horner(_SER_BZ, x2),
        )
    sx, cx = math.sin(x), math.cos(x)
    l2 = 2.0 * lam * lam
    return (
        sx / lam,
        2.0 * math.sin(0.5 * x) ** 2 / lam,
        (x - sx) / l2,
        (4.0 * math.sin(0.5 * x) ** 2 - x * sx) / l2,
        (x * (1.0 + cx) - 2.0 * sx) / l2,
    )


def _exp(p0, p1, p2, q0, q1, q2, s):
    lam = math.sqrt(q0 * q0 + q1 * q1 + q2 * q2)
    if lam == 0.0:
        return (s * p0, s * p1, s * p2, 0.0, 0.0, 0.0)
    n0, n1, n2 = q0 / lam, q1 / lam, q2 / lam
    zc = p0 * n0 + p1 * n1 + p2 * n2
    z0, z1, z2 = zc * n0, zc * n1, zc * n2
    a0, a1, a2 = p0 - z0, p1 - z1, p2 - z2
    b0 = n1 * p2 - n2 * p1
    b1 = n2 * p0 - n0 * p2
    b2 = n0 * p1 - n1 * p0
    ca, cb, cab, caz, cbz = _coeffs(lam, s)
    # a x b = |a|^2 n,  a x z = zc (a x n),  b x z = zc a
    aa = a0 * a0 + a1 * a1 + a2 * a2
    axn0 = a1 * n2 - a2 * n1
    axn1 = a2 * n0 - a0 * n2
    axn2 = a0 * n1 - a1 * n0
    return (
        ca * a0 + cb * b0 + s * z0,
        ca * a1 + cb * b1 + s * z1,
        ca * a2 + cb * b2 + s * z2,
        cab * aa * n0 + zc * (caz * axn0 + cbz * a0),
        cab * aa * n1 + zc * (caz * axn1 + cbz * a1),
        cab * aa * n2 + zc * (caz * axn2 + cbz * a2),
    )


def exp_cross(p, s=1.0):
    """Closed-form exponential map: endpoint at time ``s`` of the flow from covector ``p``."""
    return np.array(_exp(*(float(v) for v in p), float(s)))


def exp_cross_jac(p, s=1.0, h=1e-6):
    """Value and central-difference Jacobian (6x6) of :func:`exp_cross`."""
    p = [float(v) for v in p]
    s = float(s)
    f = np.array(_exp(*p, s))
    J = np.empty((6, 6))
    for j in range(6):
        step = h * max(1.0, abs(p[j]))
        keep = p[j]
        p[j] = keep + step
        fp = _exp(*p, s)
        p[j] = keep - step
        fm = _exp(*p, s)
        p[j] = keep
        inv = 0.5 / step
        for i in range(6):
            J[i, j] = (fp[i] - fm[i]) * inv
    return f, J


def _rhs(st, q0, q1, q2):
    x0, x1, x2, _, _, _, u0, u1, u2 = st
    return (
        u0, u1, u2,
        0.5 * (x1 * u2 - x2 * u1),
        0.5 * (x2 * u0 - x0 * u2),
        0.5 * (x0 * u1 - x1 * u0),
        q1 * u2 - q2 * u1,
        q2 * u0 - q0 * u2,
        q0 * u1 - q1 * u0,
    )


def _rk4(p, s, steps, record):
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    q0, q1, q2 = float(p[3]), float(p[4]), float(p[5])
    st = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, float(p[0]), float(p[1]), float(p[2]))
    h = float(s) / steps
    path = [st] if record else None
    for _ in range(steps):
        k1 = _rhs(st, q0, q1, q2)
        k2 = _rhs(tuple(v + 0.5 * h * d for v, d in zip(st, k1)), q0, q1, q2)
        k3 = _rhs(tuple(v + 0.5 * h * d for v, d in zip(st, k2)), q0, q1, q2)
        k4 = _rhs(tuple(v + h * d for v, d in zip(st, k3)), q0, q1, q2)
        st = tuple(v + h / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4)
                   for v, d1, d2, d3, d4 in zip(st, k1, k2, k3, k4))
        if record:
            path.append(st)
    return np.array(path) if record else np.array(st)


def rk4_cross(p, s, steps):
    """Classical RK4 for ``x' = u, t' = x cross u / 2, u' = tau cross u``; returns ``(x, t, u)`` at ``s``."""
    return _rk4(p, s, int(steps), False)


def rk4_cross_path(p, s, steps):
    """Like :func:`rk4_cross` but returns all ``steps + 1`` states, shape ``(steps + 1, 9)``."""
    return _rk4(p, s, int(steps), True)
