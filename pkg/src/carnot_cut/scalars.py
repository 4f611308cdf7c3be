"""The scalar function family S, U, V, W, P, Q, R and the roots of tan(theta) = theta.

All functions take and return Python floats.  Below ``SERIES_THRESHOLD`` the
defining quotients are replaced by their Taylor expansions, since the direct
formula for W loses every significant digit as theta -> 0.
"""

from __future__ import annotations

import math
from functools import lru_cache

SERIES_THRESHOLD = 1e-2
POLE_TOL = 1e-12
NEAR_POLE_GAP = 1e-12


def _check_nonneg(theta: float) -> float:
    theta = float(theta)
    if not theta >= 0.0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    return theta


def _check_pos(theta: float) -> float:
    theta = float(theta)
    if not theta > 0.0:
        raise ValueError(f"theta must be > 0, got {theta}")
    return theta


def S(theta: float) -> float:
    """sin(theta) / theta."""
    th = _check_nonneg(theta)
    if th < SERIES_THRESHOLD:
        t2 = th * th
        return 1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0)))
    return math.sin(th) / th


def U(theta: float) -> float:
    """(theta - sin cos) / (4 theta^2)."""
    th = _check_nonneg(theta)
    if th < SERIES_THRESHOLD:
        t2 = th * th
        return th * (1.0 / 6.0 - t2 * (1.0 / 30.0 - t2 * (1.0 / 315.0 - t2 * (1.0 / 5670.0 - t2 / 155925.0))))
    return (th - math.sin(th) * math.cos(th)) / (4.0 * th * th)


def V(theta: float) -> float:
    """(sin - theta cos) / (2 theta^2)."""
    th = _check_nonneg(theta)
    if th < SERIES_THRESHOLD:
        t2 = th * th
        return th * (1.0 / 6.0 - t2 * (1.0 / 60.0 - t2 * (1.0 / 1680.0 - t2 * (1.0 / 90720.0 - t2 / 7983360.0))))
    return (math.sin(th) - th * math.cos(th)) / (2.0 * th * th)


def W(theta: float) -> float:
    """U - S V, strictly positive for theta > 0."""
    th = _check_nonneg(theta)
    if th < SERIES_THRESHOLD:
        t2 = th * th
        return th * t2 * (1.0 / 90.0 - t2 * (1.0 / 630.0 - t2 * (1.0 / 9450.0 - t2 * (2.0 / 467775.0))))
    s, c = math.sin(th), math.cos(th)
    return (th * th + th * s * c - 2.0 * s * s) / (4.0 * th ** 3)


def dS(theta: float) -> float:
    return -2.0 * V(_check_pos(theta))


def dU(theta: float) -> float:
    th = _check_pos(theta)
    return math.cos(th) / th * V(th)


def dV(theta: float) -> float:
    th = _check_pos(theta)
    return 0.5 * S(th) - 2.0 * V(th) / th


def bracketed_root(f, lo: float, hi: float, fprime=None, xtol: float = 1e-8,
                   ftol: float = 0.0, maxiter: int = 100) -> float:
    """Root of ``f`` in a sign-change bracket: bisection down to ``xtol``, then Newton.

    Newton steps leaving the current bracket fall back to bisection, so the
    iteration cannot escape.  The polish stops once ``|f| <= ftol`` or the
    step drops to rounding level.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    it = 0
    while hi - lo > xtol and it < maxiter:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        it += 1
    x = 0.5 * (lo + hi)
    if fprime is None:
        return x
    for _ in range(maxiter):
        fx = f(x)
        if abs(fx) <= ftol:
            break
        if (fx > 0) == (flo > 0):
            lo, flo = x, fx
        else:
            hi = x
        d = fprime(x)
        step = fx / d if d != 0.0 else math.inf
        xn = x - step
        if not lo <= xn <= hi:
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 4e-16 * max(1.0, abs(x)):
            x = xn
            break
        x = xn
    return x


def _tan_gap(theta: float) -> float:
    return math.sin(theta) - theta * math.cos(theta)


@lru_cache(maxsize=None)
def phi_k(k: int) -> float:
    """k-th positive root of tan(theta) = theta, lying in ]k pi, (k + 1/2) pi[."""
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    k = int(k)
    return bracketed_root(_tan_gap, k * math.pi, (k + 0.5) * math.pi,
                          fprime=lambda th: th * math.sin(th))


def _sqrt_wu(th: float) -> float:
    return math.sqrt(W(th) / U(th))


def _d_sqrt_wu(th: float) -> float:
    u, w = U(th), W(th)
    du = dU(th)
    dw = du - dS(th) * V(th) - S(th) * dV(th)
    return (dw * u - w * du) / (2.0 * u * u * math.sqrt(w / u))


def _check_not_pole(th: float) -> None:
    k = int(th // math.pi)
    for j in (k, k + 1):
        if j >= 1 and abs(th - phi_k(j)) < POLE_TOL:
            raise ValueError(f"pole of P at theta={th} (phi_{j})")


def P(theta: float) -> float:
    """-(S/V) sqrt(W/U); increasing from 0 to +inf on [pi, phi_1[."""
    th = _check_pos(theta)
    _check_not_pole(th)
    return -S(th) / V(th) * _sqrt_wu(th)


def Q(theta: float) -> float:
    """-U S / V on ]0, phi_1[; Q(pi) = 0 and Q -> +inf at phi_1."""
    th = float(theta)
    if not 0.0 < th < phi_k(1):
        raise ValueError(f"Q is defined on ]0, phi_1[, got theta={th}")
    return -U(th) * S(th) / V(th)


def R(theta: float) -> float:
    """(1 - S^2) / sqrt(U W); squared-length coefficient of |t| on the cut locus."""
    th = _check_pos(theta)
    s = S(th)
    return (1.0 - s * s) / math.sqrt(U(th) * W(th))


def _invert_on_first_branch(g, dg, v: float, full_output: bool):
    lo, hi = math.pi, phi_k(1)
    if v == 0.0:
        return (lo, False) if full_output else lo
    cap = hi - NEAR_POLE_GAP
    if g(cap) <= 0.0:
        return (cap, True) if full_output else cap
    theta = bracketed_root(g, lo, cap, fprime=dg)
    return (theta, False) if full_output else theta


def P_inv(v: float, full_output: bool = False):
    """Unique theta in [pi, phi_1[ with P(theta) = v.

    Values too large to separate from the pole return ``phi_1 - 1e-12``;
    with ``full_output`` a ``(theta, near_pole)`` pair is returned.
    """
    v = float(v)
    if not v >= 0.0:
        raise ValueError(f"P_inv needs v >= 0, got {v}")
    scale = max(1.0, v)

    # (P - v) V, scaled: no pole on the bracket
    def g(th):
        return (-S(th) * _sqrt_wu(th) - v * V(th)) / scale

    def dg(th):
        return (-dS(th) * _sqrt_wu(th) - S(th) * _d_sqrt_wu(th) - v * dV(th)) / scale

    return _invert_on_first_branch(g, dg, v, full_output)


def Q_inv(v: float, full_output: bool = False):
    """Unique theta in [pi, phi_1[ with Q(theta) = v (see :func:`P_inv` for ``full_output``)."""
    v = float(v)
    if not v >= 0.0:
        raise ValueError(f"Q_inv needs v >= 0, got {v}")
    scale = max(1.0, v)

    def g(th):
        return (-U(th) * S(th) - v * V(th)) / scale

    def dg(th):
        return (-dU(th) * S(th) - U(th) * dS(th) - v * dV(th)) / scale

    return _invert_on_first_branch(g, dg, v, full_output)


def solve_P_all(v: float, kmax: int, scan_points: int = 64) -> list[float]:
    """Roots of P(theta) = v, one per interval ]k pi, phi_k[ for k = 1..kmax.

    P is only known to be monotone on the first interval, so each interval
    is scanned for its first sign change before bisecting.
    """
    v = float(v)
    roots = []
    for k in range(1, int(kmax) + 1):
        lo, hi = k * math.pi, phi_k(k)
        sign = -1.0 if k % 2 == 0 else 1.0

        # |V| (P - v) on ]k pi, phi_k[, continuous up to both ends
        def g(th, sign=sign):
            return sign * (-S(th) * _sqrt_wu(th) - v * V(th))

        def dg(th, sign=sign):
            return sign * (-dS(th) * _sqrt_wu(th) - S(th) * _d_sqrt_wu(th) - v * dV(th))

        if v == 0.0:
            roots.append(lo)
            continue
        grid = [lo + (hi - lo) * i / scan_points for i in range(scan_points + 1)]
        prev = grid[0]
        # S(k pi) = 0 exactly; its rounded value would swamp tiny v
        fprev = -sign * v * V(lo)
        for th in grid[1:]:
            fth = g(th)
            if (fprev > 0) != (fth > 0) or fth == 0.0:
                root = bracketed_root(g, prev, th, fprime=dg)
                if lo <= root < hi:
                    roots.append(root)
                break
            prev, fprev = th, fth
    return roots
