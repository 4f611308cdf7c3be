"""Numerical distance by multistart covector shooting, plus the corner-curve probes at cut points."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.optimize import least_squares
from scipy.stats import qmc

from . import kernels
from .algebra import CrossPoint, GroupPoint, from_cross, to_cross
from .cutlocus import CutPoint, cut_distance, family_vectors
from .geodesics import AdmissibleTriple
from .hamiltonian import Covector, T_cut
from .scalars import Q, S, U, V, dU, dV, phi_k

PHI1 = phi_k(1)


class ShootingFailure(RuntimeError):
    """No restart reached the target within the residual tolerance."""

    def __init__(self, message, best_residual=math.inf):
        super().__init__(message)
        self.best_residual = best_residual


def _env_threads() -> int:
    raw = os.environ.get("CARNOT_CUT_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


@dataclass(frozen=True)
class SolverConfig:
    """Shooting parameters.

    Targets are rescaled to unit homogeneous norm before shooting, so
    ``residual_tol`` is relative to that scale.  ``cut_slack`` is the relative
    margin by which a converged extremal may overshoot its cut time before
    being discarded.
    """

    n_starts: int = 64
    seed: int = 0
    residual_tol: float = 1e-11
    cut_slack: float = 1e-9
    max_nfev: int = 400
    threads: int = field(default_factory=_env_threads)

    def __post_init__(self):
        if self.n_starts < 1:
            raise ValueError("n_starts must be >= 1")
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")


@dataclass(frozen=True)
class ShootingResult:
    distance: float
    minimizer: Covector
    residual: float
    restarts_used: int
    converged: int = 0


def homogeneous_norm(q: CrossPoint) -> float:
    return (float(np.dot(q.x, q.x)) ** 2 + float(np.dot(q.t, q.t))) ** 0.25


def lower_bound(q: CrossPoint) -> float:
    """Cheap lower bound on the distance from the origin.

    ``|x|`` is the length of the horizontal projection; ``sqrt(2 pi |t|)``
    comes from the isoperimetric inequality in the plane of ``t``, and is
    improved to ``sqrt(4 pi |t|)`` on the center.
    """
    xn = float(np.linalg.norm(q.x))
    tn = float(np.linalg.norm(q.t))
    c = 4.0 * math.pi if xn == 0.0 else 2.0 * math.pi
    return max(xn, math.sqrt(c * tn))


def _as_cross(target: Union[GroupPoint, CrossPoint]) -> CrossPoint:
    if isinstance(target, GroupPoint):
        return to_cross(target)
    if isinstance(target, CrossPoint):
        return target
    raise TypeError(f"expected GroupPoint or CrossPoint, got {type(target).__name__}")


def _starts(n: int, seed: int, lo: float, hi: float) -> np.ndarray:
    """Quasi-random covectors: uniform directions, ``|xi|`` in ``[lo, hi]``, ``|tau|`` in ``[0, 2 phi_1]``."""
    u = qmc.Sobol(d=6, scramble=True, seed=seed).random(n)
    out = np.empty((n, 6))
    for k, (a1, a2, r1, b1, b2, r2) in enumerate(u):
        out[k, :3] = _sphere(a1, a2) * (lo + (hi - lo) * r1)
        out[k, 3:] = _sphere(b1, b2) * (2.0 * PHI1 * r2)
    return out


def _sphere(u1: float, u2: float) -> np.ndarray:
    z = 2.0 * u1 - 1.0
    r = math.sqrt(max(0.0, 1.0 - z * z))
    ph = 2.0 * math.pi * u2
    return np.array([r * math.cos(ph), r * math.sin(ph), z])


def _shoot(p0: np.ndarray, goal: np.ndarray, max_nfev: int):
    cache = {}

    def fun(p):
        f, J = kernels.exp_cross_jac(p)
        cache["J"] = J
        return f - goal

    def jac(p):
        return cache["J"]

    sol = least_squares(fun, p0, jac=jac, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15,
                        max_nfev=max_nfev)
    res = float(np.max(np.abs(kernels.exp_cross(sol.x) - goal)))
    return sol.x, res


def distance(target: Union[GroupPoint, CrossPoint], cfg: Optional[SolverConfig] = None) -> ShootingResult:
    """Distance from the origin by solving ``exp_map(p0, 1) = target`` from many starts.

    Every converged start is a unit-time extremal reaching the target; its
    length is ``|xi|``.  Solutions past their own cut time are discarded and
    the shortest remaining one is reported.
    """
    cfg = cfg or SolverConfig()
    q = _as_cross(target)
    r = homogeneous_norm(q)
    if r == 0.0:
        raise ValueError("distance to the origin itself is zero; nothing to shoot")
    goal = np.concatenate([q.x / r, q.t / (r * r)])
    qn = CrossPoint(goal[:3], goal[3:])
    lo = lower_bound(qn)
    hi = float(np.linalg.norm(qn.x)) + math.sqrt(4.0 * math.pi * float(np.linalg.norm(qn.t)))
    starts = _starts(cfg.n_starts, cfg.seed, lo, max(hi, lo * (1 + 1e-9)))

    def run(p0):
        return _shoot(p0, goal, cfg.max_nfev)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            results = list(ex.map(run, starts))
    else:
        results = [run(p0) for p0 in starts]

    best = None
    best_res = math.inf
    n_ok = 0
    for p, res in results:
        best_res = min(best_res, res)
        if res > cfg.residual_tol:
            continue
        cov = Covector.from_array(p)
        if not np.any(cov.xi):
            continue
        tc = float(T_cut(cov))
        if tc < 1.0 - cfg.cut_slack:
            continue
        n_ok += 1
        length = float(np.linalg.norm(cov.xi))
        if best is None or length < best[0]:
            best = (length, p, res)
    if best is None:
        raise ShootingFailure(
            f"no restart converged within residual {cfg.residual_tol:g} (best {best_res:.3e})", best_res)
    length, p, res = best
    mini = Covector(r * p[:3], r * p[3:])
    return ShootingResult(r * length, mini, res, cfg.n_starts, n_ok)


def corner_coeffs(phi: float) -> tuple[float, float]:
    """Rates ``(c1, c2)`` that keep the corner curve's first derivative orthogonal to ``x``."""
    phi = float(phi)
    if not (math.pi <= phi < PHI1):
        raise ValueError(f"phi must lie in [pi, phi_1), got {phi!r}")
    s, u, v = S(phi), U(phi), V(phi)
    den = 2.0 * u * u - u * s * v - v * v * s * s
    c1 = (-2.0 * s * v ** 3 - u * dU(phi) + u * s * dV(phi)) / den
    c2 = v / u * (s * c1 - 2.0 * v)
    return c1, c2


@dataclass(frozen=True, eq=False)
class CornerCurveParams:
    """Cut point ``(S beta + zeta, alpha x (U beta + V zeta))`` at phase ``phi`` (cross model) with its rates."""

    alpha: np.ndarray
    beta: np.ndarray
    zeta: np.ndarray
    phi: float
    c1: float
    c2: float

    @classmethod
    def from_triple(cls, alpha, beta, zeta, phi: float, rtol: float = 1e-8) -> "CornerCurveParams":
        alpha, beta, zeta = (np.array(v, dtype=float) for v in (alpha, beta, zeta))
        c1, c2 = corner_coeffs(phi)
        AdmissibleTriple(alpha, beta, zeta)
        nb2 = float(np.dot(beta, beta))
        if nb2 == 0.0:
            raise ValueError("beta must not vanish")
        if abs(float(np.dot(zeta, zeta)) / nb2 - Q(phi)) > rtol * max(1.0, Q(phi)):
            raise ValueError("triple does not satisfy the cut relation |zeta|^2/|beta|^2 = Q(phi)")
        return cls(alpha, beta, zeta, float(phi), c1, c2)

    @classmethod
    def from_cut_point(cls, cp: CutPoint, sigma: float = 0.0) -> "CornerCurveParams":
        aprime, bprime, zeta = family_vectors(cp, sigma)
        return cls.from_triple(aprime, bprime, zeta, cp.theta)

    @property
    def base(self) -> CrossPoint:
        return CrossPoint(S(self.phi) * self.beta + self.zeta,
                          np.cross(self.alpha, U(self.phi) * self.beta + V(self.phi) * self.zeta))

    @property
    def base_distance(self) -> float:
        return math.sqrt(float(np.dot(self.alpha, self.alpha) + np.dot(self.zeta, self.zeta)))

    @property
    def sigma_max(self) -> float:
        """Half-width of the parameter range: the scale factors and the phase stay positive."""
        lim = [self.phi]
        if self.c1 != 0.0:
            lim.append(1.0 / abs(self.c1))
        if self.c2 != 0.0:
            lim.append(1.0 / abs(self.c2))
        return 0.5 * min(lim)

    @property
    def decrease_rate(self) -> float:
        """``K = c1 |alpha|^2 + c2 |zeta|^2``; the squared bound drops like ``d^2 - 2 K sigma``."""
        return self.c1 * float(np.dot(self.alpha, self.alpha)) + self.c2 * float(np.dot(self.zeta, self.zeta))

    def upper_bound(self, sigma: float) -> float:
        """Length of the competitor extremal reaching ``corner_curve(sigma)``."""
        ka, kz = 1.0 - self.c1 * sigma, 1.0 - self.c2 * sigma
        return math.sqrt(ka * ka * float(np.dot(self.alpha, self.alpha))
                         + kz * kz * float(np.dot(self.zeta, self.zeta)))


def _check_sigma(base: CornerCurveParams, sigma: float) -> float:
    sigma = float(sigma)
    if not abs(sigma) <= base.sigma_max:
        raise ValueError(f"sigma={sigma!r} outside [-{base.sigma_max:.6g}, {base.sigma_max:.6g}]")
    return sigma


def corner_curve_cross(base: CornerCurveParams, sigma: float) -> CrossPoint:
    sigma = _check_sigma(base, sigma)
    ph = base.phi - sigma
    ka, kz = 1.0 - base.c1 * sigma, 1.0 - base.c2 * sigma
    x = S(ph) * ka * base.beta + kz * base.zeta
    t = ka * np.cross(base.alpha, U(ph) * ka * base.beta + V(ph) * kz * base.zeta)
    return CrossPoint(x, t)


def corner_curve(base: CornerCurveParams, sigma: float) -> GroupPoint:
    """Point ``sigma`` of the corner curve through the base cut point (wedge model)."""
    return from_cross(corner_curve_cross(base, sigma))


@dataclass(frozen=True)
class CornerRow:
    sigma: float
    upper_bound: float
    shooting_distance: float
    slope: float


def corner_decrease_probe(base: CornerCurveParams, sigmas, cfg: Optional[SolverConfig] = None,
                          slack: float = 1e-6, shoot: bool = True) -> list[CornerRow]:
    """Bound and shooting distance along the corner curve.

    ``slope`` is ``(d(base) - bound) / sigma``.  Raises ``AssertionError``
    if a shooting distance exceeds ``d(base) - C sigma`` with
    ``C = K / (2 d) (1 - slack)``.
    """
    d0 = base.base_distance
    C = base.decrease_rate / (2.0 * d0) * (1.0 - slack)
    rows = []
    for sg in sigmas:
        sg = float(sg)
        if sg < 0:
            raise ValueError("corner probe needs sigma >= 0")
        ub = base.upper_bound(sg)
        ds = distance(corner_curve_cross(base, sg), cfg).distance if shoot else math.nan
        if shoot and sg > 0 and not ds <= d0 - C * sg + 1e-12 * d0:
            raise AssertionError(f"no linear decrease at sigma={sg}: d={ds!r}, d0={d0!r}, C={C!r}")
        rows.append(CornerRow(sg, ub, ds, (d0 - ub) / sg if sg > 0 else math.nan))
    return rows


def _half_turn(axis) -> np.ndarray:
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    return 2.0 * np.outer(n, n) - np.eye(3)


def project_to_cut(q: CrossPoint) -> tuple[CrossPoint, float]:
    """Replace ``x`` by its component along ``t``; returns the projected point and the displacement."""
    tn = float(np.linalg.norm(q.t))
    if tn == 0.0:
        raise ValueError("cannot project a point with t = 0 onto the cut locus")
    n = q.t / tn
    x = float(np.dot(q.x, n)) * n
    return CrossPoint(x, q.t), float(np.linalg.norm(q.x - x))


@dataclass(frozen=True)
class SemiconvexityRow:
    sigma: float
    quotient: float
    d_p: float
    d_mp: float
    d_mid: float
    gap2: float
    projection_displacement: float
    centered_quotient: float = math.nan


def semiconvexity_probe(base: CornerCurveParams, sigmas, centered: bool = False,
                        cfg: Optional[SolverConfig] = None) -> list[SemiconvexityRow]:
    """Second-difference quotient ``[d(p) + d(Mp) - 2 d((p + Mp)/2)] / |p - Mp|^2`` along the corner curve.

    ``M`` is the half turn about the base ``x`` (about ``t`` when ``x = 0``);
    ``d(p) = d(Mp)`` is the exact competitor length and the midpoint, which
    lies on the cut locus, is evaluated by the closed form.  With
    ``centered=True`` the variant with midpoint at the base point is also
    computed, by shooting ``2 base - p``.
    """
    b = base.base
    M = _half_turn(b.t)
    d0 = base.base_distance
    rows = []
    for sg in sigmas:
        sg = float(sg)
        if not sg > 0:
            raise ValueError("semiconvexity probe needs sigma > 0")
        p = corner_curve_cross(base, sg)
        mp = CrossPoint(M @ p.x, M @ p.t)
        d_p = base.upper_bound(sg)
        mid = CrossPoint(0.5 * (p.x + mp.x), 0.5 * (p.t + mp.t))
        mid_on, disp = project_to_cut(mid)
        d_mid = cut_distance(CutPoint.from_point(from_cross(mid_on), tol=1e-6))
        gap2 = float(np.sum((p.as_array() - mp.as_array()) ** 2))
        quot = (2.0 * d_p - 2.0 * d_mid) / gap2
        cq = math.nan
        if centered:
            q = CrossPoint(2.0 * b.x - p.x, 2.0 * b.t - p.t)
            d_q = distance(q, cfg).distance
            cq = (d_p + d_q - 2.0 * d0) / (4.0 * float(np.sum((p.as_array() - b.as_array()) ** 2)))
        rows.append(SemiconvexityRow(sg, quot, d_p, d_p, d_mid, gap2, disp, cq))
    return rows
