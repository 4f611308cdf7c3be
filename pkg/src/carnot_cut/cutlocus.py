"""Cut locus of the origin, cut times, exact distances on the cut locus and sphere profiles."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import GroupPoint, bivec_norm, factorize, rotation_about
from .geodesics import ExtremalParams, endpoint_G, extremal_point
from .scalars import P_inv, Q_inv, R, S, U, V, W, solve_P_all

DEFAULT_TOL = 1e-9


class NotACutPoint(ValueError):
    pass


class CutKind(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"


@dataclass(frozen=True)
class CutTime:
    kind: CutKind
    value: Optional[float] = None

    @classmethod
    def finite(cls, value: float) -> "CutTime":
        return cls(CutKind.FINITE, float(value))

    @classmethod
    def infinite(cls) -> "CutTime":
        return cls(CutKind.INFINITE, None)

    @property
    def is_finite(self) -> bool:
        return self.kind is CutKind.FINITE

    def __float__(self) -> float:
        return self.value if self.is_finite else math.inf

    def __str__(self) -> str:
        return repr(self.value) if self.is_finite else "infinite"


def _cut_residuals(p: GroupPoint):
    y, yperp = factorize(p.t)
    return abs(float(np.dot(p.x, y))), abs(float(np.dot(p.x, yperp))), y, yperp


def is_cut(p: GroupPoint, tol: float = DEFAULT_TOL) -> bool:
    """Membership in the cut locus: ``t != 0`` and ``x`` orthogonal to the support of ``t``."""
    tn = bivec_norm(p.t)
    if not tn > tol:
        return False
    r1, r2, _, _ = _cut_residuals(p)
    bound = tol * max(1.0, float(np.linalg.norm(p.x))) * math.sqrt(tn)
    return r1 <= bound and r2 <= bound


def is_abnormal_point(p: GroupPoint, tol: float = DEFAULT_TOL) -> bool:
    """``t`` vanishes (relative to ``|x|^2``): the endpoint set of abnormal extremals."""
    return bivec_norm(p.t) <= tol * max(1.0, float(np.dot(p.x, p.x)))


@dataclass(frozen=True, eq=False)
class CutPoint:
    """A validated cut point with its minimizing phase and the factorization ``t = y ^ yperp``."""

    p: GroupPoint
    theta: float
    y: np.ndarray
    yperp: np.ndarray

    @classmethod
    def from_point(cls, p: GroupPoint, tol: float = DEFAULT_TOL) -> "CutPoint":
        if not is_cut(p, tol):
            raise NotACutPoint(f"{p!r} is not on the cut locus (tol={tol})")
        y, yperp = factorize(p.t)
        return cls(p, P_inv(float(np.dot(p.x, p.x)) / bivec_norm(p.t)), y, yperp)

    @property
    def x(self) -> np.ndarray:
        return self.p.x

    @property
    def t(self) -> np.ndarray:
        return self.p.t


def h_cut(mu: float) -> float:
    """Normalized cut time: ``Q^{-1}(mu^2)``, ranging over ``[pi, phi_1[``."""
    mu = float(mu)
    if not mu >= 0.0:
        raise ValueError(f"mu must be >= 0, got {mu}")
    return Q_inv(mu * mu)


def t_cut(params: ExtremalParams) -> CutTime:
    if params.phi == 0.0 or params.triple.degenerate:
        return CutTime.infinite()
    mu = float(np.linalg.norm(params.z)) / float(np.linalg.norm(params.a))
    return CutTime.finite(h_cut(mu) / params.phi)


def cut_point(params: ExtremalParams, tol: float = 1e-8) -> CutPoint:
    tc = t_cut(params)
    if not tc.is_finite:
        raise ValueError("extremal has no finite cut time")
    return CutPoint.from_point(extremal_point(params, tc.value), tol)


def cut_distance(cp: CutPoint) -> float:
    x2 = float(np.dot(cp.x, cp.x))
    return math.sqrt(x2 + R(cp.theta) * bivec_norm(cp.t))


def family_vectors(cp: CutPoint, sigma: float, theta: Optional[float] = None):
    """``(a', b', zeta)`` of the extremal family through ``cp`` at phase ``theta``."""
    th = cp.theta if theta is None else float(theta)
    u, w, v, s = U(th), W(th), V(th), S(th)
    k = (u * w) ** 0.25
    c = cp.y * math.cos(sigma) + cp.yperp * math.sin(sigma)
    aprime = (cp.y * math.sin(sigma) - cp.yperp * math.cos(sigma)) / k
    bprime = (k / w) * c - (v / w) * cp.x
    zeta = (u / w) * cp.x - (s / w) * k * c
    return aprime, bprime, zeta


def extremal_family(cp: CutPoint, sigma: float, theta: Optional[float] = None) -> ExtremalParams:
    """Member ``sigma`` of the one-parameter family of extremals reaching ``cp`` at time one.

    All members share the same length; with the default phase ``cp.theta``
    they are all minimizers.
    """
    th = cp.theta if theta is None else float(theta)
    aprime, bprime, zeta = family_vectors(cp, sigma, th)
    st, ct = math.sin(th), math.cos(th)
    return ExtremalParams.from_vectors(aprime * st + bprime * ct, bprime * st - aprime * ct, zeta, th)


@dataclass(frozen=True)
class Minimizer:
    theta: float
    params: ExtremalParams
    length: float


def minimizers_all_theta(cp: CutPoint, kmax: int = 5) -> list[Minimizer]:
    """The sigma = 0 extremal on every branch ``theta_k``, sorted by phase."""
    tn = bivec_norm(cp.t)
    x2 = float(np.dot(cp.x, cp.x))
    v = x2 / tn
    thetas = [k * math.pi for k in range(1, kmax + 1)] if v == 0.0 else solve_P_all(v, kmax)
    out = []
    for th in sorted(thetas):
        params = extremal_family(cp, 0.0, th)
        out.append(Minimizer(th, params, math.sqrt(x2 + R(th) * tn)))
    return out


@dataclass(frozen=True)
class SphereGrid:
    """Sampling grid for sphere profiles.

    ``mu = |zeta| / |alpha|`` runs over ``0`` plus ``n_mu`` geometric steps in
    ``[mu_min, mu_max]``; frames are ZXZ Euler rotations with ``n_angles``
    values per angle.
    """

    n_theta: int = 17
    n_mu: int = 8
    mu_min: float = 1e-2
    mu_max: float = 10.0
    n_angles: int = 2

    def mus(self) -> list[float]:
        if self.n_mu < 1:
            return [0.0]
        return [0.0] + list(np.geomspace(self.mu_min, self.mu_max, self.n_mu))

    def frames(self) -> list[np.ndarray]:
        n = self.n_angles
        if n < 1:
            return []
        spins = [2.0 * math.pi * i / n for i in range(n)]
        tilts = [0.0] if n == 1 else [math.pi * i / (n - 1) for i in range(n)]
        e1, e3 = np.eye(3)[0], np.eye(3)[2]
        frames = []
        for yaw in spins:
            for pitch in tilts:
                for roll in spins:
                    frames.append(rotation_about(e3, yaw) @ rotation_about(e1, pitch) @ rotation_about(e3, roll))
        return frames


@dataclass(frozen=True)
class SphereSample:
    point: GroupPoint
    theta: float
    mu: float
    at_cut_cap: bool


def sphere_profile(r: float, grid: SphereGrid = SphereGrid()) -> list[SphereSample]:
    """Points of the sphere of radius ``r`` about the origin.

    Each sample is the endpoint of a minimizer: admissible ``(alpha, beta,
    zeta)`` with ``|alpha|^2 + |zeta|^2 = r^2`` and phase ``0 <= theta <=
    h_cut(mu)``.  The last phase of every fan is the cut cap.
    """
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r}")
    frames = grid.frames()
    if grid.n_theta < 2 or not frames:
        raise ValueError("empty sphere grid")
    out = []
    for M in frames:
        e_a, e_b, e_z = M[:, 0], M[:, 1], M[:, 2]
        for mu in grid.mus():
            na = r / math.sqrt(1.0 + mu * mu)
            alpha, beta, zeta = na * e_a, na * e_b, mu * na * e_z
            top = h_cut(mu)
            for i in range(grid.n_theta):
                th = top * i / (grid.n_theta - 1)
                out.append(SphereSample(endpoint_G(alpha, beta, zeta, th), th, float(mu), i == grid.n_theta - 1))
    return out
