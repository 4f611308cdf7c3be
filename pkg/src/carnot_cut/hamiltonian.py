"""Hamiltonian picture in the cross model: covectors, the exponential map and the cut time of a covector.

With ``u = xi + tau x x / 2`` the Hamiltonian is ``H = |u|^2 / 2`` and the
flow from the origin reads ``x' = u, t' = x x u / 2, u' = tau x u`` with
``tau`` constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .algebra import CrossPoint, to_cross, vec
from .cutlocus import CutTime, h_cut
from .geodesics import ExtremalParams, extremal_point

# |tau x xi| <= PARALLEL_RTOL |tau| |xi| is treated as the parallel case
PARALLEL_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Covector:
    """Initial momentum ``(xi, tau)`` at the origin."""

    xi: np.ndarray
    tau: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xi", vec(self.xi))
        object.__setattr__(self, "tau", vec(self.tau))

    @classmethod
    def from_array(cls, p) -> "Covector":
        p = np.asarray(p, dtype=float).reshape(6)
        return cls(p[:3], p[3:])

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.xi, self.tau])

    @property
    def strictly_normal(self) -> bool:
        """True on the open set where ``tau x xi != 0``."""
        return not _parallel(self.xi, self.tau)

    def __repr__(self):
        return f"Covector(xi={self.xi.tolist()}, tau={self.tau.tolist()})"


def _parallel(xi, tau) -> bool:
    c = float(np.linalg.norm(np.cross(tau, xi)))
    return c <= PARALLEL_RTOL * float(np.linalg.norm(tau)) * float(np.linalg.norm(xi))


def horizontal_momentum(q: CrossPoint, p: Covector) -> np.ndarray:
    """``(<p, Y_j(q)>)_j = xi + tau x x / 2``."""
    return p.xi + 0.5 * np.cross(p.tau, q.x)


def hamiltonian(q: CrossPoint, p: Covector) -> float:
    u = horizontal_momentum(q, p)
    return 0.5 * float(np.dot(u, u))


def covector_to_extremal(p0: Covector) -> ExtremalParams:
    """Control data ``(a, b, z, phi)`` of the extremal with initial covector ``p0``.

    The control is ``u(s) = a cos(|tau| s) + b sin(|tau| s) + z``, so the
    frequency parameter is ``phi = |tau| / 2``.  Parallel ``xi`` and ``tau``
    (or ``tau = 0``) give the straight line ``a = b = 0, z = xi, phi = 0``.
    ``xi = 0`` is the constant curve, which has no such data (ValueError).
    """
    xi, tau = p0.xi, p0.tau
    if not np.any(xi):
        raise ValueError("xi = 0 gives the constant curve; no extremal parameters")
    lam = float(np.linalg.norm(tau))
    if lam == 0.0 or _parallel(xi, tau):
        zero = np.zeros(3)
        return ExtremalParams.from_vectors(zero, zero, xi, 0.0)
    n = tau / lam
    z = float(np.dot(xi, n)) * n
    a = xi - z
    b = np.cross(n, xi)
    # b has |a| exactly in exact arithmetic; remove the rounding drift
    b *= float(np.linalg.norm(a)) / float(np.linalg.norm(b))
    return ExtremalParams.from_vectors(a, b, z, 0.5 * lam)


def exp_map(p0: Covector, s: float = 1.0) -> CrossPoint:
    """Closed-form point at time ``s`` of the flow started from ``p0``."""
    out = kernels.exp_cross(p0.as_array(), float(s))
    return CrossPoint(out[:3], out[3:])


def exp_map_params(p0: Covector, s: float = 1.0) -> CrossPoint:
    """Same as :func:`exp_map` but routed through :func:`covector_to_extremal` and the wedge model."""
    if not np.any(p0.xi):
        return CrossPoint(np.zeros(3), np.zeros(3))
    return to_cross(extremal_point(covector_to_extremal(p0), float(s)))


def default_steps(p0: Covector, s: float) -> int:
    return max(100, math.ceil(50.0 * abs(s) * (1.0 + float(np.linalg.norm(p0.tau)))))


def exp_map_ode(p0: Covector, s: float = 1.0, steps: int | None = None) -> CrossPoint:
    """Fixed-step RK4 integration of the Hamiltonian flow (independent of the closed form)."""
    if steps is None:
        steps = default_steps(p0, s)
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    out = kernels.rk4_cross(p0.as_array(), float(s), int(steps))
    return CrossPoint(out[:3], out[3:6])


def flow_path(p0: Covector, s: float, steps: int) -> np.ndarray:
    """RK4 states ``(x, t, u)`` at ``steps + 1`` equispaced times, shape ``(steps + 1, 9)``."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    return kernels.rk4_cross_path(p0.as_array(), float(s), int(steps))


def T_cut(p0: Covector) -> CutTime:
    """Cut time ``(2/|tau|) h_cut(|<xi,tau>| / |tau x xi|)``; infinite for parallel ``xi, tau``."""
    xi, tau = p0.xi, p0.tau
    if not np.any(xi):
        raise ValueError("T_cut is undefined for xi = 0")
    lam = float(np.linalg.norm(tau))
    if lam == 0.0 or _parallel(xi, tau):
        return CutTime.infinite()
    mu = abs(float(np.dot(xi, tau))) / float(np.linalg.norm(np.cross(tau, xi)))
    return CutTime.finite(2.0 / lam * h_cut(mu))
