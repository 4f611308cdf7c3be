"""Vectors, bivectors and the group law of the free step-two group on three generators.

Two coordinate models are supported.  The *wedge* model stores the second
layer as a bivector with coordinates ``(t12, t13, t23)`` in the frame
``e1^e2, e1^e3, e2^e3``.  The *cross* model stores it as an ordinary vector
with the group law ``(x, t)(x', t') = (x + x', t + t' + x cross x' / 2)``.
The two are related by the Hodge-type duality ``t23 -> t1, t13 -> -t2,
t12 -> t3`` implemented by :func:`to_cross` / :func:`from_cross`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ORTHOGONALITY_TOL = 1e-10


def vec(values) -> np.ndarray:
    """Return a read-only float64 copy of a length-3 vector."""
    arr = np.array(values, dtype=float).reshape(3)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite coordinates: {arr}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GroupPoint:
    """A point ``(x, t)`` of the group in the wedge model."""

    x: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", vec(self.x))
        object.__setattr__(self, "t", vec(self.t))

    def __iter__(self):
        yield self.x
        yield self.t

    def __eq__(self, other):
        if not isinstance(other, GroupPoint):
            return NotImplemented
        return bool(np.array_equal(self.x, other.x) and np.array_equal(self.t, other.t))

    def __hash__(self):
        return hash((self.x.tobytes(), self.t.tobytes()))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.x, self.t])

    def __repr__(self):
        return f"GroupPoint(x={self.x.tolist()}, t={self.t.tolist()})"


@dataclass(frozen=True, eq=False)
class CrossPoint:
    """A point ``(x, t)`` in the cross-product model; ``t`` is an ordinary vector."""

    x: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", vec(self.x))
        object.__setattr__(self, "t", vec(self.t))

    def __iter__(self):
        yield self.x
        yield self.t

    def __eq__(self, other):
        if not isinstance(other, CrossPoint):
            return NotImplemented
        return bool(np.array_equal(self.x, other.x) and np.array_equal(self.t, other.t))

    def __hash__(self):
        return hash((self.x.tobytes(), self.t.tobytes()))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.x, self.t])

    def __repr__(self):
        return f"CrossPoint(x={self.x.tolist()}, t={self.t.tolist()})"


ORIGIN = GroupPoint(np.zeros(3), np.zeros(3))


def wedge(x, y) -> np.ndarray:
    """Bivector ``x ^ y`` in coordinates ``(t12, t13, t23)``."""
    x1, x2, x3 = x
    y1, y2, y3 = y
    return np.array([x1 * y2 - x2 * y1, x1 * y3 - x3 * y1, x2 * y3 - x3 * y2])


def bivec_inner(s, t) -> float:
    """Inner product making ``e_j ^ e_k`` (j < k) orthonormal."""
    return float(np.dot(s, t))


def bivec_norm(t) -> float:
    return float(np.linalg.norm(t))


def _bivec_to_vec(t) -> np.ndarray:
    t12, t13, t23 = t
    return np.array([t23, -t13, t12])


def _vec_to_bivec(v) -> np.ndarray:
    v1, v2, v3 = v
    return np.array([v3, -v2, v1])


def support_normal(t) -> np.ndarray:
    """Unit normal ``n`` of the support plane of ``t``, oriented so ``t`` is dual to ``|t| n``."""
    n = _bivec_to_vec(t)
    norm = np.linalg.norm(n)
    if norm == 0.0:
        raise ValueError("zero bivector has no support")
    return n / norm


def factorize(t) -> tuple[np.ndarray, np.ndarray]:
    """Write ``t = y ^ yperp`` with ``y``, ``yperp`` orthogonal and ``|y| = |yperp| = |t|**0.5``.

    The factorization is not unique; this one is fixed by projecting the
    coordinate axis least aligned with the support normal onto the support.
    """
    n = support_normal(t)
    j = int(np.argmin(np.abs(n)))
    e = np.zeros(3)
    e[j] = 1.0
    y = e - n[j] * n
    y /= np.linalg.norm(y)
    yperp = np.cross(n, y)
    scale = math.sqrt(bivec_norm(t))
    return y * scale, yperp * scale


def group_mul(p: GroupPoint, q: GroupPoint) -> GroupPoint:
    return GroupPoint(p.x + q.x, p.t + q.t + 0.5 * wedge(p.x, q.x))


def group_inv(p: GroupPoint) -> GroupPoint:
    return GroupPoint(-p.x, -p.t)


def dilate(r: float, p: GroupPoint) -> GroupPoint:
    if not r > 0:
        raise ValueError(f"dilation factor must be positive, got {r}")
    return GroupPoint(r * p.x, r * r * p.t)


def check_orthogonal(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {M.shape}")
    err = np.max(np.abs(M.T @ M - np.eye(3)))
    if err > ORTHOGONALITY_TOL:
        raise ValueError(f"matrix is not orthogonal (|M^T M - I|_inf = {err:.3e})")
    return M


def rotate(M, p: GroupPoint) -> GroupPoint:
    """Action of ``M`` in O(3): ``(x, y ^ y') -> (Mx, My ^ My')``."""
    M = check_orthogonal(M)
    # My x My' = det(M) M (y x y') for orthogonal M
    tc = np.linalg.det(M) * (M @ _bivec_to_vec(p.t))
    return GroupPoint(M @ p.x, _vec_to_bivec(tc))


def to_cross(p: GroupPoint) -> CrossPoint:
    return CrossPoint(p.x, _bivec_to_vec(p.t))


def from_cross(q: CrossPoint) -> GroupPoint:
    return GroupPoint(q.x, _vec_to_bivec(q.t))


def cross_mul(p: CrossPoint, q: CrossPoint) -> CrossPoint:
    return CrossPoint(p.x + q.x, p.t + q.t + 0.5 * np.cross(p.x, q.x))


def rotation_about(axis, angle: float) -> np.ndarray:
    """Rodrigues matrix of the rotation by ``angle`` about ``axis``."""
    k = np.asarray(axis, dtype=float)
    k = k / np.linalg.norm(k)
    K = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)
