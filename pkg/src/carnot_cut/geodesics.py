"""Normal extremals from the origin: controls, closed-form curves and endpoint maps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._pykernels import SMALL_PHASE, _coeffs
from .algebra import GroupPoint, vec, wedge
from .scalars import S, U, V

ADMISSIBLE_RTOL = 1e-10


class InadmissibleTriple(ValueError):
    """Raised when (a, b, z) violates orthogonality or |a| = |b|."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("inadmissible triple: " + "; ".join(self.violations))


@dataclass(frozen=True, eq=False)
class AdmissibleTriple:
    """Pairwise orthogonal ``a, b, z`` with ``|a| = |b|``.

    ``a = b = 0`` is accepted and marks the straight line with constant
    control ``z``; such triples only make sense with ``phi = 0``.
    """

    a: np.ndarray
    b: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        a, b, z = vec(self.a), vec(self.b), vec(self.z)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "z", z)
        na, nb, nz = (float(np.linalg.norm(v)) for v in (a, b, z))
        scale = max(na, nb, nz, 1e-300)
        tol = ADMISSIBLE_RTOL * scale
        bad = []
        if abs(na - nb) > tol:
            bad.append(f"|a| != |b| ({na:.17g} vs {nb:.17g})")
        for (n1, v1), (n2, v2) in (
            (("a", a), ("b", b)),
            (("a", a), ("z", z)),
            (("b", b), ("z", z)),
        ):
            if abs(float(np.dot(v1, v2))) > tol * scale:
                bad.append(f"<{n1},{n2}> = {float(np.dot(v1, v2)):.3e} != 0")
        if na == 0.0 and nb == 0.0 and nz == 0.0:
            bad.append("a, b, z all vanish")
        if bad:
            raise InadmissibleTriple(bad)

    @property
    def degenerate(self) -> bool:
        return not np.any(self.a) and not np.any(self.b)


@dataclass(frozen=True, eq=False)
class ExtremalParams:
    """Admissible triple plus frequency ``phi >= 0``; the control is ``a cos 2 phi s + b sin 2 phi s + z``."""

    triple: AdmissibleTriple
    phi: float

    def __post_init__(self):
        phi = float(self.phi)
        if not (phi >= 0.0 and math.isfinite(phi)):
            raise ValueError(f"phi must be finite and >= 0, got {phi}")
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_vectors(cls, a, b, z, phi: float) -> "ExtremalParams":
        return cls(AdmissibleTriple(a, b, z), phi)

    @property
    def a(self) -> np.ndarray:
        return self.triple.a

    @property
    def b(self) -> np.ndarray:
        return self.triple.b

    @property
    def z(self) -> np.ndarray:
        return self.triple.z

    @property
    def lam(self) -> float:
        return 2.0 * self.phi

    def scaled(self, r: float) -> "ExtremalParams":
        return ExtremalParams.from_vectors(r * self.a, r * self.b, r * self.z, self.phi)

    def __repr__(self):
        return (f"ExtremalParams(a={self.a.tolist()}, b={self.b.tolist()}, "
                f"z={self.z.tolist()}, phi={self.phi!r})")


def control(params: ExtremalParams, s: float) -> np.ndarray:
    arg = params.lam * s
    return params.a * math.cos(arg) + params.b * math.sin(arg) + params.z


def curve_coefficients(lam: float, s: float) -> tuple[float, float, float, float, float]:
    """Scalar coefficients of ``a, b, a^b, a^z, b^z`` in the closed-form curve.

    Returns ``(c_a, c_b, c_ab, c_az, c_bz)`` so that ``x = c_a a + c_b b + s z``
    and ``t = c_ab a^b + c_az a^z + c_bz b^z``.
    """
    return _coeffs(lam, s)


def extremal_point(params: ExtremalParams, s: float) -> GroupPoint:
    """Point at time ``s`` of the extremal through the origin (wedge model)."""
    a, b, z = params.a, params.b, params.z
    c_a, c_b, c_ab, c_az, c_bz = curve_coefficients(params.lam, s)
    x = c_a * a + c_b * b + s * z
    t = c_ab * wedge(a, b) + c_az * wedge(a, z) + c_bz * wedge(b, z)
    return GroupPoint(x, t)


def change_vars(a, b, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """``(a, b) -> (a sin phi - b cos phi, a cos phi + b sin phi)``."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    s, c = math.sin(phi), math.cos(phi)
    return a * s - b * c, a * c + b * s


def change_vars_inv(aprime, bprime, phi: float) -> tuple[np.ndarray, np.ndarray]:
    aprime, bprime = np.asarray(aprime, dtype=float), np.asarray(bprime, dtype=float)
    s, c = math.sin(phi), math.cos(phi)
    return aprime * s + bprime * c, bprime * s - aprime * c


def endpoint_F(a, b, z, phi: float) -> GroupPoint:
    """Time-one endpoint of the extremal with frequency ``2 phi``."""
    phi = float(phi)
    if phi < 0:
        raise ValueError(f"phi must be >= 0, got {phi}")
    a, b, z = (np.asarray(v, dtype=float) for v in (a, b, z))
    sp, cp = math.sin(phi), math.cos(phi)
    x = S(phi) * (a * cp + b * sp) + z
    t = U(phi) * wedge(a, b) + V(phi) * wedge(a * sp - b * cp, z)
    return GroupPoint(x, t)


def endpoint_G(aprime, bprime, zeta, phi: float) -> GroupPoint:
    """``(S b' + zeta, a' ^ (U b' + V zeta))``, i.e. ``endpoint_F`` after :func:`change_vars`."""
    phi = float(phi)
    if phi < 0:
        raise ValueError(f"phi must be >= 0, got {phi}")
    aprime, bprime, zeta = (np.asarray(v, dtype=float) for v in (aprime, bprime, zeta))
    return GroupPoint(S(phi) * bprime + zeta, wedge(aprime, U(phi) * bprime + V(phi) * zeta))


def speed(params: ExtremalParams) -> float:
    return math.sqrt(float(np.dot(params.a, params.a) + np.dot(params.z, params.z)))


def length(params: ExtremalParams, s: float) -> float:
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    return s * speed(params)
