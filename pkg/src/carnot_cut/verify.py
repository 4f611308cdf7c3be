"""Numbered verification criteria, shared by ``carnot-cut verify`` and the acceptance tests.

Each check returns a :class:`CriterionResult` with a pass flag and the
measured quantities.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .algebra import GroupPoint
from .cutlocus import (CutPoint, cut_distance, cut_point, extremal_family, family_vectors,
                       is_cut, minimizers_all_theta, t_cut)
from .geodesics import ExtremalParams, extremal_point, speed
from .hamiltonian import Covector, exp_map, exp_map_ode
from .scalars import P, Q, R, W, phi_k
from .solver import CornerCurveParams, SolverConfig, corner_coeffs, distance, semiconvexity_probe


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    metrics: dict = field(default_factory=dict)
    # wall-clock measurements; shown in line() but kept out of as_dict() so records stay reproducible
    timing: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        items = {**self.metrics, **self.timing}
        parts = ", ".join(f"{k}={_fmt(v)}" for k, v in items.items())
        return f"[{status}] {self.number:2d} {self.name}: {parts}"

    def as_dict(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed, "metrics": self.metrics}


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


def random_params(rng: np.random.Generator, phi: float | None = None, mu_max: float = 3.0,
                  scale: tuple[float, float] = (0.3, 2.0)) -> ExtremalParams:
    """Admissible ``(a, b, z)`` in a random frame with ``|a|`` in ``scale`` and ``|z|/|a|`` up to ``mu_max``."""
    M, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    na = rng.uniform(*scale)
    mu = rng.uniform(0.0, mu_max)
    if phi is None:
        phi = rng.uniform(0.2, 4.0)
    return ExtremalParams.from_vectors(na * M[:, 0], na * M[:, 1], mu * na * M[:, 2], phi)


def random_cut_point(rng: np.random.Generator, **kw) -> CutPoint:
    return cut_point(random_params(rng, **kw))


def heisenberg_center(seed: int = 0, n: int = 10) -> CriterionResult:
    rng = np.random.default_rng(seed)
    f_err = s_err = 0.0
    worst_time = 0.0
    for _ in range(n):
        t = rng.normal(size=3) * rng.uniform(0.05, 2.0)
        p = GroupPoint(np.zeros(3), t)
        exact = math.sqrt(4.0 * math.pi * float(np.linalg.norm(t)))
        t0 = time.perf_counter()
        d_f = cut_distance(CutPoint.from_point(p))
        d_s = distance(p, SolverConfig(seed=seed)).distance
        worst_time = max(worst_time, time.perf_counter() - t0)
        f_err = max(f_err, abs(d_f - exact) / exact)
        s_err = max(s_err, abs(d_s - exact))
    in_time = worst_time < 1.0
    ok = f_err <= 1e-12 and s_err <= 1e-6 and in_time
    return CriterionResult(1, "center distance sqrt(4 pi |t|)", ok,
                           {"formula_rel_err": f_err, "shooting_err": s_err, "within_1s": in_time},
                           {"max_seconds": worst_time})


def planar_cut_time(seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed)
    err = 0.0
    for phi in np.linspace(0.1, 10.0, 10):
        for _ in range(10):
            base = random_params(rng, phi=float(phi), mu_max=0.0)
            err = max(err, abs(float(t_cut(base)) - math.pi / phi))
    return CriterionResult(2, "planar cut time pi/phi", err <= 1e-12, {"cases": 100, "max_err": err})


def _bisect_tan(lo: float, hi: float) -> float:
    """Plain bisection on ``tan(th) - th`` down to adjacent floats."""
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        if math.tan(mid) - mid > 0.0:
            hi = mid
        else:
            lo = mid


def cut_time_range(seed: int = 0, n: int = 1000) -> CriterionResult:
    rng = np.random.default_rng(seed)
    phi1 = phi_k(1)
    oracle = _bisect_tan(math.pi + 1e-9, 1.5 * math.pi - 1e-9)
    phi1_err = abs(phi1 - oracle)
    out_of_range = 0
    for _ in range(n):
        par = random_params(rng, mu_max=50.0)
        h = par.phi * float(t_cut(par))
        if not (math.pi - 1e-12 <= h < phi1):
            out_of_range += 1
    par = random_params(rng, mu_max=2.0)
    seq = []
    for k in range(1, 7):
        eps = 10.0 ** (-k)
        shrunk = ExtremalParams.from_vectors(eps * par.a, eps * par.b, par.z, par.phi)
        seq.append(par.phi * float(t_cut(shrunk)))
    monotone = all(b >= a for a, b in zip(seq, seq[1:]))
    gap = phi1 - seq[-1]
    ok = phi1_err <= 1e-12 and out_of_range == 0 and monotone and 0.0 <= gap <= 1e-4
    return CriterionResult(3, "cut-time range and near-abnormal limit", ok,
                           {"phi1_err": phi1_err, "out_of_range": out_of_range, "monotone": monotone,
                            "gap_at_1e-6": gap})


def cut_membership(seed: int = 0, n: int = 500) -> CriterionResult:
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    misses = sum(not is_cut(cut_point(random_params(rng)).p, 1e-8) for _ in range(n))
    elapsed = time.perf_counter() - t0
    in_time = elapsed < 5.0
    return CriterionResult(4, "cut points are on the cut locus", misses == 0 and in_time,
                           {"cases": n, "misses": misses, "within_5s": in_time}, {"seconds": elapsed})


SIGMAS8 = tuple(2.0 * math.pi * k / 8 + 0.1 for k in range(8))


def minimizer_family(seed: int = 0, n: int = 100) -> CriterionResult:
    rng = np.random.default_rng(seed)
    end_err = len_err = ratio_err = 0.0
    not_first = 0
    for _ in range(n):
        cp = random_cut_point(rng)
        d = cut_distance(cp)
        scale = max(1.0, float(np.max(np.abs(cp.p.as_array()))))
        for sg in SIGMAS8:
            fam = extremal_family(cp, sg)
            q = extremal_point(fam, 1.0)
            end_err = max(end_err, float(np.max(np.abs(q.as_array() - cp.p.as_array()))) / scale)
            len_err = max(len_err, abs(speed(fam) - d) / max(1.0, d))
            _, bprime, zeta = family_vectors(cp, sg)
            ratio = float(np.dot(zeta, zeta) / np.dot(bprime, bprime))
            ratio_err = max(ratio_err, abs(ratio - Q(cp.theta)) / max(1.0, Q(cp.theta)))
        mins = minimizers_all_theta(cp, kmax=3)
        if min(mins, key=lambda m: m.length) is not mins[0] or abs(mins[0].theta - cp.theta) > 1e-12:
            not_first += 1
    ok = end_err <= 1e-10 and len_err <= 1e-10 and ratio_err <= 1e-10 and not_first == 0
    return CriterionResult(5, "minimizer family through a cut point", ok,
                           {"endpoint_err": end_err, "length_err": len_err, "ratio_err": ratio_err,
                            "min_not_at_theta1": not_first})


def random_covector(rng: np.random.Generator, max_norm: float = 2.0) -> Covector:
    v = rng.normal(size=6)
    v *= max_norm * rng.uniform(0.0, 1.0) / np.linalg.norm(v)
    return Covector.from_array(v)


def ode_oracle(seed: int = 0, n: int = 200) -> CriterionResult:
    rng = np.random.default_rng(seed)
    err = 0.0
    coarse = fine = 0.0
    for _ in range(n):
        p = random_covector(rng)
        exact = exp_map(p, 1.0).as_array()
        err = max(err, float(np.max(np.abs(exp_map_ode(p, 1.0, 1000).as_array() - exact))))
        coarse = max(coarse, float(np.max(np.abs(exp_map_ode(p, 1.0, 8).as_array() - exact))))
        fine = max(fine, float(np.max(np.abs(exp_map_ode(p, 1.0, 16).as_array() - exact))))
    order = math.log2(coarse / fine)
    ok = err <= 1e-8 and abs(order - 4.0) <= 0.3
    return CriterionResult(6, "closed form vs RK4", ok, {"max_err_1000": err, "order": order})


def distance_consistency(seed: int = 0, n: int = 50) -> CriterionResult:
    rng = np.random.default_rng(seed)
    cfg = SolverConfig(seed=seed)
    t0 = time.perf_counter()
    cut_err = pre_err = 0.0
    for _ in range(n):
        cp = random_cut_point(rng)
        cut_err = max(cut_err, abs(distance(cp.p, cfg).distance - cut_distance(cp)))
    for _ in range(n):
        par = random_params(rng)
        s = rng.uniform(0.05, 0.95) * float(t_cut(par))
        q = extremal_point(par, s)
        pre_err = max(pre_err, abs(distance(q, cfg).distance - s * speed(par)))
    elapsed = time.perf_counter() - t0
    in_time = elapsed < 120.0
    ok = cut_err <= 1e-6 and pre_err <= 1e-6 and in_time
    return CriterionResult(7, "shooting vs closed-form distances", ok,
                           {"cut_err": cut_err, "precut_err": pre_err, "within_2min": in_time},
                           {"seconds": elapsed})


def monotone_violations(f, grid) -> int:
    vals = np.array([f(float(th)) for th in grid])
    return int(np.sum(np.diff(vals) <= 0.0))


def r_domain_grid(n: int, kmax: int = 5) -> np.ndarray:
    per = n // kmax + 1
    parts = [np.linspace(k * math.pi, phi_k(k), per + 2)[1:-1] for k in range(1, kmax + 1)]
    return np.concatenate(parts)


def monotonicity(n: int = 10_000) -> CriterionResult:
    phi1 = phi_k(1)
    w_grid = np.geomspace(1e-3, 1e3, n)
    w_bad = int(sum(W(float(th)) <= 0.0 for th in w_grid))
    q_bad = monotone_violations(Q, np.linspace(math.pi, phi1 - 1e-6, n))
    p_bad = monotone_violations(P, np.linspace(math.pi, phi1, n + 2)[1:-1])
    r_bad = monotone_violations(R, r_domain_grid(n))
    ok = w_bad == q_bad == p_bad == r_bad == 0
    return CriterionResult(8, "positivity and monotonicity", ok,
                           {"grid": n, "W": w_bad, "Q": q_bad, "P": p_bad, "R": r_bad})


def corner_slope(base: CornerCurveParams, sigma: float = 1e-7) -> float:
    return (base.base_distance - base.upper_bound(sigma)) / sigma


def corner_estimate(seed: int = 0, n: int = 20) -> CriterionResult:
    rng = np.random.default_rng(seed)
    c1_pi = corner_coeffs(math.pi)[0]
    heis_err = abs(c1_pi - 1.0 / math.pi)
    neg = 0
    worst = 0.0
    ratios = []
    for _ in range(n):
        base = CornerCurveParams.from_cut_point(random_cut_point(rng))
        K = base.decrease_rate
        if not (base.c1 > 0 and K > 0):
            neg += 1
        target = K / (2.0 * base.base_distance)
        slope = corner_slope(base)
        ratios.append(slope / target)
        worst = max(worst, abs(slope / target - 1.0))
    ok = heis_err <= 1e-12 and neg == 0 and worst <= 1e-2
    return CriterionResult(9, "corner estimate", ok,
                           {"c1(pi)_err": heis_err, "sign_failures": neg,
                            "slope_over_K/2d": float(np.median(ratios)), "max_rel_dev": worst})


DYADIC = tuple(1e-2 / 2 ** k for k in range(6))


def semiconvexity(seed: int = 0, n: int = 10) -> CriterionResult:
    rng = np.random.default_rng(seed)
    positive = 0
    worst = 0.0
    for _ in range(n):
        base = CornerCurveParams.from_cut_point(random_cut_point(rng))
        q = [row.quotient for row in semiconvexity_probe(base, DYADIC)]
        positive += sum(v >= 0 for v in q)
        worst = max([worst] + [abs(b / a - 2.0) for a, b in zip(q, q[1:])])
    ok = positive == 0 and worst <= 0.3
    return CriterionResult(10, "semiconvexity failure", ok,
                           {"nonnegative_quotients": positive, "max_ratio_dev": worst})


CRITERIA = {
    1: heisenberg_center,
    2: planar_cut_time,
    3: cut_time_range,
    4: cut_membership,
    5: minimizer_family,
    6: ode_oracle,
    7: distance_consistency,
    8: lambda seed=0: monotonicity(),
    9: corner_estimate,
    10: semiconvexity,
}

SUITES = {
    "scalars": (3, 8),
    "cuttime": (2, 3),
    "cutlocus": (4, 5),
    "oracle": (1, 6, 7),
    "corner": (9, 10),
    "all": tuple(range(1, 11)),
}


def run_suite(name: str, seed: int = 0) -> list[CriterionResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return [CRITERIA[k](seed=seed) for k in SUITES[name]]
