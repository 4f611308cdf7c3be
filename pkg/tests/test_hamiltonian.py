import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from carnot_cut.algebra import CrossPoint
from carnot_cut.cutlocus import CutKind, h_cut, t_cut
from carnot_cut.hamiltonian import (Covector, T_cut, covector_to_extremal, default_steps, exp_map,
                                    exp_map_ode, exp_map_params, flow_path, hamiltonian,
                                    horizontal_momentum)
from carnot_cut.solver import distance

E = np.eye(3)
PI = math.pi



def _comp(bound):
    # squared norms of subnormal-range entries underflow; flush them to zero
    return st.floats(-bound, bound).map(lambda v: 0.0 if abs(v) < 1e-100 else v)


@st.composite
def covectors(draw, bound=2.0):
    xi = np.array(draw(st.tuples(*[_comp(bound)] * 3)))
    tau = np.array(draw(st.tuples(*[_comp(bound)] * 3)))
    return Covector(xi, tau)


@st.composite
def normal_covectors(draw, bound=2.0):
    p = draw(covectors(bound))
    if np.linalg.norm(np.cross(p.tau, p.xi)) < 1e-2 * (1 + np.linalg.norm(p.tau) * np.linalg.norm(p.xi)):
        return Covector(p.xi + np.array([0.3, -0.2, 0.1]), p.tau + np.array([-0.1, 0.4, 0.2]) + np.cross(p.xi, E[0]))
    return p


def close(p, q, tol):
    return np.max(np.abs(p.as_array() - q.as_array())) <= tol


def test_hamiltonian_examples():
    p = Covector([1.0, -2.0, 0.5], [3.0, 1.0, -1.0])
    assert hamiltonian(CrossPoint(np.zeros(3), np.zeros(3)), p) == pytest.approx(0.5 * (1 + 4 + 0.25))
    q = CrossPoint(E[0], np.zeros(3))
    assert hamiltonian(q, Covector(E[1], E[2])) == pytest.approx(1.125)
    assert np.allclose(horizontal_momentum(q, Covector(E[1], E[2])), [0.0, 1.5, 0.0])


@given(normal_covectors())
def test_energy_is_conserved_along_numeric_flow(p):
    path = flow_path(p, 1.0, 400)
    h0 = hamiltonian(CrossPoint(np.zeros(3), np.zeros(3)), p)
    assert np.allclose(path[0, 6:], p.xi)
    for row in path[::50]:
        x, u = row[:3], row[6:]
        # momentum transported along the flow: xi(s) = u(s) - tau x x(s) / 2
        q, ps = CrossPoint(x, row[3:6]), Covector(u - 0.5 * np.cross(p.tau, x), p.tau)
        assert hamiltonian(q, ps) == pytest.approx(h0, rel=1e-9, abs=1e-12)


def test_covector_to_extremal_examples():
    par = covector_to_extremal(Covector(E[0], 2 * PI * E[2]))
    assert np.allclose(par.a, E[0]) and np.allclose(par.b, E[1]) and np.allclose(par.z, 0)
    assert par.lam == pytest.approx(2 * PI)
    par = covector_to_extremal(Covector(E[2], E[2]))
    assert np.allclose(par.a, 0) and np.allclose(par.b, 0) and np.allclose(par.z, E[2])
    assert par.phi == 0.0
    par = covector_to_extremal(Covector([1.0, 2.0, 3.0], np.zeros(3)))
    assert np.allclose(par.z, [1.0, 2.0, 3.0]) and par.phi == 0.0
    with pytest.raises(ValueError):
        covector_to_extremal(Covector(np.zeros(3), E[0]))


@given(normal_covectors())
def test_covector_to_extremal_is_admissible(p):
    par = covector_to_extremal(p)
    assert np.linalg.norm(par.a) == pytest.approx(np.linalg.norm(par.b), rel=1e-12)
    na = np.linalg.norm(par.a)
    for u, v in ((par.a, par.b), (par.a, par.z), (par.b, par.z)):
        assert abs(np.dot(u, v)) <= 1e-10 * max(1.0, na * na + np.dot(par.z, par.z))
    assert par.lam == pytest.approx(np.linalg.norm(p.tau), rel=1e-14)


def test_exp_map_examples():
    q = exp_map(Covector(E[0], 2 * PI * E[2]), 1.0)
    assert close(q, CrossPoint(np.zeros(3), [0.0, 0.0, 1 / (4 * PI)]), 1e-15)
    assert close(exp_map(Covector([1.0, 2.0, 3.0], [0.5, -1.0, 2.0]), 0.0), CrossPoint(np.zeros(3), np.zeros(3)), 0)
    tau = np.array([0.3, -1.2, 0.7])
    q = exp_map(Covector(2.5 * tau, tau), 1.7)
    assert close(q, CrossPoint(1.7 * 2.5 * tau, np.zeros(3)), 1e-14)


@given(covectors(), st.floats(0.0, 3.0))
def test_exp_map_routes_agree(p, s):
    a, b = exp_map(p, s), exp_map_params(p, s)
    assert close(a, b, 1e-11 * max(1.0, np.max(np.abs(a.as_array()))))


@given(covectors(), st.floats(0.1, 2.0), st.floats(0.2, 2.0))
def test_exp_map_homogeneity(p, s, c):
    # E(s p) = q(s, p)
    lhs = exp_map(Covector(s * p.xi, s * p.tau), c)
    rhs = exp_map(p, s * c)
    assert close(lhs, rhs, 1e-12 * max(1.0, np.max(np.abs(rhs.as_array()))))


@given(covectors())
def test_ode_matches_closed_form(p):
    assert close(exp_map_ode(p, 1.0, 1000), exp_map(p, 1.0), 1e-8)


def test_ode_straight_line_and_errors():
    xi = np.array([0.4, -1.0, 2.0])
    q = exp_map_ode(Covector(xi, np.zeros(3)), 1.3, 3)
    assert close(q, CrossPoint(1.3 * xi, np.zeros(3)), 1e-14)
    with pytest.raises(ValueError):
        exp_map_ode(Covector(xi, E[0]), 1.0, 0)
    with pytest.raises(ValueError):
        flow_path(Covector(xi, E[0]), 1.0, 0)
    assert default_steps(Covector(xi, np.zeros(3)), 0.1) == 100
    assert default_steps(Covector(xi, 3 * E[0]), 2.0) == 400


def test_ode_fourth_order():
    p = Covector([0.8, -0.3, 0.5], [1.1, 0.4, -0.9])
    ref = exp_map(p, 1.0).as_array()
    errs = [np.max(np.abs(exp_map_ode(p, 1.0, n).as_array() - ref)) for n in (8, 16, 32)]
    for e1, e2 in zip(errs, errs[1:]):
        assert 12.0 < e1 / e2 < 20.0


def test_T_cut_examples():
    assert T_cut(Covector(E[0], 2 * PI * E[2])).value == pytest.approx(1.0, rel=1e-14)
    assert T_cut(Covector(2 * E[1], -3 * E[1])).kind is CutKind.INFINITE
    assert T_cut(Covector(E[1], np.zeros(3))).kind is CutKind.INFINITE
    with pytest.raises(ValueError):
        T_cut(Covector(np.zeros(3), E[0]))
    with pytest.raises(ValueError):
        T_cut(Covector(np.zeros(3), np.zeros(3)))


@given(normal_covectors())
def test_T_cut_matches_t_cut_of_extremal(p):
    assert T_cut(p).value == pytest.approx(t_cut(covector_to_extremal(p)).value, rel=1e-12)


def test_T_cut_formula():
    xi, tau = np.array([1.0, 2.0, 0.5]), np.array([0.3, -0.4, 1.2])
    mu = abs(np.dot(xi, tau)) / np.linalg.norm(np.cross(tau, xi))
    assert T_cut(Covector(xi, tau)).value == pytest.approx(2 / np.linalg.norm(tau) * h_cut(mu), rel=1e-15)


def _path(s):
    return Covector([1.0, 0.5 * math.sin(3 * s), 2 * s - 0.5], [0.2 + s, 1.0, 0.3 * math.cos(2 * s)])


def _gradient_jump(n):
    ss = np.linspace(0.0, 1.0, n + 1)
    vals = np.array([T_cut(_path(s)).value for s in ss])
    grad = np.diff(vals) / np.diff(ss)
    return np.max(np.abs(np.diff(grad)))


def test_T_cut_is_smooth_along_a_path():
    # a jump in the derivative would survive refinement; here the
    # consecutive differences of the difference quotient shrink like h
    coarse, fine = _gradient_jump(400), _gradient_jump(800)
    assert 1.8 < coarse / fine < 2.2


@pytest.mark.parametrize("seed", range(4))
def test_minimality_before_and_after_cut(seed):
    rng = np.random.default_rng(seed)
    while True:
        p = Covector(rng.uniform(-1, 1, 3), rng.uniform(-3, 3, 3))
        if p.strictly_normal:
            break
    tc = T_cut(p).value
    speed = math.sqrt(2 * hamiltonian(CrossPoint(np.zeros(3), np.zeros(3)), p))
    for frac in (0.5, 0.9):
        s = frac * tc
        res = distance(exp_map(p, s))
        assert res.distance == pytest.approx(s * speed, abs=1e-6)
    s = 1.05 * tc
    assert distance(exp_map(p, s)).distance < s * speed - 1e-6
