import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evodyn.classical import (
    closed_form_g,
    closed_form_gdot,
    conductance,
    el_rhs,
    entropy_rate,
    entropy_rate_from_lagrangian,
    ev_force,
    gdot_of_g,
    integrate_trajectory,
    quantum_conductance,
    temperature_of_g,
)
from evodyn.core import DomainError, IntegrationError, PhysicalParams, Scenario

# g(1) for T0=1, Te=50, g0=0 from an mpmath Taylor-series ODE solve at 40 digits
G_AT_T1 = 5.950599349612198
# the same solve: g = ln 2 is reached at t = 0.21304065422714717 with gdot = sqrt(25.5)
T_AT_LN2 = 0.21304065422714717


def test_el_rhs(heating):
    assert el_rhs(0.0, 1.0, heating) == pytest.approx(24.5, rel=1e-15)
    assert el_rhs(math.log(49), 1.0, heating) == pytest.approx(0.5, rel=1e-14)
    eq = Scenario(t0_temp=3.0, te_temp=3.0)
    assert np.all(el_rhs(np.linspace(0, 10, 11), 1.0, eq) == 0.0)


def test_free_streaming():
    sc = Scenario(t0_temp=1.0, te_temp=1.0, g0=0.7)
    traj = integrate_trajectory(sc)
    assert np.max(np.abs(traj.g - (0.7 + traj.t))) < 1e-13
    assert np.all(traj.s_rel == 0.0)
    assert np.max(np.abs(closed_form_g(traj.t, sc) - (0.7 + traj.t))) < 1e-13


def test_closed_form_against_taylor_oracle(heating):
    assert closed_form_g(1.0, heating) == pytest.approx(G_AT_T1, abs=1e-13)
    assert closed_form_g(T_AT_LN2, heating) == pytest.approx(math.log(2), abs=1e-13)
    assert closed_form_gdot(T_AT_LN2, heating) == pytest.approx(math.sqrt(25.5), rel=1e-13)


def test_integrator_against_taylor_oracle(heating):
    traj = integrate_trajectory(heating)
    i = int(np.flatnonzero(traj.t == 1.0)[0])
    assert traj.g[i] == pytest.approx(G_AT_T1, abs=1e-7)


def test_closed_form_edges(heating):
    assert closed_form_g(0.0, heating) == heating.g0
    ge, g0r = heating.gdot_e, heating.gdot0
    t = np.array([20.0, 50.0, 200.0])
    asym = heating.g0 + ge * t + 2 * math.log((ge + g0r) / (2 * ge))
    assert np.max(np.abs(closed_form_g(t, heating) - asym)) < 1e-12
    with pytest.raises(DomainError):
        closed_form_g(-1.0, heating)


@pytest.mark.parametrize("t0, te", [(1.0, 50.0), (50.0, 1.0), (1.0, 10.0), (2.0, 2.5)])
def test_closed_form_matches_integrator(t0, te):
    sc = Scenario(t0_temp=t0, te_temp=te, g0=-0.3)
    traj = integrate_trajectory(sc)
    assert np.max(np.abs(traj.g - closed_form_g(traj.t, sc))) < 1e-7
    assert np.max(np.abs(traj.gdot - closed_form_gdot(traj.t, sc))) < 1e-7 * sc.gdot_e


def test_gdot_of_g(heating):
    assert gdot_of_g(0.0, heating) == 1.0
    assert gdot_of_g(math.log(2), heating) == pytest.approx(5.049752469181039, rel=1e-14)
    assert gdot_of_g(80.0, heating) == pytest.approx(math.sqrt(50), rel=1e-15)
    with pytest.raises(DomainError):
        gdot_of_g(-0.1, heating)


def test_gdot_of_g_clamps_and_warns():
    # cooling into a near-zero bath: sqrt(3)**2 < 3 makes the radicand -4e-16 far from g0
    sc = Scenario(t0_temp=3.0, te_temp=1e-300)
    with pytest.warns(RuntimeWarning):
        assert gdot_of_g(50.0, sc) == 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert gdot_of_g(0.5, Scenario(t0_temp=2.0, te_temp=1.0)) > 0


def test_energy_integral_gradient(heating):
    # d(gdot^2/2)/dg from the energy integral equals the Euler-Lagrange acceleration
    h = 1e-6
    for g in (0.1, 0.5, 1.0, 2.0, 4.0):
        fd = (gdot_of_g(g + h, heating) ** 2 - gdot_of_g(g - h, heating) ** 2) / (4 * h)
        assert fd == pytest.approx(el_rhs(g, 0.0, heating), rel=1e-6)


def test_temperature_of_g(heating):
    assert temperature_of_g(0.0, heating) == 1.0
    assert temperature_of_g(math.log(2), heating) == pytest.approx(25.5, rel=1e-14)
    assert temperature_of_g(60.0, heating) == pytest.approx(50.0, rel=1e-15)


@pytest.mark.parametrize("t0, te", [(1.0, 50.0), (50.0, 1.0)])
def test_kinetic_identity_along_trajectory(t0, te):
    sc = Scenario(t0_temp=t0, te_temp=te)
    traj = integrate_trajectory(sc)
    thermal = temperature_of_g(traj.g, sc)
    assert np.max(np.abs(traj.gdot**2 - thermal) / thermal) < 1e-8


def test_monotone_relaxation(heating, cooling):
    up = integrate_trajectory(heating)
    assert np.all(np.diff(up.t) > 0) and np.all(np.diff(up.g) >= 0)
    assert np.all(np.diff(up.temp) > -1e-12 * 50) and np.all(up.temp <= 50.0 * (1 + 1e-12))
    assert np.all(np.diff(up.s_rel) > -1e-12)
    down = integrate_trajectory(cooling)
    assert np.all(np.diff(down.g) >= 0)
    assert np.all(np.diff(down.temp) < 1e-12 * 50) and np.all(down.temp >= 1.0 * (1 - 1e-12))
    assert np.all(np.diff(down.s_rel) < 1e-12)


def test_slope_approach_is_exponential(heating):
    # |gdot/ge - 1| ~ 2 r exp(-ge t) with r = (ge - g0')/(ge + g0')
    ge = heating.gdot_e
    r = (ge - 1.0) / (ge + 1.0)
    for t in (0.5, 1.0, 2.0):
        dev = 1.0 - closed_form_gdot(t, heating) / ge
        assert dev == pytest.approx(2 * r * math.exp(-ge * t), rel=2 * r * math.exp(-ge * t) + 1e-6)
    traj = integrate_trajectory(heating)
    tail = traj.t >= 5.0
    slope = np.polyfit(traj.t[tail], traj.g[tail], 1)[0]
    assert slope == pytest.approx(ge, rel=1e-9)


def test_integration_failure_reports_last_state(heating, monkeypatch):
    import evodyn.classical as mod

    real = mod.solve_ivp

    def failing(*args, **kwargs):
        sol = real(*args, **kwargs)
        sol.success = False
        sol.message = "Required step size is less than spacing between numbers."
        return sol

    monkeypatch.setattr(mod, "solve_ivp", failing)
    with pytest.raises(IntegrationError) as info:
        integrate_trajectory(heating)
    t_last, g_last, _ = info.value.last_state
    assert t_last == heating.numerics.t_max and g_last > heating.g0


def test_conductance_bound(natural):
    sigma, sigma_max = conductance(2.0, 0.5, 0.5, natural)
    assert sigma == pytest.approx(sigma_max, rel=1e-15)
    assert sigma_max == pytest.approx(math.pi * 2.0 / (2 * math.pi), rel=1e-15)
    assert sigma_max / quantum_conductance(2.0, natural) == pytest.approx(3 / math.pi, rel=1e-15)
    doubled, _ = conductance(2.0, 1.0, 0.5, natural)
    assert doubled == pytest.approx(sigma / 2, rel=1e-15)
    with pytest.raises(DomainError):
        conductance(1.0, 0.4, 0.5, natural)


@settings(max_examples=100)
@given(temp=st.floats(1e-2, 1e3), f=st.floats(0.5, 1e3), cv=st.floats(1e-3, 0.5))
def test_conductance_never_exceeds_bound(temp, f, cv):
    sigma, sigma_max = conductance(temp, f, cv, PhysicalParams())
    assert sigma <= sigma_max * (1 + 1e-12)


def test_ev_force(heating):
    assert ev_force(50.0, heating) == 0.0
    assert ev_force(1.0, heating) == 24.5
    cooling = Scenario(t0_temp=50.0, te_temp=1.0)
    assert ev_force(30.0, cooling) < 0


@pytest.mark.parametrize("t0, te", [(1.0, 50.0), (50.0, 1.0)])
def test_force_drives_momentum(t0, te):
    # fdot = m dq^2 gddot must equal (k/2)(Te - T) along the computed trajectory
    sc = Scenario(params=PhysicalParams(m=2.0, delta_q=0.5, k_b=1.5), t0_temp=t0, te_temp=te)
    traj = integrate_trajectory(sc)
    fdot = sc.params.inertia * el_rhs(traj.g, traj.gdot, sc)
    force = ev_force(traj.temp, sc)
    assert np.max(np.abs(fdot - force)) < 1e-8 * np.max(np.abs(force))


def test_entropy_rate(heating):
    assert entropy_rate(50.0, heating) == 0.0
    assert entropy_rate(1.0, heating) == pytest.approx(24.5, rel=1e-15)
    traj = integrate_trajectory(heating)
    assert np.all(np.sign(entropy_rate(traj.temp[:200], heating)) == 1)


def test_entropy_rate_lagrangian_form(heating):
    traj = integrate_trajectory(heating)
    for i in (0, 10, 50, 100):
        g, gdot = traj.g[i], traj.gdot[i]
        direct = entropy_rate(traj.temp[i], heating)
        via_l = entropy_rate_from_lagrangian(g, gdot, heating)
        assert via_l == pytest.approx(direct, rel=1e-8)
        # k fdot / f as well
        kfdot = heating.params.k_b * heating.params.inertia * el_rhs(g, gdot, heating) / traj.f[i]
        assert kfdot == pytest.approx(direct, rel=1e-8)
