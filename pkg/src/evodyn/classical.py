"""Near-equilibrium trajectory of a particle in a box relaxing toward a bath.

The evolution is carried by the advance coordinate g(t) with Lagrangian

    L(g, gdot) = 1/2 m dq^2 gdot^2 - k/2 (Te - T0) exp(g0 - g)

at constant volume.  The numerical integrator and the closed form are kept as
two independent routes so that each can check the other.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .core import (
    DomainError,
    IntegrationError,
    NumericControls,
    PhysicalParams,
    Scenario,
)


@dataclass(frozen=True)
class EvTrajectory:
    """Sampled evolution.  Columns are equal-length 1-D arrays."""

    t: np.ndarray
    g: np.ndarray
    gdot: np.ndarray
    f: np.ndarray
    temp: np.ndarray
    s_rel: np.ndarray

    COLUMNS = ("t", "g", "gdot", "f", "T", "S")

    def __len__(self):
        return len(self.t)

    def columns(self):
        return (self.t, self.g, self.gdot, self.f, self.temp, self.s_rel)


def _relax_coeff(scenario: Scenario) -> float:
    p = scenario.params
    return p.k_b * (scenario.te_temp - scenario.t0_temp) / p.inertia


def el_rhs(g, gdot, scenario: Scenario):
    """Advance acceleration from the Euler-Lagrange equation (independent of gdot)."""
    return 0.5 * _relax_coeff(scenario) * np.exp(scenario.g0 - np.asarray(g, dtype=float))


def gdot_of_g(g, scenario: Scenario):
    """Advance rate from the energy integral, gdot^2 = gdot0^2 + K (1 - exp(g0 - g))."""
    g = np.asarray(g, dtype=float)
    if np.any(g < scenario.g0):
        raise DomainError("energy integral is defined for g >= g0")
    rad = scenario.gdot0**2 + _relax_coeff(scenario) * -np.expm1(scenario.g0 - g)
    if np.any(rad < 0):
        warnings.warn("negative radicand in energy integral clamped to 0", RuntimeWarning)
        rad = np.maximum(rad, 0.0)
    out = np.sqrt(rad)
    return float(out) if out.ndim == 0 else out


def closed_form_g(t, scenario: Scenario):
    """Analytic g(t) with g(0) = g0 and gdot(0) = gdot0.

    Separating the energy integral gives
    exp(g - g0) = [(ge + g0') e^{ge t/2} + (ge - g0') e^{-ge t/2}]^2 / (4 ge^2)
    with ge, g0' the equilibrium and initial rates.  Evaluated in log form so
    that large t does not overflow.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be >= 0")
    ge, g0r = scenario.gdot_e, scenario.gdot0
    half = 0.5 * ge * t
    # X = (ge+g0r) e^{half} [1 + r e^{-2 half}],  r = (ge-g0r)/(ge+g0r), |r| < 1
    r = (ge - g0r) / (ge + g0r)
    log_x = np.log(ge + g0r) + half + np.log1p(r * np.exp(-2.0 * half))
    out = scenario.g0 + 2.0 * log_x - np.log(4.0 * ge**2)
    return float(out) if out.ndim == 0 else out


def closed_form_gdot(t, scenario: Scenario):
    """Derivative of closed_form_g: ge (1 - r e^{-ge t}) / (1 + r e^{-ge t})."""
    t = np.asarray(t, dtype=float)
    ge, g0r = scenario.gdot_e, scenario.gdot0
    q = (ge - g0r) / (ge + g0r) * np.exp(-ge * t)
    out = ge * (1.0 - q) / (1.0 + q)
    return float(out) if out.ndim == 0 else out


def temperature_of_g(g, scenario: Scenario):
    """T = T0 + (Te - T0)(1 - exp(g0 - g)) for g >= g0."""
    g = np.asarray(g, dtype=float)
    if np.any(g < scenario.g0):
        raise DomainError("relaxation law is defined for g >= g0")
    out = scenario.t0_temp + (scenario.te_temp - scenario.t0_temp) * -np.expm1(scenario.g0 - g)
    return float(out) if out.ndim == 0 else out


def temperature_profile(g, scenario: Scenario):
    """Classical temperature on the whole g axis: T0 before contact, relaxation after."""
    g = np.asarray(g, dtype=float)
    after = np.maximum(g, scenario.g0)
    out = np.where(g < scenario.g0, scenario.t0_temp, temperature_of_g(after, scenario))
    return float(out) if out.ndim == 0 else out


def integrate_trajectory(scenario: Scenario, controls: NumericControls | None = None) -> EvTrajectory:
    """Integrate the Euler-Lagrange equation from g(0) = g0, gdot(0) = gdot0.

    Uses an adaptive 8th-order Dormand-Prince scheme and samples the dense
    output every ``controls.output_stride`` up to ``controls.t_max``.
    """
    controls = controls or scenario.numerics
    half_k = 0.5 * _relax_coeff(scenario)
    g0 = scenario.g0

    def rhs(_t, y):
        return (y[1], half_k * math.exp(g0 - y[0]))

    n = max(int(round(controls.t_max / controls.output_stride)), 2)
    t_out = np.linspace(0.0, controls.t_max, n + 1)
    sol = solve_ivp(
        rhs,
        (0.0, controls.t_max),
        [g0, scenario.gdot0],
        method="DOP853",
        rtol=controls.rel_tol,
        atol=controls.abs_tol,
        max_step=controls.max_step,
        dense_output=True,
    )
    if not sol.success:
        last = (float(sol.t[-1]), float(sol.y[0, -1]), float(sol.y[1, -1]))
        raise IntegrationError(f"trajectory integration failed: {sol.message}", last_state=last)
    g, gdot = sol.sol(t_out)
    # dense output may wobble by an ulp once the force has died away
    g[0], gdot[0] = g0, scenario.gdot0
    return trajectory_from_samples(t_out, g, gdot, scenario.params)


def trajectory_from_samples(t, g, gdot, params: PhysicalParams) -> EvTrajectory:
    t = np.asarray(t, dtype=float)
    g = np.asarray(g, dtype=float)
    gdot = np.asarray(gdot, dtype=float)
    f = params.inertia * gdot
    temp = f * gdot / params.k_b
    s_rel = params.k_b * np.log(f / f[0])
    return EvTrajectory(t=t, g=g, gdot=gdot, f=f, temp=temp, s_rel=s_rel)


def quantum_conductance(temp, params: PhysicalParams):
    """Single-channel thermal conductance quantum pi^2 k^2 T / (3 h)."""
    return math.pi**2 * params.k_b**2 * temp / (3.0 * params.h)


def conductance(temp, f, c_v, params: PhysicalParams):
    """Return (sigma, sigma_max).

    sigma = c_v k T / (2 f) counts the heat crossing one wall; the bound
    sigma_max = pi k^2 T / h is reached for c_v = k/2 and f = hbar/2.
    """
    if temp <= 0 or c_v <= 0:
        raise DomainError("temp and c_v must be > 0")
    if f < 0.5 * params.hbar * (1.0 - 4 * np.finfo(float).eps):
        raise DomainError(f"f = {f!r} is below hbar/2")
    sigma = c_v * params.k_b * temp / (2.0 * f)
    sigma_max = math.pi * params.k_b**2 * temp / params.h
    return sigma, sigma_max


def ev_force(temp, scenario: Scenario):
    """Evolutionary force (k/2)(Te - T), the rate of change of f."""
    return 0.5 * scenario.params.k_b * (scenario.te_temp - np.asarray(temp, dtype=float))


def entropy_rate(temp, scenario: Scenario):
    """dS/dt = k^2 (Te - T) / (2 dq sqrt(m k T))."""
    p = scenario.params
    temp = np.asarray(temp, dtype=float)
    if np.any(temp <= 0):
        raise DomainError("temp must be > 0")
    out = p.k_b**2 * (scenario.te_temp - temp) / (2.0 * p.delta_q * np.sqrt(p.m * p.k_b * temp))
    return float(out) if out.ndim == 0 else out


def lagrangian(g, gdot, scenario: Scenario):
    p = scenario.params
    return 0.5 * p.inertia * gdot**2 - 0.5 * p.k_b * (scenario.te_temp - scenario.t0_temp) * np.exp(
        scenario.g0 - g
    )


def entropy_rate_from_lagrangian(g, gdot, scenario: Scenario, h=1e-6):
    """k (dL/dg) / (dL/dgdot) with central-difference partials.

    The Euler-Lagrange equation makes dL/dg the rate of change of the momentum
    dL/dgdot, so this ratio times k is k fdot / f.
    """
    dl_dg = (lagrangian(g + h, gdot, scenario) - lagrangian(g - h, gdot, scenario)) / (2 * h)
    dl_dv = (lagrangian(g, gdot + h, scenario) - lagrangian(g, gdot - h, scenario)) / (2 * h)
    return scenario.params.k_b * dl_dg / dl_dv
