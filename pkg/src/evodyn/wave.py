"""Stationary wave description of the far-from-equilibrium relaxation.

The wave function psi(g) obeys

    psi'' = -kT0/(2 E00) psi                      for g < g0
    psi'' = [a exp(g0 - g) - c] psi               for g >= g0

with a = k(Te - T0)/(2 E00) and c = k Te/(2 E00).  Left of the contact point
the solution is a pair of plane waves; right of it the two solutions are
modified Bessel functions of imaginary order -+2i sqrt(c) in the argument
x = 2 sqrt(a exp(g0 - g)).  They are used through the branch-free form

    u(g) = exp(-nu (g - g0)/2) S_nu(a exp(g0 - g)),    Gamma(1+nu) I_nu(x) = (x/2)^nu S_nu,

which differs from Gamma(1+nu) I_nu(x) only by the constant (sqrt(a))^nu.  Far to
the right S -> 1, so |u| -> 1 and the harmonic amplitude is fixed by the
coefficient alone.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson, solve_ivp

from .classical import temperature_of_g, temperature_profile
from .core import DomainError, IntegrationError, PhysicalParams, Scenario, e00
from .specfun import DEFAULT_SERIES, SeriesControls, bessel_i_reduced

ASYMPTOTIC_CHOICES = ("outgoing", "incoming", "standing")


@dataclass(frozen=True)
class WaveCoefficients:
    a_coef: complex
    b_coef: complex
    c_coef: complex
    d_coef: complex
    a_param: float
    c_param: float

    def __post_init__(self):
        if not any((self.a_coef, self.b_coef, self.c_coef, self.d_coef)):
            raise DomainError("all four wave coefficients are zero")

    @property
    def nu_out(self) -> complex:
        return -2j * math.sqrt(self.c_param)

    @property
    def kappa_left(self) -> complex:
        """sqrt(a - c) on the principal branch, i k_ev(T0)."""
        return cmath.sqrt(self.a_param - self.c_param)


@dataclass(frozen=True)
class WaveSolution:
    scenario: Scenario
    choice: str
    coefficients: WaveCoefficients
    grid: np.ndarray
    psi: np.ndarray
    windows: list
    series: SeriesControls = DEFAULT_SERIES

    def evaluate(self, g, derivative=0):
        return evaluate_psi(g, self.coefficients, self.scenario, self.series)[derivative]


def wave_params(scenario: Scenario):
    """Return (a, c) of the right-region equation."""
    p = scenario.params
    two_e = 2.0 * e00(p)
    return (p.k_b * (scenario.te_temp - scenario.t0_temp) / two_e, p.k_b * scenario.te_temp / two_e)


def wavenumber(temp, params: PhysicalParams):
    """k_ev = sqrt(k T / (2 E00))."""
    temp = np.asarray(temp, dtype=float)
    if np.any(temp <= 0):
        raise DomainError("temp must be > 0")
    out = np.sqrt(params.k_b * temp / (2.0 * e00(params)))
    return float(out) if out.ndim == 0 else out


def bessel_argument(g, scenario: Scenario):
    """x = 2 sqrt(a exp(g0 - g)); imaginary when cooling (a < 0)."""
    a, _ = wave_params(scenario)
    out = 2.0 * np.sqrt(np.asarray(a * np.exp(scenario.g0 - np.asarray(g, dtype=float)), dtype=complex))
    return complex(out) if out.ndim == 0 else out


def potential_factor(g, scenario: Scenario):
    """Q(g) in psi'' = Q psi; equals -k T(g) / (2 E00) with T the classical profile."""
    a, c = wave_params(scenario)
    g = np.asarray(g, dtype=float)
    return np.where(g < scenario.g0, a - c, a * np.exp(scenario.g0 - np.maximum(g, scenario.g0)) - c)


def right_basis(g, nu, scenario: Scenario, controls: SeriesControls = DEFAULT_SERIES):
    """Return (u, u', u'') of the right-region solution with order nu."""
    a, _ = wave_params(scenario)
    g = np.asarray(g, dtype=float)
    y = a * np.exp(scenario.g0 - g)
    s, d1, d2 = bessel_i_reduced(nu, y, controls)
    phase = np.exp(-0.5 * nu * (g - scenario.g0))
    return phase * s, phase * (-0.5 * nu * s - d1), phase * (0.25 * nu * nu * s + nu * d1 + d2)


def psi_left(g, coeffs: WaveCoefficients, scenario: Scenario, derivative=0):
    """A exp(kappa g) + B exp(-kappa g), kappa = sqrt(a - c)."""
    kap = coeffs.kappa_left
    g = np.asarray(g, dtype=float)
    plus = coeffs.a_coef * np.exp(kap * g)
    minus = coeffs.b_coef * np.exp(-kap * g)
    return kap**derivative * (plus + (-1) ** derivative * minus)


def psi_right(g, coeffs: WaveCoefficients, scenario: Scenario,
              controls: SeriesControls = DEFAULT_SERIES, derivative=0):
    """C u_{-2i sqrt c}(g) + D u_{+2i sqrt c}(g)."""
    g = np.asarray(g, dtype=float)
    out = np.zeros(g.shape, dtype=complex)
    for coef, nu in ((coeffs.c_coef, coeffs.nu_out), (coeffs.d_coef, -coeffs.nu_out)):
        if coef != 0:
            out = out + coef * right_basis(g, nu, scenario, controls)[derivative]
    return out


def evaluate_psi(g, coeffs: WaveCoefficients, scenario: Scenario,
                 controls: SeriesControls = DEFAULT_SERIES):
    """Piecewise (psi, psi', psi'') on an array of g."""
    g = np.atleast_1d(np.asarray(g, dtype=float))
    left = g < scenario.g0
    out = [np.zeros(g.shape, dtype=complex) for _ in range(3)]
    for d in range(3):
        if left.any():
            out[d][left] = psi_left(g[left], coeffs, scenario, d)
        if (~left).any():
            out[d][~left] = psi_right(g[~left], coeffs, scenario, controls, d)
    return tuple(out)


def _right_coefficients(choice):
    if choice == "outgoing":
        return 1.0 + 0j, 0j
    if choice == "incoming":
        return 0j, 1.0 + 0j
    if choice == "standing":
        return 0.5 + 0j, 0.5 + 0j
    raise DomainError(f"asymptotic_choice must be one of {ASYMPTOTIC_CHOICES}, got {choice!r}")


def match_coefficients(scenario: Scenario, asymptotic_choice="outgoing",
                       controls: SeriesControls = DEFAULT_SERIES) -> WaveCoefficients:
    """Fix the right-region branch and solve continuity of psi, psi' at g0 for (A, B)."""
    a, c = wave_params(scenario)
    c_coef, d_coef = _right_coefficients(asymptotic_choice)
    probe = WaveCoefficients(0j, 0j, c_coef, d_coef, a, c)
    g0 = scenario.g0
    target = np.array([psi_right(g0, probe, scenario, controls, d) for d in (0, 1)])
    kap = probe.kappa_left
    ep, em = cmath.exp(kap * g0), cmath.exp(-kap * g0)
    system = np.array([[ep, em], [kap * ep, -kap * em]])
    if abs(np.linalg.det(system)) < 1e-300:
        raise DomainError("singular matching system")
    a_coef, b_coef = np.linalg.solve(system, target)
    return WaveCoefficients(complex(a_coef), complex(b_coef), c_coef, d_coef, a, c)


def default_grid(scenario: Scenario, grid_density=40, g_min=None, g_max=None):
    """Uniform grid containing g0, spacing <= shortest wavelength / grid_density."""
    p = scenario.params
    k_min = wavenumber(scenario.t0_temp, p)
    k_max = wavenumber(max(scenario.t0_temp, scenario.te_temp), p)
    if g_min is None:
        g_min = scenario.g0 - 6.0 * 2.0 * math.pi / k_min
    if g_max is None:
        g_max = scenario.g0 + 12.0
    if not g_min < scenario.g0 < g_max:
        raise DomainError("grid must contain g0 in its interior")
    h = 2.0 * math.pi / k_max / grid_density
    n_left = math.ceil((scenario.g0 - g_min) / h - 1e-9)
    n_right = math.ceil((g_max - scenario.g0) / h - 1e-9)
    return scenario.g0 + h * np.arange(-n_left, n_right + 1)


def solve_wave(scenario: Scenario, asymptotic_choice="outgoing",
               series_controls: SeriesControls = DEFAULT_SERIES,
               grid_density=40, g_min=None, g_max=None) -> WaveSolution:
    """Matched piecewise solution sampled on a grid, with half-period temperature windows.

    The chosen right-region branch has unit coefficient, so the far-right
    harmonic amplitude is 1.
    """
    coeffs = match_coefficients(scenario, asymptotic_choice, series_controls)
    grid = default_grid(scenario, grid_density, g_min, g_max)
    psi = evaluate_psi(grid, coeffs, scenario, series_controls)[0]
    sol = WaveSolution(scenario, asymptotic_choice, coeffs, grid, psi, [], series_controls)
    windows = [
        (lo, hi, mid, mean_temperature(sol, (lo, hi), scenario.params))
        for lo, hi, mid in half_period_windows(sol)
    ]
    return WaveSolution(scenario, asymptotic_choice, coeffs, grid, psi, windows, series_controls)


def continuity_residuals(solution: WaveSolution):
    """(|psi_L - psi_R|, |psi_L' - psi_R'|) at g0, relative to max(1, |psi(g0)|)."""
    sc, co = solution.scenario, solution.coefficients
    vals = [
        (psi_left(sc.g0, co, sc, d), psi_right(sc.g0, co, sc, solution.series, d)) for d in (0, 1)
    ]
    scale = max(1.0, abs(vals[0][1]))
    return tuple(float(abs(left - right)) / scale for left, right in vals)


def integrate_wave_ode(scenario: Scenario, g_grid, psi_end, dpsi_end, rel_tol=1e-12, abs_tol=1e-14,
                       return_derivative=False):
    """Backward integration of psi'' = Q(g) psi from the last grid point.

    Independent of the series solution; the kink of Q at g0 is handled by
    stopping there and restarting.  Returns psi sampled on ``g_grid`` (and
    psi' when ``return_derivative``).
    """
    g_grid = np.asarray(g_grid, dtype=float)
    if np.any(np.diff(g_grid) <= 0):
        raise DomainError("g_grid must be strictly increasing")
    a, c = wave_params(scenario)
    g0 = scenario.g0

    def rhs_right(g, y):
        q = a * math.exp(g0 - g) - c
        return (y[2], y[3], q * y[0], q * y[1])

    def rhs_left(_g, y):
        q = a - c
        return (y[2], y[3], q * y[0], q * y[1])

    out = np.empty(g_grid.shape, dtype=complex)
    dout = np.empty(g_grid.shape, dtype=complex)
    state = np.array([psi_end.real, psi_end.imag, dpsi_end.real, dpsi_end.imag], dtype=float)
    segments = [(g_grid[-1], max(g0, g_grid[0]), rhs_right, g_grid >= g0)]
    if g_grid[0] < g0:
        segments.append((g0, g_grid[0], rhs_left, g_grid < g0))
    for start, stop, rhs, mask in segments:
        pts = g_grid[mask][::-1]
        if start == stop:
            out[mask] = state[0] + 1j * state[1]
            dout[mask] = state[2] + 1j * state[3]
            continue
        sol = solve_ivp(rhs, (start, stop), state, method="DOP853", rtol=rel_tol, atol=abs_tol,
                        dense_output=True)
        if not sol.success:
            raise IntegrationError(f"wave integration failed: {sol.message}",
                                   last_state=(float(sol.t[-1]), sol.y[:, -1]))
        ys = sol.sol(pts)
        idx = np.flatnonzero(mask)[::-1]
        out[idx] = ys[0] + 1j * ys[1]
        dout[idx] = ys[2] + 1j * ys[3]
        state = sol.sol(stop)
    return (out, dout) if return_derivative else out


def half_period_windows(solution: WaveSolution):
    """Intervals between consecutive zeros of Re psi, as (g_lo, g_hi, g_mid)."""
    g, re = solution.grid, solution.psi.real
    zeros = []
    for i in range(len(g) - 1):
        if re[i] == 0.0:
            zeros.append(g[i])
        elif re[i] * re[i + 1] < 0.0:
            zeros.append(g[i] - re[i] * (g[i + 1] - g[i]) / (re[i + 1] - re[i]))
    return [(lo, hi, 0.5 * (lo + hi)) for lo, hi in zip(zeros[:-1], zeros[1:])]


def _window_samples(solution: WaveSolution, window, n=129):
    lo, hi = window
    if not (solution.grid[0] <= lo < hi <= solution.grid[-1]):
        raise DomainError(f"window {window!r} lies outside the grid")
    g = np.linspace(lo, hi, n)
    return (g,) + evaluate_psi(g, solution.coefficients, solution.scenario, solution.series)


def expected_temperature(g, psi, d2psi, params: PhysicalParams, return_imag=False):
    """<T> = -hbar^2/(k m dq^2) Re(int psi* psi'') / int |psi|^2 by composite Simpson.

    The minus sign makes plane waves of wavenumber k_ev give T = 2 E00 k_ev^2 / k.
    """
    norm = simpson(np.abs(psi) ** 2, x=g)
    if not norm > 0:
        raise DomainError("wave function has zero norm on the window")
    overlap = simpson(np.conj(psi) * d2psi, x=g) / norm
    scale = -params.hbar**2 / (params.k_b * params.inertia)
    if return_imag:
        return scale * overlap.real, scale * overlap.imag
    return scale * overlap.real


def mean_temperature(solution: WaveSolution, window, params: PhysicalParams, return_imag=False):
    """Half-period temperature expectation value, psi'' from the analytic series."""
    g, psi, _, d2psi = _window_samples(solution, window)
    return expected_temperature(g, psi, d2psi, params, return_imag)


def window_density(solution: WaveSolution, window):
    """Mean of |psi|^2 over a window."""
    g, psi, _, _ = _window_samples(solution, window)
    return simpson(np.abs(psi) ** 2, x=g) / (window[1] - window[0])


def _right_windows(solution: WaveSolution):
    return [w for w in solution.windows if w[0] >= solution.scenario.g0]


def _fit_slope(x, y, what):
    x, y = np.asarray(x), np.asarray(y)
    if len(x) < 3 or np.ptp(x) < 1e-9:
        raise DomainError(f"{what}: temperature does not vary over the right region")
    return float(np.polyfit(x, y, 1)[0])


def envelope_exponent(solution: WaveSolution, scenario: Scenario | None = None):
    """Slope of ln(half-period peak of |Re psi|) against ln T_classical at the peak."""
    scenario = scenario or solution.scenario
    xs, ys = [], []
    for lo, hi, _mid, _t in _right_windows(solution):
        g, psi, _, _ = _window_samples(solution, (lo, hi))
        i = int(np.argmax(np.abs(psi.real)))
        xs.append(math.log(temperature_of_g(g[i], scenario)))
        ys.append(math.log(abs(psi.real[i])))
    return _fit_slope(xs, ys, "envelope exponent")


def density_exponent(solution: WaveSolution, scenario: Scenario | None = None):
    """Slope of ln(window-mean |psi|^2) against ln T_classical at the window midpoint."""
    scenario = scenario or solution.scenario
    xs, ys = [], []
    for lo, hi, mid, _t in _right_windows(solution):
        xs.append(math.log(temperature_of_g(mid, scenario)))
        ys.append(math.log(window_density(solution, (lo, hi))))
    return _fit_slope(xs, ys, "density exponent")


# 7-point, sixth-order central stencil for the second derivative
_D2_STENCIL = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])


def equation_residual(solution: WaveSolution):
    """Max |psi''_fd - Q psi| / max |Q psi| on the grid, away from the kink at g0."""
    g, psi = solution.grid, solution.psi
    h = g[1] - g[0]
    d2 = np.convolve(psi, _D2_STENCIL[::-1], mode="valid") / h**2
    inner = g[3:-3]
    q_psi = potential_factor(inner, solution.scenario) * psi[3:-3]
    keep = np.abs(inner - solution.scenario.g0) > 3.5 * h
    return float(np.max(np.abs(d2 - q_psi)[keep]) / np.max(np.abs(q_psi)))


def classical_temperature(g, scenario: Scenario):
    return temperature_profile(g, scenario)
