"""Unit system, physical parameters and the basic kinematic relations.

Everything here is a pure function of immutable inputs.  Quantities keep their
explicit constants so that non-natural unit systems work unchanged; the
defaults are natural units (m = delta_q = hbar = k_b = 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain of a physical relation."""


class IntegrationError(RuntimeError):
    """Adaptive integration gave up; carries the last accepted state."""

    def __init__(self, message, last_state=None):
        super().__init__(message)
        self.last_state = last_state


class ConvergenceError(ArithmeticError):
    """A series did not converge within its term budget."""

    def __init__(self, message, nu=None, z=None):
        super().__init__(message)
        self.nu = nu
        self.z = z


def _positive(name, value):
    if not (math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class PhysicalParams:
    m: float = 1.0
    delta_q: float = 1.0
    hbar: float = 1.0
    k_b: float = 1.0

    def __post_init__(self):
        for name in ("m", "delta_q", "hbar", "k_b"):
            _positive(name, getattr(self, name))

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar

    @property
    def e00(self) -> float:
        return e00(self)

    @property
    def inertia(self) -> float:
        """m * delta_q**2, the factor relating momentum f to the advance rate."""
        return self.m * self.delta_q**2


@dataclass(frozen=True)
class NumericControls:
    """Integrator tolerances and output sampling for trajectory runs."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    t_max: float = 10.0
    output_stride: float = 1e-2

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise DomainError(f"{name} must lie in (0, 1), got {v!r}")
        if not self.max_step > 0:
            raise DomainError(f"max_step must be > 0, got {self.max_step!r}")
        _positive("t_max", self.t_max)
        _positive("output_stride", self.output_stride)


@dataclass(frozen=True)
class Scenario:
    """Particle at temperature t0_temp put in contact with a bath at te_temp at g = g0."""

    params: PhysicalParams = field(default_factory=PhysicalParams)
    t0_temp: float = 1.0
    te_temp: float = 50.0
    g0: float = 0.0
    numerics: NumericControls = field(default_factory=NumericControls)

    def __post_init__(self):
        _positive("t0_temp", self.t0_temp)
        _positive("te_temp", self.te_temp)
        if not math.isfinite(self.g0):
            raise DomainError(f"g0 must be finite, got {self.g0!r}")

    @property
    def gdot0(self) -> float:
        return math.sqrt(self.params.k_b * self.t0_temp / self.params.inertia)

    @property
    def gdot_e(self) -> float:
        return math.sqrt(self.params.k_b * self.te_temp / self.params.inertia)

    @property
    def heating(self) -> bool:
        return self.te_temp > self.t0_temp


@dataclass(frozen=True)
class EvState:
    g: float
    gdot: float
    f: float
    temp: float

    @classmethod
    def from_rate(cls, g, gdot, params: PhysicalParams) -> "EvState":
        """State on a constant-volume trajectory, where f = m * delta_q**2 * gdot."""
        f = params.inertia * gdot
        return cls(g=g, gdot=gdot, f=f, temp=temperature_of(f, gdot, params))


def e00(params: PhysicalParams) -> float:
    """Ground-state energy of the particle in the box, hbar**2 / (2 m delta_q**2)."""
    return params.hbar**2 / (2.0 * params.inertia)


def temperature_of(f, gdot, params: PhysicalParams):
    """Temperature from k_b T = f * gdot."""
    f_arr = np.asarray(f, dtype=float)
    if np.any(f_arr <= 0):
        raise DomainError("momentum f must be > 0")
    if np.any(np.asarray(gdot) < 0):
        raise DomainError("advance rate must be >= 0")
    return f * gdot / params.k_b


def entropy_change(f_new, f_old, params: PhysicalParams):
    """Delta S = k_b ln(f_new / f_old).  Only entropy differences are defined."""
    if np.any(np.asarray(f_new) <= 0) or np.any(np.asarray(f_old) <= 0):
        raise DomainError("momenta must be > 0")
    return params.k_b * np.log(np.asarray(f_new) / np.asarray(f_old))


def cpdq_uncertainty(f, params: PhysicalParams):
    """Advance uncertainty delta_g = (hbar/2) / f, in (0, 1] for f >= hbar/2."""
    f_min = params.hbar / 2.0
    f_arr = np.asarray(f, dtype=float)
    # one ulp of slack so that f = hbar/2 computed by a different path is accepted
    if np.any(f_arr < f_min * (1.0 - 4 * np.finfo(float).eps)):
        raise DomainError(f"f = {f!r} is below the lower bound hbar/2 = {f_min!r}")
    dg = np.minimum(f_min / f_arr, 1.0)
    return float(dg) if dg.ndim == 0 else dg


def partition_identity(temp, volume, params: PhysicalParams):
    """Return (f, z, f / (sqrt(2 pi) hbar z)) for a single degree of freedom.

    f = (m k T)^(1/2) V^(1/3) and z = (2 pi m k T)^(1/2) V^(1/3) / h; the ratio is 1.
    """
    _positive("temp", temp)
    _positive("volume", volume)
    side = volume ** (1.0 / 3.0)
    mkt = params.m * params.k_b * temp
    f = math.sqrt(mkt) * side
    z = math.sqrt(2.0 * math.pi * mkt) * side / params.h
    return f, z, f / (math.sqrt(2.0 * math.pi) * params.hbar * z)
