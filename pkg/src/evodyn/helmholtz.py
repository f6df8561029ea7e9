"""Helmholtz canonical variables along a computed trajectory.

The action-like variable accumulates da = f dg and its conjugate is the
entropy in units of k, ds = df / f.  The identities checked here are exact
for the continuous trajectory, so every returned deviation measures only the
discretisation of the sampled data.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .classical import EvTrajectory, el_rhs, entropy_rate
from .core import DomainError, PhysicalParams, Scenario


@dataclass(frozen=True)
class ActionEntropyTrack:
    t: np.ndarray
    a: np.ndarray
    s: np.ndarray
    a_dot: np.ndarray

    def epsilon(self, params: PhysicalParams):
        """Helmholtz's cyclic variable a / k, zero at the first sample."""
        return self.a / params.k_b


def _require(traj: EvTrajectory):
    if len(traj) < 3:
        raise DomainError("need at least 3 trajectory samples")
    if np.any(np.diff(traj.g) < 0):
        raise DomainError("advance g must be non-decreasing along the trajectory")


def to_action_entropy(traj: EvTrajectory) -> ActionEntropyTrack:
    _require(traj)
    a = cumulative_trapezoid(traj.f, traj.g, initial=0.0)
    s = np.log(traj.f / traj.f[0])
    a_dot = np.gradient(a, traj.t, edge_order=2)
    return ActionEntropyTrack(t=traj.t, a=a, s=s, a_dot=a_dot)


def _sup_relative(diff, ref):
    scale = np.max(np.abs(ref))
    worst = np.max(np.abs(diff))
    return float(worst / scale) if scale > 0 else float(worst)


def check_temperature_identity(track: ActionEntropyTrack, traj: EvTrajectory, params: PhysicalParams):
    """Max over interior samples of |a_dot/k - T| / T."""
    if track.t.shape != traj.t.shape or np.any(track.t != traj.t):
        raise DomainError("track and trajectory are not sampled at the same times")
    inner = slice(1, -1)
    return float(np.max(np.abs(track.a_dot[inner] / params.k_b - traj.temp[inner]) / traj.temp[inner]))


def _centered(x):
    return x[2:] - x[:-2]


def check_canonical_area(traj: EvTrajectory):
    """Compare centered increments da*ds with dg*df (sup-norm relative)."""
    track = to_action_entropy(traj)
    lhs = _centered(track.a) * _centered(track.s)
    rhs = _centered(traj.g) * _centered(traj.f)
    return _sup_relative(lhs - rhs, rhs)


def check_entropy_force(track: ActionEntropyTrack, traj: EvTrajectory, scenario: Scenario,
                        params: PhysicalParams | None = None):
    """Largest sup-norm relative gap between s_dot, fdot/f and the entropy rate over k."""
    params = params or scenario.params
    s_dot = np.gradient(track.s, track.t, edge_order=2)[1:-1]
    fdot_over_f = (params.inertia * el_rhs(traj.g, traj.gdot, scenario) / traj.f)[1:-1]
    rate = entropy_rate(traj.temp, scenario)[1:-1] / params.k_b
    return max(_sup_relative(s_dot - fdot_over_f, fdot_over_f), _sup_relative(s_dot - rate, rate))


def sum_rule_deviation(track: ActionEntropyTrack, traj: EvTrajectory):
    """|int (dL + dH) - Delta(a_dot s)| / max(|Delta(a_dot s)|, 1).

    dL = s d(a_dot) + (dQ/da) da and dH = a_dot ds - (dQ/da) da, with
    -dQ/da = s_dot; the heat terms cancel and the sum is d(a_dot s).
    """
    s_dot = np.gradient(track.s, track.t, edge_order=2)
    d_adot = np.diff(track.a_dot)
    d_s = np.diff(track.s)
    d_a = np.diff(track.a)
    mid = lambda x: 0.5 * (x[1:] + x[:-1])  # noqa: E731
    heat = -mid(s_dot) * d_a
    d_lagr = mid(track.s) * d_adot + heat
    d_ham = mid(track.a_dot) * d_s - heat
    lhs = float(np.sum(d_lagr + d_ham))
    rhs = float(track.a_dot[-1] * track.s[-1] - track.a_dot[0] * track.s[0])
    return abs(lhs - rhs) / max(abs(rhs), 1.0)


def maupertuis_action(traj: EvTrajectory, params: PhysicalParams):
    """Accumulated int p dq with p = f / dq and dq = delta_q * dg."""
    return cumulative_trapezoid(traj.f / params.delta_q, params.delta_q * traj.g, initial=0.0)


def reconstruct_advance(track: ActionEntropyTrack, traj: EvTrajectory):
    """g0 + int da / f."""
    return traj.g[0] + cumulative_trapezoid(1.0 / traj.f, track.a, initial=0.0)
