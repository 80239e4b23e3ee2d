"""Zone temperature models.

The discrete recursion used by the optimizer is

    T(k+1) = eps * T(k) + (1 - eps) * (T_out(k) + gamma * P(k))

with a one hour step. ``eps`` is the fraction of the current temperature
kept over one step and ``gamma`` (degF per kW) moves the one-step
equilibrium; it is negative for a cooling load.

The continuous form dT/dt = K1 (T_out - T) - K2 (T - T_d) is provided as-is.
No mapping between (K1, K2, T_d) and (eps, gamma) is attempted.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError

DEFAULT_EPSILON = 0.8
DEFAULT_GAMMA = -2.0
DEFAULT_T_OUT = 95.0


@dataclass(frozen=True)
class ThermalParams:
    epsilon: float = DEFAULT_EPSILON
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise InputError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        if not self.gamma < 0.0:
            raise InputError(f"gamma must be negative for a cooling load, got {self.gamma}")


@dataclass(frozen=True)
class ContinuousOdeParams:
    k1: float
    k2: float
    t_d: float

    def __post_init__(self):
        if self.k1 < 0 or self.k2 < 0:
            raise InputError("k1 and k2 must be non-negative")


@dataclass(frozen=True)
class TemperatureTrajectory:
    """Temperatures in degF; ``temps[0]`` is the measured initial state."""

    temps: tuple[float, ...]

    def __len__(self):
        return len(self.temps)

    def __getitem__(self, k):
        return self.temps[k]

    def __iter__(self):
        return iter(self.temps)

    @property
    def controlled(self) -> tuple[float, ...]:
        """States reached under control, i.e. everything after ``temps[0]``."""
        return self.temps[1:]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.temps, dtype=float)


def continuous_rate(t: float, t_out: float, ode: ContinuousOdeParams) -> float:
    """dT/dt in degF per hour."""
    return ode.k1 * (t_out - t) - ode.k2 * (t - ode.t_d)


def step_temperature(t_k: float, p: float, t_out: float, params: ThermalParams) -> float:
    eps = params.epsilon
    return eps * t_k + (1.0 - eps) * (t_out + params.gamma * p)


def simulate_trajectory(
    t0: float,
    powers: Sequence[float],
    t_out_series: Sequence[float],
    params: ThermalParams,
) -> TemperatureTrajectory:
    if len(powers) != len(t_out_series):
        raise InputError(
            f"powers ({len(powers)}) and outdoor temperatures ({len(t_out_series)}) differ in length"
        )
    if len(powers) == 0:
        raise InputError("need at least one power step")
    temps = [float(t0)]
    for p, t_out in zip(powers, t_out_series):
        temps.append(step_temperature(temps[-1], float(p), float(t_out), params))
    return TemperatureTrajectory(tuple(temps))


def steady_state_power(t_set: float, t_out: float, params: ThermalParams) -> float:
    """Power that keeps the zone at ``t_set``.

    A negative result means the zone would have to be heated; callers treat
    it as infeasible for an AC unit.
    """
    return (t_set - t_out) / params.gamma


def power_to_reach(t_now: float, t_next: float, t_out: float, params: ThermalParams) -> float:
    """Invert one step of the recursion: power taking ``t_now`` to ``t_next``."""
    eps = params.epsilon
    return ((t_next - eps * t_now) / (1.0 - eps) - t_out) / params.gamma
