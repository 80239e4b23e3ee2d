"""One-window schedules for the AC load.

Two modes:

* inelastic: hold a user set point every hour, prices ignored when choosing
  power (they are still used to cost the result);
* elastic: minimize sum(price[k] * P[k]) over the window while keeping every
  controlled temperature inside the comfort zone.

Cost is price (cents/kWh) x power (kW) x 1 h, in cents.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import lp
from .errors import InfeasibleError, InputError
from .prices import PriceSeries, as_series
from .thermal import (
    DEFAULT_T_OUT,
    TemperatureTrajectory,
    ThermalParams,
    power_to_reach,
    simulate_trajectory,
    steady_state_power,
)

DEFAULT_HORIZON = 24
SCHEDULE_TOL = 1e-6
# slack granted to the inelastic power check so a float-exact p_max is not rejected
_BOUND_TOL = 1e-9


@dataclass(frozen=True)
class ComfortZone:
    t_min: float = 70.0
    t_max: float = 75.0

    def __post_init__(self):
        if not self.t_min < self.t_max:
            raise InputError(f"comfort zone needs t_min < t_max, got {self.t_min}..{self.t_max}")

    def contains(self, t: float, tol: float = 0.0) -> bool:
        return self.t_min - tol <= t <= self.t_max + tol


@dataclass(frozen=True)
class LoadSpec:
    p_min: float = 0.0
    p_max: float = 20.0

    def __post_init__(self):
        if not 0.0 <= self.p_min <= self.p_max:
            raise InputError(f"load limits need 0 <= p_min <= p_max, got {self.p_min}..{self.p_max}")


@dataclass(frozen=True)
class HorizonScenario:
    t_initial: float
    t_out_series: tuple[float, ...]
    prices: PriceSeries

    def __post_init__(self):
        object.__setattr__(self, "t_out_series", tuple(float(t) for t in self.t_out_series))
        object.__setattr__(self, "prices", as_series(self.prices))
        if len(self.t_out_series) < 1:
            raise InputError("horizon must be at least one step")
        if len(self.prices) != len(self.t_out_series):
            raise InputError(
                f"prices ({len(self.prices)}) and outdoor temperatures "
                f"({len(self.t_out_series)}) must both cover the horizon"
            )

    @property
    def horizon(self) -> int:
        return len(self.t_out_series)

    @classmethod
    def constant_outdoor(
        cls, prices, t_initial: float = 75.0, t_out: float = DEFAULT_T_OUT
    ) -> "HorizonScenario":
        prices = as_series(prices)
        return cls(t_initial, (t_out,) * len(prices), prices)


@dataclass(frozen=True)
class Schedule:
    powers: tuple[float, ...]
    temps: TemperatureTrajectory
    step_costs: tuple[float, ...]
    total_cost: float
    prices: tuple[float, ...] = field(default=(), repr=False)
    mode: str = "elastic"

    @property
    def horizon(self) -> int:
        return len(self.powers)


def cost_of(powers: Sequence[float], prices: PriceSeries | Sequence[float]) -> float:
    """Cost in cents of running ``powers`` (kW) for one hour each at ``prices`` (cents/kWh)."""
    prices = prices.values if isinstance(prices, PriceSeries) else np.asarray(prices, dtype=float)
    powers = np.asarray(powers, dtype=float)
    if powers.shape != prices.shape:
        raise InputError(f"{powers.size} powers but {prices.size} prices")
    return float(np.sum(prices * powers))


def _make_schedule(powers, scenario: HorizonScenario, thermal: ThermalParams, mode: str) -> Schedule:
    powers = tuple(float(p) for p in powers)
    temps = simulate_trajectory(scenario.t_initial, powers, scenario.t_out_series, thermal)
    prices = scenario.prices.values
    step_costs = tuple(float(c) for c in prices * np.asarray(powers))
    return Schedule(
        powers=powers,
        temps=temps,
        step_costs=step_costs,
        total_cost=cost_of(powers, prices),
        prices=tuple(float(p) for p in prices),
        mode=mode,
    )


def build_elastic_lp(
    scenario: HorizonScenario,
    zone: ComfortZone,
    load: LoadSpec,
    thermal: ThermalParams,
) -> lp.LinearProgram:
    """Variables are P(0..K-1) followed by T(1..K).

    Row k encodes  eps*T(k) + (1-eps)*gamma*P(k) - T(k+1) = -(1-eps)*T_out(k),
    with the measured T(0) moved to the right-hand side of row 0.
    """
    K = scenario.horizon
    eps, gamma = thermal.epsilon, thermal.gamma
    n = 2 * K
    objective = np.zeros(n)
    objective[:K] = scenario.prices.values
    rows = []
    for k in range(K):
        a = np.zeros(n)
        a[k] = (1.0 - eps) * gamma
        a[K + k] = -1.0
        rhs = -(1.0 - eps) * scenario.t_out_series[k]
        if k == 0:
            rhs -= eps * scenario.t_initial
        else:
            a[K + k - 1] = eps
        rows.append(lp.eq(a, rhs))
    bounds = ((load.p_min, load.p_max),) * K + ((zone.t_min, zone.t_max),) * K
    return lp.LinearProgram(tuple(objective), tuple(rows), bounds)


def diagnose_infeasibility(
    scenario: HorizonScenario,
    zone: ComfortZone,
    load: LoadSpec,
    thermal: ThermalParams,
) -> tuple[int, str] | None:
    """Locate the first step whose reachable temperature band misses the zone.

    Returns ``(step, message)`` or None when the window is feasible. The
    reachable set from an interval is an interval because the dynamics are
    monotone in both the state and the power.
    """
    eps, gamma = thermal.epsilon, thermal.gamma
    lo = hi = scenario.t_initial
    for k, t_out in enumerate(scenario.t_out_series):
        coolest = eps * lo + (1 - eps) * (t_out + gamma * load.p_max)
        warmest = eps * hi + (1 - eps) * (t_out + gamma * load.p_min)
        if coolest > zone.t_max + SCHEDULE_TOL:
            return k, (
                f"step {k}: t_max={zone.t_max} unreachable; full power "
                f"({load.p_max} kW) only cools to {coolest:.3f} F"
            )
        if warmest < zone.t_min - SCHEDULE_TOL:
            return k, (
                f"step {k}: t_min={zone.t_min} violated; even minimum power "
                f"({load.p_min} kW) drops to {warmest:.3f} F"
            )
        lo, hi = max(coolest, zone.t_min), min(warmest, zone.t_max)
    return None


def solve_elastic(
    scenario: HorizonScenario,
    zone: ComfortZone = ComfortZone(),
    load: LoadSpec = LoadSpec(),
    thermal: ThermalParams = ThermalParams(),
) -> Schedule:
    program = build_elastic_lp(scenario, zone, load, thermal)
    sol = lp.solve(program)
    if sol.status is lp.Status.INFEASIBLE:
        found = diagnose_infeasibility(scenario, zone, load, thermal)
        detail = found[1] if found else "comfort zone and load limits are incompatible"
        raise InfeasibleError(
            f"no schedule satisfies comfort zone: {detail}",
            scenario=scenario,
            step=found[0] if found else None,
        )
    assert sol.status is lp.Status.OPTIMAL, "power is bounded, the LP cannot be unbounded"

    K = scenario.horizon
    powers = np.clip(sol.x[:K], load.p_min, load.p_max)
    sched = _make_schedule(powers, scenario, thermal, "elastic")
    lp_temps = sol.x[K:]
    drift = np.max(np.abs(sched.temps.as_array()[1:] - lp_temps))
    if drift > SCHEDULE_TOL:
        raise RuntimeError(f"simulated temperatures drift {drift:.3g} F from the LP solution")
    for k, t in enumerate(sched.temps.controlled, start=1):
        if not zone.contains(t, SCHEDULE_TOL):
            raise RuntimeError(f"optimized temperature {t} at step {k} leaves the comfort zone")
    return sched


def solve_inelastic(
    scenario: HorizonScenario,
    t_set: float,
    load: LoadSpec = LoadSpec(),
    thermal: ThermalParams = ThermalParams(),
) -> Schedule:
    """Hold ``t_set`` every hour.

    If the measured start differs from ``t_set`` the first step uses the
    exact power that lands on ``t_set``; afterwards the steady-state power
    holds it. The comfort zone plays no part here.
    """
    powers = []
    for k, t_out in enumerate(scenario.t_out_series):
        if k == 0 and scenario.t_initial != t_set:
            p = power_to_reach(scenario.t_initial, t_set, t_out, thermal)
        else:
            p = steady_state_power(t_set, t_out, thermal)
        if p < load.p_min - _BOUND_TOL or p > load.p_max + _BOUND_TOL:
            raise InfeasibleError(
                f"step {k}: holding {t_set} F against {t_out} F outdoors needs {p:.3f} kW, "
                f"outside load limits [{load.p_min}, {load.p_max}]",
                scenario=scenario,
                step=k,
            )
        powers.append(min(max(p, load.p_min), load.p_max) + 0.0)  # no -0.0
    return _make_schedule(powers, scenario, thermal, "inelastic")
