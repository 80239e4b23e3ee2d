"""Hourly re-planning as market-clearing prices arrive.

At hour ``h`` only the real-time price of hour ``h`` is known; the rest of
the window uses day-ahead prices. Each hour the elastic problem is re-solved
from the current temperature, the first planned step is applied and the
temperature advanced with the same model.

Two window policies:

* ``"sliding"``: every window is ``horizon`` hours long (h .. h+horizon-1);
* ``"shrinking"``: windows end at the fixed hour ``horizon`` (h .. horizon-1),
  which makes the rolling plan reproduce the one-shot optimum exactly when
  forecasts are perfect.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import InfeasibleError, InputError
from .prices import PriceSeries, as_series
from .scheduler import (
    DEFAULT_HORIZON,
    ComfortZone,
    HorizonScenario,
    LoadSpec,
    Schedule,
    cost_of,
    solve_elastic,
)
from .thermal import (
    DEFAULT_T_OUT,
    TemperatureTrajectory,
    ThermalParams,
    simulate_trajectory,
    step_temperature,
)

SLIDING = "sliding"
SHRINKING = "shrinking"


@dataclass(frozen=True)
class PriceFeed:
    day_ahead: PriceSeries
    real_time: PriceSeries

    def __post_init__(self):
        object.__setattr__(self, "day_ahead", as_series(self.day_ahead, "day-ahead"))
        object.__setattr__(self, "real_time", as_series(self.real_time, "real-time"))
        if len(self.real_time) == 0 or len(self.day_ahead) == 0:
            raise InputError("price feed series must be non-empty")


@dataclass(frozen=True)
class ScenarioTemplate:
    """What stays fixed across re-plans: start temperature, window length, outdoor temperature.

    ``t_out`` is either a constant or an hourly series indexed by absolute
    simulation hour.
    """

    t_initial: float = 75.0
    horizon: int = DEFAULT_HORIZON
    t_out: Union[float, Sequence[float]] = DEFAULT_T_OUT

    def __post_init__(self):
        if self.horizon < 1:
            raise InputError(f"horizon must be at least 1, got {self.horizon}")
        if not np.isscalar(self.t_out):
            object.__setattr__(self, "t_out", tuple(float(t) for t in self.t_out))

    def outdoor(self, start: int, length: int) -> tuple[float, ...]:
        if np.isscalar(self.t_out):
            return (float(self.t_out),) * length
        end = start + length
        if end > len(self.t_out):
            raise InputError(f"outdoor temperature series covers {len(self.t_out)} hours, need {end}")
        return self.t_out[start:end]

    def scenario(self, prices, t_initial: float | None = None, start: int = 0) -> HorizonScenario:
        prices = as_series(prices)
        t0 = self.t_initial if t_initial is None else t_initial
        return HorizonScenario(t0, self.outdoor(start, len(prices)), prices)


@dataclass(frozen=True)
class RollingResult:
    applied_powers: tuple[float, ...]
    applied_temps: TemperatureTrajectory
    replans: tuple[Schedule, ...]
    projected_cost: float
    realized_cost: float
    window: str = SLIDING

    @property
    def sim_hours(self) -> int:
        return len(self.applied_powers)


@dataclass(frozen=True)
class Comparison:
    projected_cost: float
    realized_cost: float
    schedule: Schedule
    real_time_prices: tuple[float, ...]

    @property
    def difference(self) -> float:
        """realized minus projected, in cents; negative means the real market was cheaper."""
        return self.realized_cost - self.projected_cost


def window_prices(feed: PriceFeed, hour: int, length: int) -> PriceSeries:
    """Real-time price for ``hour``, day-ahead forecasts for the rest of the window."""
    if hour >= len(feed.real_time):
        raise InputError(f"real-time prices cover {len(feed.real_time)} hours; hour {hour} missing")
    end = hour + length
    if end > len(feed.day_ahead):
        raise InputError(
            f"day-ahead prices cover {len(feed.day_ahead)} hours; window at hour {hour} needs {end}"
        )
    values = feed.day_ahead.values[hour:end].copy()
    values[0] = feed.real_time[hour]
    return PriceSeries.from_values(values, f"window@{hour}")


def run_receding_horizon(
    feed: PriceFeed,
    template: ScenarioTemplate,
    zone: ComfortZone = ComfortZone(),
    load: LoadSpec = LoadSpec(),
    thermal: ThermalParams = ThermalParams(),
    sim_hours: int = DEFAULT_HORIZON,
    window: str = SLIDING,
) -> RollingResult:
    if sim_hours < 1:
        raise InputError(f"sim_hours must be positive, got {sim_hours}")
    if window not in (SLIDING, SHRINKING):
        raise InputError(f"unknown window policy {window!r}")
    K = template.horizon
    if window == SHRINKING and sim_hours > K:
        raise InputError(f"shrinking windows end at hour {K}; cannot simulate {sim_hours} hours")
    if sim_hours > len(feed.real_time):
        raise InputError(f"real-time prices cover {len(feed.real_time)} hours, need {sim_hours}")
    last_end = sim_hours - 1 + K if window == SLIDING else K
    if last_end > len(feed.day_ahead):
        raise InputError(f"day-ahead prices cover {len(feed.day_ahead)} hours, need {last_end}")

    t_now = template.t_initial
    applied, replans, first_costs = [], [], []
    for h in range(sim_hours):
        length = K if window == SLIDING else K - h
        prices = window_prices(feed, h, length)
        scenario = template.scenario(prices, t_initial=t_now, start=h)
        try:
            plan = solve_elastic(scenario, zone, load, thermal)
        except InfeasibleError as exc:
            raise InfeasibleError(f"hour {h}: {exc}", scenario=scenario, step=exc.step, hour=h) from exc
        p = plan.powers[0]
        applied.append(p)
        replans.append(plan)
        first_costs.append(plan.step_costs[0])
        t_now = step_temperature(t_now, p, scenario.t_out_series[0], thermal)

    temps = simulate_trajectory(
        template.t_initial, applied, template.outdoor(0, sim_hours), thermal
    )
    realized = cost_of(applied, feed.real_time.values[:sim_hours])
    return RollingResult(
        applied_powers=tuple(applied),
        applied_temps=temps,
        replans=tuple(replans),
        projected_cost=float(sum(first_costs)),
        realized_cost=realized,
        window=window,
    )


def compare_day_ahead_real_time(
    feed: PriceFeed,
    template: ScenarioTemplate,
    zone: ComfortZone = ComfortZone(),
    load: LoadSpec = LoadSpec(),
    thermal: ThermalParams = ThermalParams(),
) -> Comparison:
    """Plan once on day-ahead prices, then price the same plan at real-time prices."""
    K = template.horizon
    for name, series in (("day-ahead", feed.day_ahead), ("real-time", feed.real_time)):
        if len(series) < K:
            raise InputError(f"{name} prices cover {len(series)} hours, horizon needs {K}")
    plan = solve_elastic(template.scenario(feed.day_ahead.values[:K]), zone, load, thermal)
    rt = feed.real_time.values[:K]
    return Comparison(
        projected_cost=plan.total_cost,
        realized_cost=cost_of(plan.powers, rt),
        schedule=plan,
        real_time_prices=tuple(float(v) for v in rt),
    )
