"""PNG figures written next to the CSV/JSON reports.

Uses the object-oriented ``Figure`` API with the Agg canvas, so nothing
touches pyplot global state and no display is needed.
"""
from __future__ import annotations

import os
import tempfile
from typing import Sequence

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

POWER_COLOR = "tab:blue"
PRICE_COLOR = "tab:red"
RT_COLOR = "tab:orange"
TEMP_COLOR = "tab:green"
ZONE_COLOR = "0.85"

_rc = {"figsize": (7.0, 5.0), "dpi": 120}


def _save(fig: Figure, path) -> None:
    FigureCanvasAgg(fig)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(suffix=".png", dir=directory)
    os.close(fd)
    try:
        fig.savefig(tmp, format="png")
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _hold_last(x, y):
    """Extend a post-step series by one point so the final hour gets its width."""
    x = np.asarray(x)
    return np.append(x, x[-1] + 1), np.append(y, y[-1])


def _power_price_axes(ax, hours, powers, p_max, prices, price_label, extra_prices=None):
    ax.step(*_hold_last(hours, powers), where="post", color=POWER_COLOR, label="power")
    ax.set_ylabel("power (kW)", color=POWER_COLOR)
    ax.set_ylim(-0.05 * p_max, 1.05 * p_max)
    ax2 = ax.twinx()
    ax2.plot(hours, prices, "o-", ms=3, color=PRICE_COLOR, label=price_label)
    if extra_prices is not None:
        label, values = extra_prices
        ax2.plot(hours, values, "s--", ms=3, color=RT_COLOR, label=label)
    ax2.set_ylabel("price (cents/kWh)", color=PRICE_COLOR)
    handles = ax.get_legend_handles_labels()
    handles2 = ax2.get_legend_handles_labels()
    ax.legend(handles[0] + handles2[0], handles[1] + handles2[1], loc="upper left", fontsize=8)
    return ax2


def _temperature_axes(ax, hours, temps, t_min, t_max, t_set=None):
    ax.axhspan(t_min, t_max, color=ZONE_COLOR, label="comfort zone")
    ax.plot(hours, temps, "o-", ms=3, color=TEMP_COLOR, label="zone temperature")
    if t_set is not None:
        ax.axhline(t_set, color="k", ls=":", lw=1, label="set point")
    ax.set_ylabel("temperature (F)")
    ax.set_xlabel("hour")
    ax.legend(loc="upper left", fontsize=8)


def plot_schedule(
    path,
    prices: Sequence[float],
    powers: Sequence[float],
    temps: Sequence[float],
    t_min: float,
    t_max: float,
    p_max: float,
    title: str = "",
    t_set: float | None = None,
    real_time: Sequence[float] | None = None,
    price_label: str = "price",
) -> None:
    """Power against price (top) and temperature against the comfort zone (bottom).

    ``temps`` has one more entry than ``powers``; entry 0 is the start state.
    """
    K = len(powers)
    fig = Figure(figsize=_rc["figsize"], dpi=_rc["dpi"])
    ax1, ax2 = fig.subplots(2, 1, sharex=True)
    extra = None if real_time is None else ("real-time price", real_time)
    _power_price_axes(ax1, np.arange(K), powers, p_max, prices, price_label, extra)
    _temperature_axes(ax2, np.arange(K + 1), temps, t_min, t_max, t_set)
    if title:
        ax1.set_title(title)
    fig.tight_layout()
    _save(fig, path)


def plot_replans(path, replans: Sequence[tuple[int, Sequence[float]]], p_max: float) -> None:
    """Overlay the planned power of consecutive re-plans on an absolute hour axis.

    ``replans`` holds ``(start_hour, planned_powers)`` pairs.
    """
    fig = Figure(figsize=_rc["figsize"], dpi=_rc["dpi"])
    ax = fig.subplots()
    n = len(replans)
    for i, (start, powers) in enumerate(replans):
        shade = 0.2 + 0.8 * i / max(n - 1, 1)
        ax.step(
            *_hold_last(start + np.arange(len(powers)), powers),
            where="post",
            color=(0.1, 0.2, shade),
            alpha=0.6,
            lw=1,
            label=f"plan @ hour {start}" if i in (0, n - 1) else None,
        )
    ax.set_ylim(-0.05 * p_max, 1.05 * p_max)
    ax.set_xlabel("hour")
    ax.set_ylabel("planned power (kW)")
    ax.set_title("Re-planned power by hour")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    _save(fig, path)
