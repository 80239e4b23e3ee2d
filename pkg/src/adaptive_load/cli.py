"""Command-line front end.

    adaptive-load synth    --seed 1 --hours 48 --out-file prices.csv
    adaptive-load optimize --enable --prices prices.csv --out run/
    adaptive-load roll     --enable --prices da.csv --rt-prices rt.csv --sim-hours 24 --out run/
    adaptive-load compare  --enable --prices da.csv --rt-prices rt.csv --out run/

Exit codes: 0 success, 1 usage/parse/config error, 2 infeasible.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from .errors import InfeasibleError, InputError
from .levels import quantize
from .prices import CENTS_PER_KWH, UNITS, read_price_csv, synthesize_prices, validate_window
from .rolling import (
    SHRINKING,
    SLIDING,
    PriceFeed,
    ScenarioTemplate,
    compare_day_ahead_real_time,
    run_receding_horizon,
)
from .scheduler import ComfortZone, LoadSpec, solve_elastic, solve_inelastic
from .thermal import DEFAULT_EPSILON, DEFAULT_GAMMA, DEFAULT_T_OUT, ThermalParams

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2
TRAJECTORY_HEADER = ("hour", "price_cents_kwh", "power_kw", "level", "temp_f")

DEFAULT_NOTICE = (
    "Adaptive load management is not enabled: the AC stays under its default "
    "thermostat operation. Pass --enable to run the optimizer."
)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for infeasible here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    thermal: ThermalParams
    zone: ComfortZone
    load: LoadSpec
    horizon: int
    t_initial: float
    t_out: Union[float, tuple[float, ...]]
    prices_path: Optional[Path]
    price_unit: str
    rt_prices_path: Optional[Path]
    out_dir: Path
    enabled: bool
    plots: bool = True

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        return cls(
            thermal=ThermalParams(args.epsilon, args.gamma),
            zone=ComfortZone(args.t_min, args.t_max),
            load=LoadSpec(0.0, args.p_max),
            horizon=args.horizon,
            t_initial=args.t_initial,
            t_out=_parse_t_out(args.t_out),
            prices_path=Path(args.prices) if args.prices else None,
            price_unit=args.price_unit,
            rt_prices_path=Path(getattr(args, "rt_prices", None)) if getattr(args, "rt_prices", None) else None,
            out_dir=Path(args.out),
            enabled=args.enable,
            plots=not args.no_plots,
        )

    def template(self) -> ScenarioTemplate:
        return ScenarioTemplate(self.t_initial, self.horizon, self.t_out)

    def parameters(self) -> dict:
        return {
            "epsilon": self.thermal.epsilon,
            "gamma": self.thermal.gamma,
            "t_min": self.zone.t_min,
            "t_max": self.zone.t_max,
            "p_min": self.load.p_min,
            "p_max": self.load.p_max,
            "horizon": self.horizon,
            "t_initial": self.t_initial,
            "t_out": self.t_out if isinstance(self.t_out, float) else list(self.t_out),
            "price_unit": self.price_unit,
        }


def _parse_t_out(value: str) -> Union[float, tuple[float, ...]]:
    """A number, or a CSV path with header ``hour,temp_f``."""
    try:
        return float(value)
    except ValueError:
        pass
    path = Path(value)
    if not path.is_file():
        raise InputError(f"--t-out: {value!r} is neither a number nor an existing file")
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["hour", "temp_f"]:
        raise InputError(f"{path}: expected header 'hour,temp_f'")
    temps = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            hour, temp = int(row[0]), float(row[1])
        except (ValueError, IndexError):
            raise InputError(f"{path}: line {lineno}: bad row {row!r}") from None
        if hour != len(temps):
            raise InputError(f"{path}: line {lineno}: expected hour {len(temps)}, got {hour}")
        temps.append(temp)
    if not temps:
        raise InputError(f"{path}: no rows")
    return tuple(temps)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dollars(cents: float) -> float:
    return round(cents / 100.0, 1)


def trajectory_rows(hours, prices, powers, temps_after, p_max) -> list[dict]:
    """One row per hour; ``temp_f`` is the temperature at the end of that hour."""
    return [
        {
            "hour": int(h),
            "price_cents_kwh": float(c),
            "power_kw": float(p),
            "level": quantize(p, p_max).level,
            "temp_f": float(t),
        }
        for h, c, p, t in zip(hours, prices, powers, temps_after)
    ]


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=TRAJECTORY_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def _write_report(out_dir: Path, report: dict, rows: Sequence[dict]) -> None:
    _atomic_write(out_dir / "trajectory.csv", rows_to_csv(rows))
    _atomic_write(out_dir / "report.json", json.dumps(report, indent=2) + "\n")


def _load_prices(path: Optional[Path], unit: str, label: str, flag: str):
    if path is None:
        raise InputError(f"{flag} is required")
    if not path.is_file():
        raise InputError(f"{flag}: no such file {str(path)!r}")
    return read_price_csv(path, unit, label)


def _base_report(mode: str, config: RunConfig) -> dict:
    return {"schema_version": SCHEMA_VERSION, "mode": mode, "parameters": config.parameters()}


def cmd_optimize(config: RunConfig, mode: str = "elastic", t_set: Optional[float] = None) -> dict:
    prices = _load_prices(config.prices_path, config.price_unit, "day-ahead", "--prices")
    prices = validate_window(prices, 0, config.horizon)
    scenario = config.template().scenario(prices)
    if mode == "inelastic":
        if t_set is None:
            raise InputError("--mode inelastic requires --t-set")
        schedule = solve_inelastic(scenario, t_set, config.load, config.thermal)
    else:
        schedule = solve_elastic(scenario, config.zone, config.load, config.thermal)

    rows = trajectory_rows(
        range(schedule.horizon), schedule.prices, schedule.powers,
        schedule.temps.controlled, config.load.p_max,
    )
    report = _base_report(mode, config)
    if t_set is not None:
        report["t_set"] = t_set
    report.update(
        total_cost_cents=schedule.total_cost,
        total_cost_dollars=_dollars(schedule.total_cost),
        t_initial=schedule.temps[0],
        rows=rows,
    )
    if config.plots:
        from .plotting import plot_schedule

        plot_schedule(
            config.out_dir / "schedule.png", schedule.prices, schedule.powers,
            schedule.temps.temps, config.zone.t_min, config.zone.t_max, config.load.p_max,
            title=f"{mode} schedule, cost ${_dollars(schedule.total_cost)}",
            t_set=t_set, price_label="predicted price",
        )
        report["figures"] = ["schedule.png"]
    _write_report(config.out_dir, report, rows)
    return report


def cmd_roll(config: RunConfig, sim_hours: int, window: str = SLIDING) -> dict:
    day_ahead = _load_prices(config.prices_path, config.price_unit, "day-ahead", "--prices")
    real_time = _load_prices(config.rt_prices_path, config.price_unit, "real-time", "--rt-prices")
    result = run_receding_horizon(
        PriceFeed(day_ahead, real_time), config.template(),
        config.zone, config.load, config.thermal, sim_hours, window,
    )
    rt = real_time.values[:sim_hours]
    rows = trajectory_rows(
        range(sim_hours), rt, result.applied_powers,
        result.applied_temps.controlled, config.load.p_max,
    )
    replan_dir = config.out_dir / "replans"
    replan_files = []
    for h, plan in enumerate(result.replans):
        name = f"replans/replan_{h:03d}.csv"
        plan_rows = trajectory_rows(
            range(h, h + plan.horizon), plan.prices, plan.powers,
            plan.temps.controlled, config.load.p_max,
        )
        _atomic_write(replan_dir / f"replan_{h:03d}.csv", rows_to_csv(plan_rows))
        replan_files.append(name)

    report = _base_report("roll", config)
    report.update(
        window=window,
        sim_hours=sim_hours,
        total_cost_cents=result.realized_cost,
        total_cost_dollars=_dollars(result.realized_cost),
        projected_cost_cents=result.projected_cost,
        projected_cost_dollars=_dollars(result.projected_cost),
        realized_cost_cents=result.realized_cost,
        realized_cost_dollars=_dollars(result.realized_cost),
        t_initial=result.applied_temps[0],
        replan_files=replan_files,
        rows=rows,
    )
    if config.plots:
        from .plotting import plot_replans, plot_schedule

        plot_schedule(
            config.out_dir / "schedule.png", rt, result.applied_powers,
            result.applied_temps.temps, config.zone.t_min, config.zone.t_max,
            config.load.p_max, title=f"Applied power, realized cost ${_dollars(result.realized_cost)}",
            price_label="real-time price",
        )
        plot_replans(
            config.out_dir / "replans.png",
            [(h, plan.powers) for h, plan in enumerate(result.replans)],
            config.load.p_max,
        )
        report["figures"] = ["schedule.png", "replans.png"]
    _write_report(config.out_dir, report, rows)
    return report


def cmd_compare(config: RunConfig) -> dict:
    day_ahead = _load_prices(config.prices_path, config.price_unit, "day-ahead", "--prices")
    real_time = _load_prices(config.rt_prices_path, config.price_unit, "real-time", "--rt-prices")
    cmp = compare_day_ahead_real_time(
        PriceFeed(day_ahead, real_time), config.template(), config.zone, config.load, config.thermal
    )
    plan = cmp.schedule
    rows = trajectory_rows(
        range(plan.horizon), plan.prices, plan.powers, plan.temps.controlled, config.load.p_max
    )
    report = _base_report("compare", config)
    report.update(
        total_cost_cents=cmp.projected_cost,
        total_cost_dollars=_dollars(cmp.projected_cost),
        projected_cost_cents=cmp.projected_cost,
        projected_cost_dollars=_dollars(cmp.projected_cost),
        realized_cost_cents=cmp.realized_cost,
        realized_cost_dollars=_dollars(cmp.realized_cost),
        difference_cents=cmp.difference,
        difference_dollars=_dollars(cmp.difference),
        real_time_prices=list(cmp.real_time_prices),
        rows=rows,
    )
    if config.plots:
        from .plotting import plot_schedule

        plot_schedule(
            config.out_dir / "schedule.png", plan.prices, plan.powers, plan.temps.temps,
            config.zone.t_min, config.zone.t_max, config.load.p_max,
            title=f"Projected ${_dollars(cmp.projected_cost)} vs realized ${_dollars(cmp.realized_cost)}",
            real_time=cmp.real_time_prices, price_label="day-ahead price",
        )
        report["figures"] = ["schedule.png"]
    _write_report(config.out_dir, report, rows)
    return report


def cmd_synth(seed: int, hours: int, base: float, amplitude: float, noise: float, out_path) -> Path:
    series = synthesize_prices(seed, hours, base, amplitude, noise)
    out_path = Path(out_path)
    _atomic_write(out_path, series.to_csv())
    return out_path


def _add_run_flags(p: argparse.ArgumentParser, rt: bool) -> None:
    p.add_argument("--enable", action="store_true", help="activate optimized control")
    p.add_argument("--horizon", type=int, default=24)
    p.add_argument("--t-initial", type=float, default=75.0, help="measured zone temperature (F)")
    p.add_argument("--t-out", default=str(DEFAULT_T_OUT), help="outdoor temperature: number or CSV (hour,temp_f)")
    p.add_argument("--t-min", type=float, default=70.0)
    p.add_argument("--t-max", type=float, default=75.0)
    p.add_argument("--p-max", type=float, default=20.0)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    p.add_argument("--prices", help="price CSV (day-ahead / predicted)")
    p.add_argument("--price-unit", choices=UNITS, default=CENTS_PER_KWH)
    if rt:
        p.add_argument("--rt-prices", help="real-time price CSV")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--no-plots", action="store_true", help="skip PNG figures")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="adaptive-load", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("optimize", help="schedule one look-ahead window")
    _add_run_flags(p, rt=False)
    p.add_argument("--mode", choices=("elastic", "inelastic"), default="elastic")
    p.add_argument("--t-set", type=float, help="set point for --mode inelastic")

    p = sub.add_parser("roll", help="hourly receding-horizon simulation")
    _add_run_flags(p, rt=True)
    p.add_argument("--sim-hours", type=int, default=24)
    p.add_argument("--window", choices=(SLIDING, SHRINKING), default=SLIDING)

    p = sub.add_parser("compare", help="day-ahead plan priced at real-time prices")
    _add_run_flags(p, rt=True)

    p = sub.add_parser("synth", help="write a synthetic price CSV")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--hours", type=int, default=48)
    p.add_argument("--base", type=float, default=10.0)
    p.add_argument("--amplitude", type=float, default=5.0)
    p.add_argument("--noise", type=float, default=1.0)
    p.add_argument("--out-file", "--out", dest="out_file", required=True)
    return parser


def _summary(report: dict) -> str:
    if report["mode"] in ("roll", "compare"):
        return (
            f"{report['mode']}: projected ${report['projected_cost_dollars']}, "
            f"realized ${report['realized_cost_dollars']}"
        )
    return f"{report['mode']}: total cost ${report['total_cost_dollars']}"


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "synth":
            path = cmd_synth(args.seed, args.hours, args.base, args.amplitude, args.noise, args.out_file)
            print(f"wrote {path}")
            return EXIT_OK
        if not args.enable:
            print(DEFAULT_NOTICE)
            return EXIT_OK
        config = RunConfig.from_args(args)
        if args.command == "optimize":
            report = cmd_optimize(config, args.mode, args.t_set)
        elif args.command == "roll":
            report = cmd_roll(config, args.sim_hours, args.window)
        else:
            report = cmd_compare(config)
        print(_summary(report))
        log.info("outputs written to %s", config.out_dir)
        return EXIT_OK
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
