"""Hourly price series: canonical CSV I/O, slicing, and synthetic fixtures.

Internally every price is in cents/kWh. The canonical CSV is UTF-8 with the
header ``hour,price`` and one row per hour starting at hour 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, PriceParseError

CENTS_PER_KWH = "cents_per_kwh"
DOLLARS_PER_MWH = "dollars_per_mwh"
UNITS = (CENTS_PER_KWH, DOLLARS_PER_MWH)

# 1 $/MWh = 100 cents / 1000 kWh, i.e. divide by 10
_DIVISOR = {CENTS_PER_KWH: 1.0, DOLLARS_PER_MWH: 10.0}

PEAK_HOUR = 17


@dataclass(frozen=True)
class PricePoint:
    hour_index: int
    price: float

    def __post_init__(self):
        if self.hour_index < 0:
            raise InputError(f"negative hour index {self.hour_index}")
        if not math.isfinite(self.price) or self.price < 0:
            raise InputError(f"price must be finite and non-negative, got {self.price}")


@dataclass(frozen=True)
class PriceSeries:
    points: tuple[PricePoint, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        for k, pt in enumerate(self.points):
            if pt.hour_index != k:
                raise InputError(f"hour indices must run 0..n-1; position {k} holds hour {pt.hour_index}")

    @classmethod
    def from_values(cls, values: Iterable[float], label: str = "") -> "PriceSeries":
        return cls(tuple(PricePoint(k, float(v)) for k, v in enumerate(values)), label)

    @property
    def values(self) -> np.ndarray:
        return np.array([pt.price for pt in self.points], dtype=float)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, k) -> float:
        return self.points[k].price

    def scaled(self, factor: float, label: str | None = None) -> "PriceSeries":
        return PriceSeries.from_values(self.values * factor, self.label if label is None else label)

    def to_csv(self) -> str:
        lines = ["hour,price"]
        lines += [f"{pt.hour_index},{pt.price!r}" for pt in self.points]
        return "\n".join(lines) + "\n"


def parse_price_csv(text: str, unit: str = CENTS_PER_KWH, label: str = "") -> PriceSeries:
    if unit not in _DIVISOR:
        raise InputError(f"unknown price unit {unit!r}; expected one of {UNITS}")
    divisor = _DIVISOR[unit]
    if text.startswith("\ufeff"):
        text = text[1:]
    lines = text.replace("\r\n", "\n").split("\n")
    if not lines or lines[0].strip().lower() != "hour,price":
        got = lines[0].strip() if lines else ""
        raise PriceParseError(f"expected header 'hour,price', got {got!r}", line=1)

    by_hour: dict[int, float] = {}
    line_of: dict[int, int] = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != 2:
            raise PriceParseError(f"expected 2 fields, got {len(fields)}", line=lineno)
        try:
            hour = int(fields[0])
        except ValueError:
            raise PriceParseError(f"non-integer hour {fields[0]!r}", line=lineno) from None
        try:
            price = float(fields[1])
        except ValueError:
            raise PriceParseError(f"non-numeric price {fields[1]!r}", line=lineno) from None
        if not math.isfinite(price):
            raise PriceParseError(f"non-finite price {fields[1]!r}", line=lineno)
        if price < 0:
            raise PriceParseError(f"negative price {price}", line=lineno)
        if hour < 0:
            raise PriceParseError(f"negative hour {hour}", line=lineno)
        if hour in by_hour:
            raise PriceParseError(f"duplicate hour {hour}", line=lineno)
        by_hour[hour] = price / divisor
        line_of[hour] = lineno

    if not by_hour:
        raise PriceParseError("no price rows", line=len(lines))
    for k in range(max(by_hour) + 1):
        if k not in by_hour:
            after = min(h for h in by_hour if h > k)
            raise PriceParseError(f"gap at hour {k}", line=line_of[after])
    return PriceSeries.from_values([by_hour[k] for k in range(len(by_hour))], label)


def read_price_csv(path, unit: str = CENTS_PER_KWH, label: str = "") -> PriceSeries:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_price_csv(fh.read(), unit, label)


def synthesize_prices(
    seed: int,
    hours: int,
    base: float,
    amplitude: float,
    noise: float,
    label: str = "synthetic",
) -> PriceSeries:
    """Diurnal cosine peaking at hour 17 plus seeded uniform noise in [-noise, noise]."""
    if hours < 1:
        raise InputError(f"hours must be positive, got {hours}")
    if amplitude < 0 or noise < 0:
        raise InputError("amplitude and noise must be non-negative")
    if base < amplitude + noise:
        raise InputError(
            f"base ({base}) must be at least amplitude + noise ({amplitude + noise}) to keep prices non-negative"
        )
    rng = np.random.default_rng(seed)
    h = np.arange(hours)
    diurnal = amplitude * np.cos(2.0 * np.pi * (h - PEAK_HOUR) / 24.0)
    values = base + diurnal + noise * rng.uniform(-1.0, 1.0, size=hours)
    # float rounding can dip a hair below zero when base == amplitude + noise
    return PriceSeries.from_values(np.maximum(values, 0.0), label)


def validate_window(series: PriceSeries, start_hour: int, length: int) -> PriceSeries:
    if length < 1:
        raise InputError(f"window length must be positive, got {length}")
    if start_hour < 0:
        raise InputError(f"negative start hour {start_hour}")
    end = start_hour + length
    if end > len(series):
        missing_from = max(start_hour, len(series))
        raise InputError(
            f"series '{series.label}' covers hours 0..{len(series) - 1}; "
            f"missing hours {missing_from}..{end - 1}"
        )
    return PriceSeries.from_values(series.values[start_hour:end], series.label)


def as_series(prices: PriceSeries | Sequence[float], label: str = "") -> PriceSeries:
    if isinstance(prices, PriceSeries):
        return prices
    return PriceSeries.from_values(prices, label)
