"""Twenty-step output encoding of the optimized power.

Level 0 is off and level 20 is full capacity, so 21 states drive a 20 LED
bar graph. Quantization is uniform with ties rounded half-up.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError

N_LEVELS = 20


@dataclass(frozen=True, order=True)
class PowerLevel:
    level: int

    def __post_init__(self):
        if not isinstance(self.level, int) or not 0 <= self.level <= N_LEVELS:
            raise InputError(f"level must be an integer in 0..{N_LEVELS}, got {self.level!r}")

    def __int__(self):
        return self.level

    def leds(self) -> str:
        """Bar-graph rendering, e.g. ``'#######.............'`` for level 7."""
        return "#" * self.level + "." * (N_LEVELS - self.level)


def quantize(p: float, p_max: float) -> PowerLevel:
    if not p_max > 0:
        raise InputError(f"p_max must be positive, got {p_max}")
    if not 0.0 <= p <= p_max:
        raise InputError(f"power {p} outside [0, {p_max}]")
    return PowerLevel(int(math.floor(N_LEVELS * p / p_max + 0.5)))


def dequantize(level: PowerLevel | int, p_max: float) -> float:
    if not isinstance(level, PowerLevel):
        level = PowerLevel(level)
    return level.level * p_max / N_LEVELS
