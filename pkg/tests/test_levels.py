import pytest
from hypothesis import given, strategies as st

from adaptive_load.errors import InputError
from adaptive_load.levels import PowerLevel, dequantize, quantize


@pytest.mark.parametrize(
    "p,p_max,level",
    [(0.0, 20.0, 0), (20.0, 20.0, 20), (10.0, 20.0, 10), (0.5, 20.0, 1), (1.5, 20.0, 2), (0.49, 20.0, 0)],
)
def test_quantize(p, p_max, level):
    assert quantize(p, p_max).level == level


@pytest.mark.parametrize("level,kw", [(0, 0.0), (20, 20.0), (7, 7.0)])
def test_dequantize(level, kw):
    assert dequantize(PowerLevel(level), 20.0) == kw


@pytest.mark.parametrize("p,p_max", [(-0.1, 20.0), (20.01, 20.0), (1.0, 0.0)])
def test_out_of_range(p, p_max):
    with pytest.raises(InputError):
        quantize(p, p_max)


@pytest.mark.parametrize("level", [-1, 21, 3.5])
def test_invalid_level(level):
    with pytest.raises(InputError):
        PowerLevel(level)


def test_led_bar():
    assert PowerLevel(3).leds() == "###" + "." * 17


p_maxes = st.floats(0.5, 100.0)


@given(p_maxes, st.floats(0, 1))
def test_round_trip_error(p_max, frac):
    p = frac * p_max
    assert abs(dequantize(quantize(p, p_max), p_max) - p) <= p_max / 40 * (1 + 1e-12)


@given(p_maxes, st.floats(0, 1), st.floats(0, 1))
def test_monotone(p_max, a, b):
    lo, hi = sorted((a * p_max, b * p_max))
    assert quantize(lo, p_max) <= quantize(hi, p_max)


@given(p_maxes, st.integers(0, 20))
def test_idempotent(p_max, level):
    assert quantize(dequantize(level, p_max), p_max).level == level
