"""Price-responsive predictive scheduling of an air-conditioning load."""
from importlib import resources
from pathlib import Path

from .errors import InfeasibleError, InputError, PriceParseError
from .levels import PowerLevel, dequantize, quantize
from .lp import LinearProgram, LpSolution, Relation, Status, solve
from .prices import PricePoint, PriceSeries, parse_price_csv, read_price_csv, synthesize_prices, validate_window
from .rolling import (
    Comparison,
    PriceFeed,
    RollingResult,
    ScenarioTemplate,
    compare_day_ahead_real_time,
    run_receding_horizon,
)
from .scheduler import (
    ComfortZone,
    HorizonScenario,
    LoadSpec,
    Schedule,
    build_elastic_lp,
    cost_of,
    solve_elastic,
    solve_inelastic,
)
from .thermal import (
    ContinuousOdeParams,
    TemperatureTrajectory,
    ThermalParams,
    continuous_rate,
    simulate_trajectory,
    step_temperature,
    steady_state_power,
)

__version__ = "0.1.0"


def bundled_path(name: str) -> Path:
    """Path of a CSV shipped in ``adaptive_load/data``."""
    return Path(str(resources.files(__name__) / "data" / name))
