# utils/normalize.py
import math

from errors import ParameterError, RangeError

# --- Configurable limits ---
MAX_BRACKET_STEPS = 200
RANK_TOL = 1e-9


# --- Range checks ---

def check_open_unit(name: str, value: float, upper: float = 1.0) -> float:
    """Require 0 < value < upper."""
    value = float(value)
    if not (0.0 < value < upper) or math.isnan(value):
        raise ParameterError(f"{name} must lie in (0, {upper}), got {value}")
    return value


def check_rate(rate: float) -> float:
    """Sampling rates live in (0, 1]."""
    rate = float(rate)
    if not (0.0 < rate <= 1.0):
        raise ParameterError(f"rate must lie in (0, 1], got {rate}")
    return rate


def check_positive_int(name: str, value: int) -> int:
    if int(value) != value or value < 1:
        raise ParameterError(f"{name} must be a positive integer, got {value}")
    return int(value)


def check_item(item: int, universe: int) -> int:
    """Items are 1-based ids in [1, universe]."""
    if not (1 <= item <= universe):
        raise RangeError(f"item {item} outside universe [1, {universe}]")
    return int(item)


def is_power_of_two(value: int) -> bool:
    return value >= 1 and (value & (value - 1)) == 0


# --- Derived quantities ---

def log2n(n: int) -> float:
    """log2 of the universe, floored at 1 so formulas never divide by zero."""
    return max(1.0, math.log2(max(n, 2)))


def ceil_log2(n: int) -> int:
    return max(1, math.ceil(math.log2(max(n, 2))))
