# src/utils/validators.py
"""
Validation utilities for catsim.

Provides small guard helpers used before any computation starts:
- scenario configuration checks in the CLI runner
- truncation guards shared by the scenarios

Predicates (return bool):
- is_admissible_ratio(ratio)
- is_valid_dimension(value)
- is_valid_branch(value)
- fits_displacement(amplitude, dimension)

Raising checks:
- require_ratio(ratio, name)
- require_dimension(value, name)
- require_grid(cfg, prefix)
- require_displacement_fits(amplitude, dimension, label)
"""

import math
from typing import Any

from src.core.errors import ConfigError, DomainError, LeakageError
from src.core.fock import displacement_dimension


# -------------------------------------------------
# Predicates
# -------------------------------------------------
def is_admissible_ratio(ratio: Any) -> bool:
    """omega_sw / omega_b must lie strictly inside (-2, 2)."""
    return isinstance(ratio, (int, float)) and math.isfinite(ratio) and abs(ratio) < 2.0


def is_valid_dimension(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 2


def is_valid_branch(value: Any) -> bool:
    return value in ("+", "-")


def fits_displacement(amplitude: float, dimension: int) -> bool:
    return displacement_dimension(amplitude) <= dimension


# -------------------------------------------------
# Raising checks
# -------------------------------------------------
def require_ratio(ratio: Any, name: str = "omega_sw_ratio") -> float:
    if not is_admissible_ratio(ratio):
        raise DomainError(f"{name} = {ratio!r} must satisfy |{name}| < 2")
    return float(ratio)


def require_dimension(value: Any, name: str) -> int:
    if not is_valid_dimension(value):
        raise ConfigError(f"{name} must be an integer >= 2, got {value!r}")
    return value


def require_grid(cfg: dict, prefix: str) -> None:
    """Check `<prefix>_min < <prefix>_max` and `<prefix>_points >= 2`."""
    lo, hi, points = cfg[f"{prefix}_min"], cfg[f"{prefix}_max"], cfg[f"{prefix}_points"]
    if not lo < hi:
        raise ConfigError(f"{prefix}_min ({lo}) must be below {prefix}_max ({hi})")
    if not isinstance(points, int) or points < 2:
        raise ConfigError(f"{prefix}_points must be an integer >= 2, got {points!r}")


def require_displacement_fits(amplitude: float, dimension: int, label: str) -> None:
    need = displacement_dimension(amplitude)
    if need > dimension:
        raise LeakageError(label, amplitude, dimension, f"guard |x|^2 + 6|x| + 10 needs dimension >= {need}")
