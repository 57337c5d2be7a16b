"""
Module: utils
Purpose: Shared helper utilities for Dissiwire.
"""

import math
import os
import re

from .exceptions import ConfigError

DEFAULT_PHYSICALITY_TOL = 1e-9
DEFAULT_ZERO_TOL = 1e-8
MAX_TOLERANCE = 1e-3  # upper bound for any tolerance override
TOL_ENV = "DISSIWIRE_TOL"
ZERO_TOL_ENV = "DISSIWIRE_ZERO_TOL"
OUTPUT_DIR_ENV = "DISSIWIRE_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "artifacts"

_PHYSICALITY_TOL = DEFAULT_PHYSICALITY_TOL
_ZERO_TOL = DEFAULT_ZERO_TOL
_OUTPUT_DIR: str | None = None

_ANGLE_PATTERN = re.compile(
    r"^\s*(?P<sign>[+-]?)\s*(?P<coef>\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(?P<den>\d*\.?\d+))?\s*$",
    re.IGNORECASE,
)


def _validate_tolerance(value: float, name: str) -> float:
    if not math.isfinite(value) or value <= 0 or value > MAX_TOLERANCE:
        raise ConfigError(f"{name} must be a positive number not larger than {MAX_TOLERANCE}.")
    return value


def _tolerance_from_env(env_name: str, default: float) -> tuple[float, bool]:
    env_value = os.getenv(env_name)
    if not env_value:
        return default, False
    try:
        return _validate_tolerance(float(env_value), env_name), True
    except (ValueError, ConfigError):
        log_warning(
            f"Ignoring invalid {env_name} value '{env_value}'. "
            f"Expected a positive float not larger than {MAX_TOLERANCE}."
        )
        return default, False


def configure_tolerances(
    cli_tol: float | None = None,
    cli_zero_tol: float | None = None,
) -> tuple[float, float, str]:
    """
    Determine the physicality and zero-mode tolerances.
    Preference order: CLI override > environment variable > default.
    Returns tuple of (physicality_tol, zero_tol, source).
    """
    global _PHYSICALITY_TOL, _ZERO_TOL
    source = "default"

    if cli_tol is not None:
        tol = _validate_tolerance(cli_tol, "--tol")
        source = "cli"
    else:
        tol, from_env = _tolerance_from_env(TOL_ENV, DEFAULT_PHYSICALITY_TOL)
        if from_env:
            source = "env"

    if cli_zero_tol is not None:
        ztol = _validate_tolerance(cli_zero_tol, "--zero-tol")
        source = "cli"
    else:
        ztol, from_env = _tolerance_from_env(ZERO_TOL_ENV, DEFAULT_ZERO_TOL)
        if from_env and source == "default":
            source = "env"

    _PHYSICALITY_TOL = tol
    _ZERO_TOL = ztol
    log_info(f"Tolerances selected: physicality={tol!r} zero={ztol!r} (source={source})")
    return tol, ztol, source


def physicality_tol() -> float:
    return _PHYSICALITY_TOL


def zero_tol() -> float:
    return _ZERO_TOL


def configure_output_dir(cli_override: str | None = None) -> tuple[str, str]:
    """
    Determine the directory that receives CSV/JSON outputs.
    Preference order: CLI override > environment variable > default.
    Returns tuple of (absolute path, source).
    """
    global _OUTPUT_DIR
    if cli_override:
        path, source = cli_override, "cli"
    else:
        env_value = os.getenv(OUTPUT_DIR_ENV)
        if env_value and env_value.strip():
            path, source = env_value.strip(), "env"
        else:
            path, source = DEFAULT_OUTPUT_DIR, "default"
    _OUTPUT_DIR = os.path.abspath(path)
    return _OUTPUT_DIR, source


def output_dir() -> str:
    if _OUTPUT_DIR is None:
        configure_output_dir(None)
    return _OUTPUT_DIR or os.path.abspath(DEFAULT_OUTPUT_DIR)


def parse_angle(text: str | float) -> float:
    """
    Parse an angle given in radians.

    Accepts plain floats and `pi` literals such as `pi/4`, `3*pi/8`, `-pi/2`
    or `0.5pi`.

    Args:
        text: Angle literal or number.

    Returns:
        Angle in radians.

    Raises:
        ConfigError: If the literal cannot be parsed.
    """
    if isinstance(text, (int, float)):
        value = float(text)
    else:
        match = _ANGLE_PATTERN.match(text)
        if match:
            coef_text = match.group("coef")
            coef = float(coef_text) if coef_text not in ("", ".") else 1.0
            den = float(match.group("den")) if match.group("den") else 1.0
            if den == 0:
                raise ConfigError(f"Invalid angle '{text}': zero denominator.")
            value = coef * math.pi / den
            if match.group("sign") == "-":
                value = -value
        else:
            try:
                value = float(text)
            except ValueError as exc:
                raise ConfigError(
                    f"Invalid angle '{text}'. Use radians, e.g. 1.178, pi/4 or 3*pi/8."
                ) from exc
    if not math.isfinite(value):
        raise ConfigError(f"Invalid angle '{text}': not finite.")
    return value


def format_number(value: float) -> str:
    """Shortest round-trip decimal representation of a float."""
    return repr(float(value))


COLOR_RESET = "\033[0m"
BOLD = "\033[1m"


def color_256(code: int) -> str:
    return f"\033[38;5;{code}m"


def log_error(message: str):
    """
    Log an error message.

    Args:
        message: Error message to log.

    Returns:
        None
    """
    from . import reporting  # Local import to avoid circular dependency rules

    reporting.write_log([f"[ERROR] {message}"])


def log_warning(message: str):
    """
    Log a warning message.

    Args:
        message: Warning message to log.

    Returns:
        None
    """
    from . import reporting  # Local import to avoid circular dependency rules

    reporting.write_log([f"[WARNING] {message}"])


def log_info(message: str):
    """
    Log an informational message.
    """
    from . import reporting  # Local import to avoid circular dependency rules

    reporting.write_log([f"[INFO] {message}"])
