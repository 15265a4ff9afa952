"""
Runtime configuration for latgap.

Values come from explicit arguments first, then from the environment
(a .env file is honoured through python-dotenv), then from the defaults
in types.py.
"""

import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv

from .types import (
    DEFAULT_BOUND_DIGITS,
    DEFAULT_LOG_LEVEL,
    DEFAULT_MAX_COSETS,
    DEFAULT_MAX_GRID_POINTS,
    DEFAULT_ORACLE_LIMIT,
    DEFAULT_ORACLE_POINTS,
)
from .utils import ValidationError

logger = logging.getLogger(__name__)

ENV_PREFIX = "LATGAP_"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    """Resource guards and presentation settings."""
    max_cosets: int = DEFAULT_MAX_COSETS
    oracle_limit: int = DEFAULT_ORACLE_LIMIT
    oracle_points: int = DEFAULT_ORACLE_POINTS
    max_grid_points: int = DEFAULT_MAX_GRID_POINTS
    bound_digits: int = DEFAULT_BOUND_DIGITS
    log_level: str = DEFAULT_LOG_LEVEL
    jobs: int = 1


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"{ENV_PREFIX}{name} must be an integer, got {raw!r}")
    if value <= 0:
        raise ValidationError(f"{ENV_PREFIX}{name} must be positive, got {value}")
    return value


def load_settings(dotenv_path: Optional[str] = None) -> Settings:
    """
    Build settings from the environment.

    Args:
        dotenv_path: Optional path of a .env file

    Returns:
        Settings instance
    """
    load_dotenv(dotenv_path=dotenv_path, override=False)
    log_level = os.environ.get(ENV_PREFIX + "LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
    if log_level not in LOG_LEVELS:
        raise ValidationError(f"{ENV_PREFIX}LOG_LEVEL must be one of {LOG_LEVELS}, got {log_level!r}")
    settings = Settings(
        max_cosets=_env_int("MAX_COSETS", DEFAULT_MAX_COSETS),
        oracle_limit=_env_int("ORACLE_LIMIT", DEFAULT_ORACLE_LIMIT),
        oracle_points=_env_int("ORACLE_POINTS", DEFAULT_ORACLE_POINTS),
        max_grid_points=_env_int("MAX_GRID_POINTS", DEFAULT_MAX_GRID_POINTS),
        bound_digits=_env_int("BOUND_DIGITS", DEFAULT_BOUND_DIGITS),
        log_level=log_level,
        jobs=_env_int("JOBS", 1),
    )
    logger.debug(f"Loaded settings: {settings}")
    return settings


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Settings of this process, read from the environment on first use."""
    return load_settings()


def reset_settings() -> None:
    """Forget the cached settings; the next lookup reads the environment again."""
    get_settings.cache_clear()


def resolve(value: Optional[int], attribute: str) -> int:
    """Explicit value if given, otherwise the configured one."""
    if value is not None:
        return value
    return getattr(get_settings(), attribute)
