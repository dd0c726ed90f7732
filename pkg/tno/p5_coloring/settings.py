import os
from typing import Callable, Optional, TypeVar

from dotenv import load_dotenv

from tno.p5_coloring.exceptions import InputError

load_dotenv(verbose=True)

# palettes are machine-word masks
MAX_SUPPORTED_UNIVERSE = 64

Number = TypeVar("Number", int, float)


def _env_number(name: str, default: str, convert: Callable[[str], Number]) -> Number:
    value = os.getenv(name, default)
    try:
        return convert(value)
    except ValueError:
        raise InputError(f"Environment variable {name} must be a number, got {value!r}")


class EnvSettings:
    @staticmethod
    def env() -> str:
        return os.getenv("P5COLOR_ENV", "dev")

    @staticmethod
    def log_level() -> str:
        return os.getenv("P5COLOR_LOG_LEVEL", "WARNING").upper()

    @staticmethod
    def log_file() -> Optional[str]:
        return os.getenv("P5COLOR_LOG_FILE", None)

    # Generator config
    @staticmethod
    def default_seed() -> int:
        seed = _env_number("P5COLOR_SEED", "0", int)
        if seed < 0:
            raise InputError(f"Environment variable P5COLOR_SEED must be non-negative, got {seed}")
        return seed

    # Solver config
    @staticmethod
    def max_universe() -> int:
        return min(_env_number("P5COLOR_MAX_UNIVERSE", str(MAX_SUPPORTED_UNIVERSE), int), MAX_SUPPORTED_UNIVERSE)

    @staticmethod
    def workers() -> int:
        return _env_number("P5COLOR_WORKERS", "4", int)

    @staticmethod
    def default_timeout() -> Optional[float]:
        """Wall-clock budget in seconds for a single solve, unset means unbounded"""
        timeout = os.getenv("P5COLOR_DEFAULT_TIMEOUT", "")
        return _env_number("P5COLOR_DEFAULT_TIMEOUT", timeout, float) if timeout else None
