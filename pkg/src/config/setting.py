"""
Environment-driven engine settings.
"""

from dataclasses import dataclass
import logging
import os
from dotenv import load_dotenv

# Load .env file
load_dotenv()

_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class EngineSettings:
    threads: int
    log_level: str

    @classmethod
    def from_env(cls) -> "EngineSettings":
        return cls(
            threads=_positive_int("ARQ_THREADS", 1),
            log_level=_log_level("ARQ_LOG_LEVEL", "WARNING"),
        )

    @property
    def logging_level(self) -> int:
        return getattr(logging, self.log_level)


def _clean(value: str) -> str:
    value = value.strip()
    if (value.startswith('"') and value.endswith('"')) or (value.startswith("'") and value.endswith("'")):
        value = value[1:-1].strip()
    return value


def _positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not _clean(raw):
        return default
    try:
        value = int(_clean(raw))
    except ValueError:
        raise RuntimeError(f"Environment variable {name} must be an integer, got {raw!r}") from None
    if value < 1:
        raise RuntimeError(f"Environment variable {name} must be at least 1")
    return value


def _log_level(name: str, default: str) -> str:
    raw = os.getenv(name)
    if raw is None or not _clean(raw):
        return default
    level = _clean(raw).upper()
    if level not in _LEVELS:
        raise RuntimeError(f"Environment variable {name} must be one of {', '.join(_LEVELS)}")
    return level


def load_engine_settings() -> EngineSettings:
    return EngineSettings.from_env()
