from dataclasses import dataclass, fields
from typing import Mapping, Optional
import logging
import os

from .errors import ConfigError

_SETTINGS = {
    "group_order": {"env_var": "LATNOETHER_CAP_GROUP_ORDER", "default": 64},
    "rank": {"env_var": "LATNOETHER_CAP_RANK", "default": 48},
    "h1_work": {"env_var": "LATNOETHER_CAP_H1_WORK", "default": 4096},
    "height": {"env_var": "LATNOETHER_SEARCH_HEIGHT", "default": 3},
    "budget": {"env_var": "LATNOETHER_SEARCH_BUDGET", "default": 200000},
    "jobs": {"env_var": "LATNOETHER_JOBS", "default": 1},
}

LOG_LEVEL_ENV = "LATNOETHER_LOG_LEVEL"


@dataclass(frozen=True)
class Caps:
    """Compute caps and run settings shared by every module."""

    group_order: int = 64
    rank: int = 48
    h1_work: int = 4096
    height: int = 3
    budget: int = 200000
    jobs: int = 1
    log_level: str = "WARNING"

    @staticmethod
    def from_env(environ: Optional[Mapping[str, str]] = None) -> "Caps":
        """
        Read caps from environment variables, falling back to the defaults.

        Args:
            environ: Mapping to read from. Defaults to os.environ

        Returns:
            A Caps instance
        """
        environ = os.environ if environ is None else environ
        values = {}
        for name, setting in _SETTINGS.items():
            raw = environ.get(setting["env_var"])
            if raw is None or raw.strip() == "":
                values[name] = setting["default"]
                continue
            try:
                value = int(raw)
            except ValueError:
                raise ConfigError(f"{setting['env_var']} must be an integer, got {raw!r}")
            if value <= 0:
                raise ConfigError(f"{setting['env_var']} must be positive, got {value}")
            values[name] = value

        level = environ.get(LOG_LEVEL_ENV, "WARNING").strip().upper() or "WARNING"
        if not isinstance(logging.getLevelName(level), int):
            raise ConfigError(f"{LOG_LEVEL_ENV} is not a logging level: {level!r}")
        values["log_level"] = level
        return Caps(**values)

    def replace(self, **changes) -> "Caps":
        """Return a copy with the given fields overridden; None values are ignored."""
        current = {f.name: getattr(self, f.name) for f in fields(self)}
        current.update({k: v for k, v in changes.items() if v is not None})
        return Caps(**current)


_current: Optional[Caps] = None


def get_caps() -> Caps:
    global _current
    if _current is None:
        _current = Caps.from_env()
    return _current


def set_caps(caps: Optional[Caps]) -> None:
    """Install process-wide caps. Passing None re-reads the environment on next use."""
    global _current
    _current = caps
