"""Verifier configuration loaded from YAML."""

import dataclasses
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

import yaml

from cwp_verifier.errors import VerifierError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = "cwp-verifier.yaml"

_LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class ConfigError(VerifierError):
    code = "CONFIG_ERROR"


@dataclass(frozen=True)
class VerifierConfig:
    """Settings shared by every command. CLI flags override them."""

    max_iterations: int = 10000
    permutations: int = 20
    permutation_seed: int = 0
    workers: int = 1
    date_offset_days: int = 1
    ordered_index_limit: int = 8
    log_level: str = "WARNING"
    clock: Optional[str] = None

    def __post_init__(self):
        for name in ("max_iterations", "workers", "date_offset_days", "ordered_index_limit"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}", subject=name)
        if not isinstance(self.permutations, int) or self.permutations < 2:
            raise ConfigError("permutations must be an integer of at least 2", subject="permutations")
        if self.log_level.upper() not in _LOG_LEVELS:
            raise ConfigError(f"unknown log level {self.log_level!r}", subject="log_level")

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "VerifierConfig":
        """Build a config from a parsed mapping.

        Raises:
            ConfigError: On unknown keys or invalid values
        """
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown configuration key '{unknown[0]}'", subject=unknown[0])
        if data.get("clock") is not None:
            data = {**data, "clock": str(data["clock"]).replace(" ", "T")}
        return cls(**data)

    def override(self, **values: Any) -> "VerifierConfig":
        """Copy with the given non-None values replaced."""
        return dataclasses.replace(self, **{k: v for k, v in values.items() if v is not None})


def load_config(path: Union[str, Path, None] = None) -> VerifierConfig:
    """Load configuration.

    Args:
        path: Explicit config file. Without it, ``./cwp-verifier.yaml`` is
            read when present, else defaults are used.

    Raises:
        ConfigError: If an explicit file is missing or the content is invalid
    """
    if path is None:
        candidate = Path(DEFAULT_CONFIG_FILE)
        if not candidate.exists():
            return VerifierConfig()
        path = candidate
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"configuration file {path} not found", subject=str(path))
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"configuration file {path} is not valid YAML: {exc}", subject=str(path))
    if not isinstance(data, dict):
        raise ConfigError(f"configuration file {path} must hold a mapping", subject=str(path))
    logger.debug("loaded configuration from %s", path)
    return VerifierConfig.from_mapping(data)
