"""
Configuration Management for cubic-prf-lib

Handles loading and merging configuration from multiple sources:
1. Command-line overrides (applied through CubicPrfConfig.guards)
2. Environment variables CUBICPRF_<SECTION>_<KEY>
3. .cubicprf/settings.local.json (personal settings, gitignored)
4. .cubicprf/settings.json (shared defaults, committed)
5. Hardcoded defaults
"""

from __future__ import annotations

import json
import logging
import os
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Optional, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T", bound="BaseConfigManager")

# criterion census ceiling; the default guard stays at 11 because a census over
# F_q tabulates q^3 monic cubics and evaluates partition_size * q^3 pairs per block
HARD_MAX_Q_CRITERION = 64


class BaseConfigManager(ABC):
    """
    Layered configuration for one service name.

    Subclasses provide the service name and the default tree; files and
    environment variables are merged on top of it at construction time.
    """

    _instances: dict[type, BaseConfigManager] = {}
    _instance_lock = threading.Lock()

    def __init__(self):
        self.service_name = self.get_service_name()
        if not self.service_name:
            raise ValueError("Service name must be defined by get_service_name() in subclass.")

        self.env_prefix = self.service_name.upper()
        self.config = self._load_config()

    @abstractmethod
    def get_service_name(self) -> str:
        """Name of the configuration directory (without the leading dot) and env prefix."""

    @abstractmethod
    def get_default_config(self) -> dict[str, Any]:
        """Default configuration tree."""

    def _find_config_dir(self) -> Optional[Path]:
        """Find the ``.<service>`` directory by walking up from the current directory."""
        current = Path.cwd()
        home = Path.home()
        while current != current.parent and current != home.parent:
            candidate = current / f".{self.service_name}"
            if candidate.is_dir():
                return candidate
            current = current.parent
        return None

    def _read_settings(self, path: Path) -> dict[str, Any]:
        if not path.exists():
            return {}
        try:
            with open(path) as f:
                data = json.load(f)
        except json.JSONDecodeError:
            logger.warning("ignoring malformed settings file %s", path)
            return {}
        return data if isinstance(data, dict) else {}

    def _load_config(self) -> dict[str, Any]:
        config = self.get_default_config()

        config_dir = self._find_config_dir()
        if config_dir:
            for name in ("settings.json", "settings.local.json"):
                config = self._merge_config(config, self._read_settings(config_dir / name))

        return self._apply_env(config)

    def _apply_env(self, config: dict[str, Any]) -> dict[str, Any]:
        """Override ``section.key`` entries from ``<PREFIX>_<SECTION>_<KEY>`` variables."""
        result = dict(config)
        for section, values in config.items():
            if not isinstance(values, dict):
                continue
            merged = dict(values)
            for key, default in values.items():
                raw = os.getenv(f"{self.env_prefix}_{section.upper()}_{key.upper()}")
                if raw is None:
                    continue
                try:
                    merged[key] = type(default)(raw) if default is not None else raw
                except ValueError:
                    logger.warning("ignoring non-numeric override %s_%s_%s=%r",
                                   self.env_prefix, section.upper(), key.upper(), raw)
            result[section] = merged
        return result

    def _merge_config(self, base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
        """Recursively merge override config into base config."""
        result = base.copy()
        for key, value in override.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._merge_config(result[key], value)
            else:
                result[key] = value
        return result

    def get(self, section: str, key: str, default: Any = None) -> Any:
        return self.config.get(section, {}).get(key, default)

    @classmethod
    def get_instance(cls: type[T]) -> T:
        """Thread-safe singleton per concrete subclass."""
        if cls not in cls._instances:
            with cls._instance_lock:
                if cls not in cls._instances:
                    cls._instances[cls] = cls()
        return cls._instances[cls]  # type: ignore[return-value]

    @classmethod
    def reset_instance(cls: type[T]) -> None:
        """Drop the cached singleton (used by tests)."""
        with cls._instance_lock:
            cls._instances.pop(cls, None)


@dataclass
class Guards:
    """Runtime thresholds and size guards, clamped into legal ranges."""

    brute_threshold: int = 13
    max_q_brute: int = 11
    max_q_criterion: int = 11
    max_q_orbits: int = 9
    max_q_complete: int = 9
    max_extension_points: int = 4096
    threads: int = 1
    partition_size: int = 32

    def __post_init__(self):
        self.brute_threshold = max(2, self.brute_threshold)
        self.max_q_brute = max(2, self.max_q_brute)
        self.max_q_criterion = max(2, min(self.max_q_criterion, HARD_MAX_Q_CRITERION))
        self.max_q_orbits = max(2, self.max_q_orbits)
        self.max_q_complete = max(2, self.max_q_complete)
        self.max_extension_points = max(2, self.max_extension_points)
        self.threads = max(1, min(self.threads, 64))
        self.partition_size = max(1, self.partition_size)

    def with_max_q(self, max_q: Optional[int]) -> Guards:
        """Copy with every census ``max_q_*`` guard replaced by ``max_q``."""
        if max_q is None:
            return self
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        for name in ("max_q_brute", "max_q_criterion", "max_q_orbits", "max_q_complete"):
            values[name] = max_q
        return Guards(**values)


class CubicPrfConfig(BaseConfigManager):
    """Configuration for the cubic permutation tools (``.cubicprf/``, ``CUBICPRF_*``)."""

    def get_service_name(self) -> str:
        return "cubicprf"

    def get_default_config(self) -> dict[str, Any]:
        return {
            "criterion": {"brute_threshold": 13},
            "census": {
                "max_q_brute": 11,
                "max_q_criterion": 11,
                "max_q_orbits": 9,
                "max_q_complete": 9,
                "threads": 1,
                "partition_size": 32,
            },
            "extension": {"max_points": 4096},
        }

    def guards(self, **overrides: Any) -> Guards:
        """Snapshot the configured guards; ``None`` overrides are ignored."""
        values: dict[str, Any] = {
            "brute_threshold": self.get("criterion", "brute_threshold", 13),
            "max_q_brute": self.get("census", "max_q_brute", 11),
            "max_q_criterion": self.get("census", "max_q_criterion", 11),
            "max_q_orbits": self.get("census", "max_q_orbits", 9),
            "max_q_complete": self.get("census", "max_q_complete", 9),
            "threads": self.get("census", "threads", 1),
            "partition_size": self.get("census", "partition_size", 32),
            "max_extension_points": self.get("extension", "max_points", 4096),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return Guards(**{k: int(v) for k, v in values.items()})


def get_guards(**overrides: Any) -> Guards:
    """Guards from the process-wide configuration singleton."""
    return CubicPrfConfig.get_instance().guards(**overrides)
