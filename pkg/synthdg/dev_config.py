from __future__ import annotations
from typing import Dict, Optional
from enum import Enum
import json
import logging
import os

CONFIG_PATH = "~/.synthdg/config.json"
FULL_CONFIG_PATH = os.path.expanduser(CONFIG_PATH)

logger = logging.getLogger(__name__)


class ScalarKind(Enum):
    RATIONAL = 0
    FLOAT = 1

    @staticmethod
    def from_string(scalar_name: str) -> ScalarKind:
        scalar_name = scalar_name.lower()
        return {
            "rational": ScalarKind.RATIONAL,
            "float": ScalarKind.FLOAT,
        }[scalar_name]


def get_config_path() -> str:
    return os.getenv("SYNTHDG_CONFIG", FULL_CONFIG_PATH)


class SuiteConfig:
    """
    SuiteConfig is a wrapper around the suite configuration file
    """

    def __init__(self, config: Dict, scalar: Optional[ScalarKind] = None):
        self._config = config
        self._scalar = scalar

    @property
    def seed(self) -> int:
        return int(self._config.get("seed", 42))

    @property
    def samples(self) -> int:
        return int(self._config.get("samples", 100))

    @property
    def trials(self) -> int:
        return int(self._config.get("trials", 100))

    @property
    def max_degree(self) -> int:
        return int(self._config.get("max_degree", 3))

    @property
    def max_dim(self) -> int:
        return int(self._config.get("max_dim", 3))

    @property
    def max_perm_size(self) -> int:
        return int(self._config.get("max_perm_size", 5))

    @property
    def scalar(self) -> ScalarKind:
        if self._scalar is not None:
            return self._scalar
        return ScalarKind.from_string(self._config.get("scalar", "rational"))

    def with_overrides(
        self, seed: Optional[int] = None, samples: Optional[int] = None
    ) -> SuiteConfig:
        config = dict(self._config)
        if seed is not None:
            config["seed"] = seed
        if samples is not None:
            config["samples"] = samples
        return SuiteConfig(config, self._scalar)


def load_config(
    config_file_path: Optional[str] = None, scalar: Optional[ScalarKind] = None
) -> SuiteConfig:
    explicit = config_file_path is not None
    if config_file_path is None:
        config_file_path = get_config_path()

    try:
        with open(config_file_path, "r") as f:
            return SuiteConfig(json.loads(f.read()), scalar=scalar)
    except FileNotFoundError:
        if explicit:
            logger.error(
                f"No SuiteConfig found. Please ensure that the configuration file exists at '{config_file_path}'"
            )
            raise
        logger.debug(f"No SuiteConfig at '{config_file_path}', using defaults")
        return SuiteConfig({}, scalar=scalar)
