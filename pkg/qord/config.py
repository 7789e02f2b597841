from typing import Dict, Any, Optional, Sequence
import os
import json
import logging
from dataclasses import dataclass, asdict, field

import yaml
from dotenv import load_dotenv

from .errors import InputError

logger = logging.getLogger(__name__)


@dataclass
class ComputeConfig:
    """Configuration for series truncation and elimination loops."""
    trunc: Optional[int] = None  # None derives 2*(n + total(lambda1))
    margin: int = 5  # degrees near the truncation bound excluded from comparisons
    max_iterations: int = 500  # per reduction loop
    residual_iterations: int = 8  # scalar solves per eliminated term
    oracle_box: Optional[int] = None  # None derives 2*(n + total(lambda1))


@dataclass
class CensusConfig:
    """Bounds for the classification census."""
    n_max: int = 7
    lambda_box: int = 12


@dataclass
class AppConfig:
    """Configuration for the qord application."""
    compute: ComputeConfig = field(default_factory=ComputeConfig)
    census: CensusConfig = field(default_factory=CensusConfig)
    output_format: str = "json"
    log_level: str = "WARNING"
    results_dir: str = "data/results"


def derived_trunc(n: int, lambda1: Sequence[int]) -> int:
    """Default truncation order for a class (n, lambda1)."""
    return 2 * (n + sum(lambda1))


class ConfigManager:
    """Manages application configuration."""

    def __init__(self, config_path: str = None):
        """
        Initialize the configuration manager.

        Args:
            config_path: Path to the configuration file. If None, uses QORD_CONFIG
                or config.json next to the package.
        """
        load_dotenv()
        self.config_path = config_path or os.environ.get("QORD_CONFIG") or os.path.join(
            os.path.dirname(os.path.dirname(__file__)),
            "config.json"
        )
        self.config = self._load_config()

    def _read_file(self) -> Dict[str, Any]:
        with open(self.config_path, 'r') as f:
            if self.config_path.endswith((".yaml", ".yml")):
                return yaml.safe_load(f) or {}
            return json.load(f)

    def _load_config(self) -> AppConfig:
        """Load configuration from file or create default."""
        if os.path.exists(self.config_path):
            try:
                config_dict = self._read_file()
                return AppConfig(
                    compute=ComputeConfig(**config_dict.get('compute', {})),
                    census=CensusConfig(**config_dict.get('census', {})),
                    **{key: value for key, value in config_dict.items()
                       if key not in ('compute', 'census')}
                )
            except Exception as e:
                logger.warning(f"Error loading config {self.config_path}: {e}, using defaults")

        return AppConfig()

    def save_config(self):
        """Save current configuration to file."""
        config_dict = asdict(self.config)
        directory = os.path.dirname(self.config_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        with open(self.config_path, 'w') as f:
            if self.config_path.endswith((".yaml", ".yml")):
                yaml.safe_dump(config_dict, f, default_flow_style=False)
            else:
                json.dump(config_dict, f, indent=2)

    def update_config(self, updates: Dict[str, Any]):
        """
        Update configuration with new values.

        Args:
            updates: Dictionary of configuration updates
        """
        if 'compute' in updates:
            self.config.compute = ComputeConfig(**updates['compute'])
        if 'census' in updates:
            self.config.census = CensusConfig(**updates['census'])

        for key, value in updates.items():
            if key not in ('compute', 'census') and hasattr(self.config, key):
                setattr(self.config, key, value)

        self.save_config()

    def get_config(self) -> AppConfig:
        """Get the current configuration."""
        return self.config

    def effective_trunc(self, n: int, lambda1: Sequence[int],
                        override: Optional[int] = None,
                        document_trunc: Optional[int] = None) -> int:
        """
        Resolve the truncation order for a computation.

        Precedence is the explicit override, then the input document, then the
        QORD_TRUNC environment variable, then the config file, then the
        derived default.

        Args:
            n: Multiplicity of the parameterization
            lambda1: First characteristic exponent
            override: Value given on the command line
            document_trunc: Value stored in the input document

        Returns:
            A positive truncation order
        """
        for candidate in (override, document_trunc, os.environ.get("QORD_TRUNC"),
                          self.config.compute.trunc):
            if candidate is None or candidate == "":
                continue
            try:
                value = int(candidate)
            except (TypeError, ValueError):
                raise InputError(f"invalid truncation order: {candidate!r}")
            if value < 1:
                raise InputError(f"truncation order must be positive, got {value}")
            return value
        return derived_trunc(n, lambda1)
