"""
Configuration Management Module

This module provides configuration loading and management functionality
using YAML files with support for nested key access.
"""

import os
from typing import Any, Dict, Optional

import yaml

from app.core.exceptions import ConfigurationError

DEFAULT_CONFIG_PATH = os.path.join(
    os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))),
    "configs",
    "application.yml",
)


class Config:
    """
    Configuration manager for loading and accessing YAML-based configuration.

    Application-level settings (logging, numerical tolerances, worker limits
    and run defaults) live here; per-run physics settings come from the JSON
    run configuration instead.

    Attributes:
        _config: Internal dictionary storing configuration values
        _path: Path to the configuration file

    Example:
        >>> config = Config('configs/application.yml')
        >>> tol_grid = config.get('numerics.tol_grid', 1e-6)
        >>> workers = config.get('workers.max_workers')
    """

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration from YAML file.

        Args:
            config_path: Path to the YAML configuration file.
                Defaults to 'configs/application.yml'

        Raises:
            ConfigurationError: If the file is missing or not valid YAML
        """
        self._path = config_path or DEFAULT_CONFIG_PATH
        self._config: Dict[str, Any] = {}
        self._load_config()

    def _load_config(self) -> None:
        """
        Load configuration from YAML file.

        Raises:
            ConfigurationError: If the file is missing or not valid YAML
        """
        if not os.path.exists(self._path):
            raise ConfigurationError(
                f"Configuration file not found: {self._path}",
                details={"path": self._path},
            )

        try:
            with open(self._path, "r", encoding="utf-8") as file:
                self._config = yaml.safe_load(file) or {}
        except yaml.YAMLError as e:
            raise ConfigurationError(
                f"Invalid YAML in configuration file: {self._path}",
                details={"path": self._path, "reason": str(e)},
            )

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value using dot notation.

        Supports nested key access using dot notation (e.g., 'numerics.newton.max_iter').

        Args:
            key: Configuration key using dot notation
            default: Default value if key is not found

        Returns:
            Configuration value or default if not found

        Example:
            >>> config.get('numerics.tol_grid', 1e-6)
            1e-06
        """
        keys = key.split(".")
        value = self._config

        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def get_all(self) -> Dict[str, Any]:
        """
        Get all configuration values.

        Returns:
            Complete configuration dictionary
        """
        return self._config.copy()

    def get_section(self, section: str) -> Optional[Dict[str, Any]]:
        """
        Get a complete configuration section.

        Args:
            section: Section name (top-level key)

        Returns:
            Section configuration dictionary or None if not found
        """
        return self._config.get(section)

    def max_workers(self) -> int:
        """
        Worker cap for compute parallelism.

        The ``AW_THREADS`` environment variable takes precedence over
        ``workers.max_workers``.

        Returns:
            Positive worker count

        Raises:
            ConfigurationError: If AW_THREADS is not a positive integer
        """
        env_value = os.environ.get("AW_THREADS")
        if env_value is not None:
            try:
                workers = int(env_value)
            except ValueError:
                raise ConfigurationError(
                    f"AW_THREADS must be a positive integer, got '{env_value}'"
                )
            if workers < 1:
                raise ConfigurationError(
                    f"AW_THREADS must be a positive integer, got '{env_value}'"
                )
            return workers
        return max(1, int(self.get("workers.max_workers", 1)))

    def reload(self) -> None:
        """
        Reload configuration from file.
        """
        self._load_config()

    def __repr__(self) -> str:
        """String representation of Config instance."""
        return f"Config(path='{self._path}')"
