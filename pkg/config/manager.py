"""
Experiment Configuration Manager
Layered loading of ExperimentConfig

Configuration Precedence (highest to lowest):
1. Explicit overrides (CLI flags)
2. Environment variables (.env file via python-dotenv)
3. Config file (YAML or JSON; a run summary with a "config" key is accepted)
4. Default values (config/defaults.py)
"""

import copy
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from dotenv import load_dotenv

from config.defaults import ENV_OVERRIDES, get_default_experiment_config
from config.models import ConfigError, ExperimentConfig

logger = logging.getLogger(__name__)


def _set_dotted(data: Dict[str, Any], key: str, value: Any):
    parts = key.split('.')
    node = data
    for part in parts[:-1]:
        child = node.get(part)
        if child is None:
            child = node[part] = {}
        if not isinstance(child, dict):
            raise ConfigError(f"Cannot set '{key}': '{part}' is not a section")
        node = child
    node[parts[-1]] = value


def _merge(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigManager:
    """
    Resolves one ExperimentConfig from defaults, file, environment and overrides

    Example:
        >>> manager = ConfigManager("asset/config/experiment.yaml")
        >>> config = manager.load(overrides={'simulation.seed': 7})
    """

    def __init__(self, config_file: Optional[Union[str, Path]] = None, env_file: Optional[Union[str, Path]] = ".env"):
        self.config_file = Path(config_file) if config_file else None
        self.env_file = Path(env_file) if env_file else None
        self.sources = ['defaults']

    def _load_environment(self) -> Dict[str, Any]:
        if self.env_file is not None and self.env_file.exists():
            load_dotenv(self.env_file, override=False)
            logger.info(f"Loaded environment from {self.env_file}")

        values: Dict[str, Any] = {}
        for var, (key, kind) in ENV_OVERRIDES.items():
            raw = os.getenv(var)
            if raw is None or raw == "":
                continue
            try:
                _set_dotted(values, key, kind(raw))
            except ValueError as e:
                raise ConfigError(f"Environment variable {var}={raw!r} is invalid: {e}") from e
        if values:
            self.sources.append('environment')
        return values

    def _load_config_file(self) -> Dict[str, Any]:
        if self.config_file is None:
            return {}
        if not self.config_file.exists():
            raise ConfigError(f"Config file not found: {self.config_file}")

        with open(self.config_file, 'r', encoding='utf-8') as f:
            if self.config_file.suffix.lower() == '.json':
                data = json.load(f)
            else:
                data = yaml.safe_load(f)

        if not data:
            logger.warning(f"Config file {self.config_file} is empty, using defaults")
            return {}
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {self.config_file} must hold a mapping")
        # Run summaries embed the resolved config
        if isinstance(data.get('config'), dict):
            data = data['config']

        self.sources.append(str(self.config_file))
        return data

    def load(self, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
        """
        Resolve and validate the configuration

        Args:
            overrides: Dotted keys ('simulation.seed') or top-level keys ('model'); None values are skipped

        Raises:
            ConfigError: unknown keys or invalid values
        """
        data = get_default_experiment_config().to_dict()
        data = _merge(data, self._load_config_file())
        data = _merge(data, self._load_environment())

        applied = {k: v for k, v in (overrides or {}).items() if v is not None}
        for key, value in applied.items():
            _set_dotted(data, key, value)
        if applied:
            self.sources.append('overrides')

        config = ExperimentConfig.from_dict(data).validate()

        logger.info("=" * 60)
        logger.info("CONFIGURATION LOADED")
        logger.info("=" * 60)
        logger.info(f"Sources: {' > '.join(reversed(self.sources))}")
        logger.info(f"Model: {config.model}, N={config.channel.n_users}, tau={config.frame.slots_per_frame}")
        logger.info(f"Seed: {config.simulation.seed}, frames: {config.simulation.frames}")
        logger.info("=" * 60)
        return config

    def save(self, config: ExperimentConfig, path: Union[str, Path]):
        """Write a configuration as YAML"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            yaml.dump(config.to_dict(), f, default_flow_style=False, sort_keys=False)
        logger.info(f"Configuration saved to {path}")


def load_experiment_config(path: Optional[Union[str, Path]] = None,
                           overrides: Optional[Dict[str, Any]] = None,
                           env_file: Optional[Union[str, Path]] = ".env") -> ExperimentConfig:
    """Defaults < config file < environment < overrides"""
    return ConfigManager(path, env_file).load(overrides)
