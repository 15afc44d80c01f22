"""Configuration loader for the embedding lab."""

import yaml
from pathlib import Path
from typing import Dict, Any
from src.utils.exceptions import ConfigError
from src.utils.logger import get_logger

logger = get_logger(__name__)


def load_config(config_file: Path) -> Dict[str, Any]:
    """
    Load configuration from YAML file.

    Args:
        config_file: Path to YAML configuration file

    Returns:
        Dictionary with configuration values

    Raises:
        ConfigError: If configuration file cannot be loaded
    """
    try:
        if not config_file.exists():
            raise ConfigError(f"Configuration file not found: {config_file}")

        with open(config_file, 'r') as f:
            config = yaml.safe_load(f)

        if config is None:
            raise ConfigError(f"Configuration file is empty: {config_file}")
        if not isinstance(config, dict):
            raise ConfigError(f"Configuration root must be a mapping: {config_file}")

        logger.debug(f"Loaded configuration from {config_file}")
        return config

    except ConfigError:
        raise
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in configuration file: {e}") from e
    except Exception as e:
        raise ConfigError(f"Failed to load configuration: {e}") from e


def get_config_path(config_name: str) -> Path:
    """
    Get path to a bundled configuration file.

    Args:
        config_name: Name of configuration file (without .yaml extension)

    Returns:
        Path to configuration file
    """
    config_dir = Path(__file__).parent
    return config_dir / f"{config_name}.yaml"


def merge_config(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """
    Recursively merge override values into a copy of a nested configuration.

    Args:
        base: Configuration to start from
        overrides: Values that replace entries of base; nested dicts merge

    Returns:
        New merged dictionary
    """
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = value
    return merged


def parse_override(text: str) -> Dict[str, Any]:
    """
    Parse a 'section.key=value' override into a nested dictionary.

    Raises:
        ConfigError: If the override is malformed
    """
    if '=' not in text:
        raise ConfigError(f"Invalid override '{text}'. Expected section.key=value")
    path, raw = text.split('=', 1)
    keys = [k for k in path.strip().split('.') if k]
    if not keys:
        raise ConfigError(f"Invalid override '{text}'. Empty key")
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid override value in '{text}': {e}") from e
    nested: Dict[str, Any] = {keys[-1]: value}
    for key in reversed(keys[:-1]):
        nested = {key: nested}
    return nested
