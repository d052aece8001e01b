"""
Configuration loading.

Values come from ``config.yaml`` merged over built-in defaults, with a few
environment overrides picked up through python-dotenv.
"""

import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from .logging_setup import build_logger

logger = build_logger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent

_DEFAULT_CONFIG: Dict[str, Any] = {
    "channel": {
        "w": 6,
        "k1": 5,
        "k2": 5,
        "sigma1": 12000,
        "gamma1": 12000,
        "max_states": 1024,
    },
    "scenario": {
        "horizon": 200,
        "miner_fee": 0,
        "alert_latency": 1,
        "close_timeout": 3,
        "close_relay": "gateway",
    },
    "script": {
        "max_script_bytes": 10000,
        "max_stack_depth": 1000,
    },
    "analysis": {
        "sweep_samples": 500,
        "sweep_seed": 20190101,
    },
    "fixtures": {
        "dir": "data/fixtures",
    },
    "logging": {
        "level": "WARNING",
        "file": None,
    },
}


def get_default_config() -> Dict[str, Any]:
    """Get a fresh copy of the default configuration."""
    return copy.deepcopy(_DEFAULT_CONFIG)


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """Load configuration from YAML file, falling back to defaults."""
    load_dotenv()
    path = Path(config_path or os.getenv("IOTCHAN_CONFIG") or PROJECT_ROOT / "config.yaml")

    config = get_default_config()
    try:
        with open(path, 'r', encoding='utf-8') as f:
            loaded = yaml.safe_load(f) or {}
        config = _deep_merge(config, loaded)
    except FileNotFoundError:
        logger.warning(f"Config file {path} not found, using defaults")

    env_level = os.getenv("IOTCHAN_LOG_LEVEL")
    if env_level:
        config["logging"]["level"] = env_level

    return config


def fixture_dir(config: Optional[Dict[str, Any]] = None) -> Path:
    """Directory holding the shipped JSON fixtures."""
    override = os.getenv("IOTCHAN_FIXTURE_DIR")
    if override:
        return Path(override)

    configured = Path((config or _DEFAULT_CONFIG)["fixtures"]["dir"])
    return configured if configured.is_absolute() else PROJECT_ROOT / configured
