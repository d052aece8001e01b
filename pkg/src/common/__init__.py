"""Shared configuration, logging and reporting helpers."""

from .config import load_config, get_default_config, fixture_dir
from .errors import IotChanError
from .logging_setup import build_logger, configure_logging
from .reporting import Report, canonical_json, inputs_digest

__all__ = [
    "load_config",
    "get_default_config",
    "fixture_dir",
    "IotChanError",
    "build_logger",
    "configure_logging",
    "Report",
    "canonical_json",
    "inputs_digest",
]
