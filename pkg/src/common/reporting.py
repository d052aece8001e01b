"""
Machine-readable CLI reports.

Reports are serialised with sorted keys and fixed separators so that the same
command on the same inputs prints byte-identical output.
"""

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List


def _default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bytes):
        return value.hex()
    if hasattr(value, "to_dict"):
        return value.to_dict()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def canonical_json(data: Any) -> str:
    """Serialise to JSON with stable key order."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), default=_default)


def inputs_digest(inputs: Any) -> str:
    """SHA-256 over the canonical JSON of the command inputs."""
    return hashlib.sha256(canonical_json(inputs).encode("utf-8")).hexdigest()


@dataclass
class Report:
    """Result envelope printed by every CLI command."""
    command: str
    inputs: Dict[str, Any]
    results: Dict[str, Any] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "inputs_digest": inputs_digest(self.inputs),
            "results": self.results,
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())
