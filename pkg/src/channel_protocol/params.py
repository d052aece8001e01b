"""
Channel parameters, per-state balances and the channel descriptor file.

Descriptor JSON:
    {"omega_a": 50000, "omega_b": 50000, "w": 6, "k1": 5, "k2": 5,
     "sigma1": 12000, "gamma1": 12000, "max_states": 1024,
     "master_seed_a": "<64 hex>", "master_seed_b": "<64 hex>"}

Fields other than the funding amounts and seeds fall back to the `channel`
section of the configuration.
"""

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

from common.config import get_default_config
from crypto_keys import InvalidSeed, parse_seed

from .errors import DescriptorInvalid

PARAM_FIELDS = ("omega_a", "omega_b", "w", "k1", "k2", "sigma1", "gamma1", "max_states")
MAX_POOL_SIZE = 15


@dataclass(frozen=True)
class ChannelParams:
    """Fixed configuration of one channel."""
    omega_a: int
    omega_b: int
    w: int = 6
    k1: int = 5
    k2: int = 5
    sigma1: int = 12000
    gamma1: int = 12000
    max_states: int = 1024

    def __post_init__(self):
        for name in PARAM_FIELDS:
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise DescriptorInvalid(f"{name} must be an integer, got {value!r}")
            if value < 0:
                raise DescriptorInvalid(f"{name} must be >= 0, got {value}")
        if self.w < 1:
            raise DescriptorInvalid("timelock w must be at least 1 block")
        for name in ("k1", "k2"):
            if not 1 <= getattr(self, name) <= MAX_POOL_SIZE:
                raise DescriptorInvalid(f"{name} must be in 1..{MAX_POOL_SIZE}")
        if self.max_states < 1:
            raise DescriptorInvalid("max_states must be at least 1")
        if self.sigma1 + self.gamma1 >= self.capacity:
            raise DescriptorInvalid(
                f"fees {self.sigma1}+{self.gamma1} must stay below capacity {self.capacity}"
            )

    @property
    def capacity(self) -> int:
        return self.omega_a + self.omega_b

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any],
                  defaults: Optional[Dict[str, Any]] = None) -> "ChannelParams":
        merged = dict(defaults if defaults is not None else get_default_config()["channel"])
        merged.update({k: v for k, v in data.items() if k in PARAM_FIELDS})
        missing = [name for name in ("omega_a", "omega_b") if name not in merged]
        if missing:
            raise DescriptorInvalid(f"missing field(s): {', '.join(missing)}")
        return cls(**{name: merged[name] for name in PARAM_FIELDS})


@dataclass
class ChannelState:
    """Balances of state j, plus the slot-c secrets once the state is revoked."""
    index: int
    balance_a: int
    balance_b: int
    revoked: bool = False
    revocation_secret_a: Optional[bytes] = None
    revocation_secret_b: Optional[bytes] = None

    def __post_init__(self):
        if self.index < 1:
            raise DescriptorInvalid(f"state index must be >= 1, got {self.index}")
        if self.balance_a < 0 or self.balance_b < 0:
            raise DescriptorInvalid("balances must be non-negative")
        if self.revoked and (self.revocation_secret_a is None or self.revocation_secret_b is None):
            raise DescriptorInvalid(f"revoked state {self.index} needs both revocation secrets")

    @property
    def total(self) -> int:
        return self.balance_a + self.balance_b

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": self.index,
            "balance_a": self.balance_a,
            "balance_b": self.balance_b,
            "revoked": self.revoked,
        }


@dataclass(frozen=True)
class ChannelDescriptor:
    """Parameters together with both parties' master seeds."""
    params: ChannelParams
    master_seed_a: bytes
    master_seed_b: bytes

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = self.params.to_dict()
        data["master_seed_a"] = self.master_seed_a.hex()
        data["master_seed_b"] = self.master_seed_b.hex()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any],
                  defaults: Optional[Dict[str, Any]] = None) -> "ChannelDescriptor":
        if not isinstance(data, dict):
            raise DescriptorInvalid("channel descriptor must be a JSON object")
        try:
            seed_a = parse_seed(data["master_seed_a"])
            seed_b = parse_seed(data["master_seed_b"])
        except KeyError as e:
            raise DescriptorInvalid(f"missing field {e.args[0]}") from e
        except InvalidSeed as e:
            raise DescriptorInvalid(str(e)) from e
        return cls(ChannelParams.from_dict(data, defaults), seed_a, seed_b)


def load_descriptor(source: Union[str, Path, Dict[str, Any]],
                    defaults: Optional[Dict[str, Any]] = None) -> ChannelDescriptor:
    """Load a channel descriptor from a JSON file or an already parsed dict."""
    if isinstance(source, dict):
        return ChannelDescriptor.from_dict(source, defaults)
    try:
        with open(source, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise DescriptorInvalid(f"descriptor {source} not found") from e
    except json.JSONDecodeError as e:
        raise DescriptorInvalid(f"descriptor {source} is not valid JSON: {e}") from e
    return ChannelDescriptor.from_dict(data, defaults)
