"""
Scenario configuration.

    {
      "channel": {<channel descriptor>},
      "updates": [60000, 80000],
      "strategies": {"device": "honest", "gateway": "publish_revoked:2",
                     "publisher": "honest", "watchdog": ["watchdog_silent", ...]},
      "horizon": 20,
      "miner_fee": 0
    }

Missing scenario keys fall back to the ``scenario`` section of config.yaml.
"""

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from channel_protocol import ChannelDescriptor, ChannelError, load_descriptor
from common.config import get_default_config
from crypto_keys import sha256

from .errors import ConfigInvalid
from .strategies import PublishRevoked, StrategySet

CLOSE_RELAYS = ("gateway", "publisher")


@dataclass(frozen=True)
class ScenarioConfig:
    descriptor: ChannelDescriptor
    updates: Tuple[int, ...]
    strategies: StrategySet
    horizon: int = 200
    miner_fee: int = 0
    alert_latency: int = 1
    close_timeout: int = 3
    close_relay: str = "gateway"
    pool_seed: Optional[bytes] = None
    name: str = "scenario"

    def __post_init__(self):
        params = self.descriptor.params
        if self.horizon < 1:
            raise ConfigInvalid("horizon must be at least 1 block")
        if self.miner_fee < 0:
            raise ConfigInvalid("miner_fee must be >= 0")
        if not 0 <= self.alert_latency < params.w:
            raise ConfigInvalid(f"alert_latency must lie in 0..{params.w - 1}")
        if self.close_timeout < 1:
            raise ConfigInvalid("close_timeout must be at least 1 block")
        if self.close_relay not in CLOSE_RELAYS:
            raise ConfigInvalid(f"close_relay must be one of {', '.join(CLOSE_RELAYS)}")
        if len(self.updates) + 1 > params.max_states:
            raise ConfigInvalid(f"{len(self.updates)} updates exceed max_states {params.max_states}")
        for balance in self.updates:
            if not isinstance(balance, int) or not 0 <= balance <= params.capacity:
                raise ConfigInvalid(f"update balance {balance!r} outside 0..{params.capacity}")
        if len(self.strategies.publishers) != params.k1 or len(self.strategies.watchdogs) != params.k2:
            raise ConfigInvalid("pool strategies do not match k1/k2")
        for strategy in (self.strategies.device, self.strategies.gateway):
            if isinstance(strategy, PublishRevoked) and not 1 <= strategy.state_index <= len(self.updates):
                raise ConfigInvalid(
                    f"publish_revoked:{strategy.state_index} needs a revoked state "
                    f"(1..{len(self.updates)})"
                )
        for pool, size in ((self.strategies.publishers, params.k1), (self.strategies.watchdogs, params.k2)):
            for strategy in pool:
                if getattr(strategy, "bribe", 0) % size:
                    raise ConfigInvalid(f"bribe {strategy.bribe} does not split evenly over {size}")

    @property
    def params(self):
        return self.descriptor.params

    def final_balance_a(self) -> int:
        return self.updates[-1] if self.updates else self.params.omega_a

    def with_strategies(self, **changes: Any) -> "ScenarioConfig":
        """Copy with some strategies replaced."""
        return replace(self, strategies=replace(self.strategies, **changes))

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "name": self.name,
            "channel": self.descriptor.to_dict(),
            "updates": list(self.updates),
            "strategies": self.strategies.to_dict(),
            "horizon": self.horizon,
            "miner_fee": self.miner_fee,
            "alert_latency": self.alert_latency,
            "close_timeout": self.close_timeout,
            "close_relay": self.close_relay,
        }
        if self.pool_seed is not None:
            data["pool_seed"] = self.pool_seed.hex()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any],
                  config: Optional[Dict[str, Any]] = None) -> "ScenarioConfig":
        config = config or get_default_config()
        defaults = config.get("scenario", {})
        if not isinstance(data, dict):
            raise ConfigInvalid("scenario must be a JSON object")
        try:
            descriptor = load_descriptor(data["channel"], config.get("channel"))
        except KeyError as e:
            raise ConfigInvalid("scenario needs a channel descriptor") from e
        except ChannelError as e:
            raise ConfigInvalid(f"channel descriptor: {e}") from e

        updates = data.get("updates", [])
        if not isinstance(updates, list):
            raise ConfigInvalid("updates must be a list of device balances")

        pool_seed = data.get("pool_seed")
        try:
            pool_seed = bytes.fromhex(pool_seed) if pool_seed else None
        except ValueError as e:
            raise ConfigInvalid(f"pool_seed is not hex: {e}") from e

        try:
            return cls(
                descriptor=descriptor,
                updates=tuple(updates),
                strategies=StrategySet.from_dict(
                    data.get("strategies", {}), descriptor.params.k1, descriptor.params.k2
                ),
                horizon=int(data.get("horizon", defaults.get("horizon", 200))),
                miner_fee=int(data.get("miner_fee", defaults.get("miner_fee", 0))),
                alert_latency=int(data.get("alert_latency", defaults.get("alert_latency", 1))),
                close_timeout=int(data.get("close_timeout", defaults.get("close_timeout", 3))),
                close_relay=data.get("close_relay", defaults.get("close_relay", "gateway")),
                pool_seed=pool_seed,
                name=data.get("name", "scenario"),
            )
        except (TypeError, ValueError) as e:
            raise ConfigInvalid(str(e)) from e


def load_scenario(source: Union[str, Path, Dict[str, Any]],
                  config: Optional[Dict[str, Any]] = None) -> ScenarioConfig:
    """Load a scenario from a JSON file or an already parsed dict."""
    if isinstance(source, dict):
        return ScenarioConfig.from_dict(source, config)
    try:
        with open(source, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ConfigInvalid(f"scenario {source} not found") from e
    except json.JSONDecodeError as e:
        raise ConfigInvalid(f"scenario {source} is not valid JSON: {e}") from e
    data.setdefault("name", Path(source).stem)
    return ScenarioConfig.from_dict(data, config)


def override(config: ScenarioConfig, seed: Optional[bytes] = None,
             horizon: Optional[int] = None) -> ScenarioConfig:
    """Apply the CLI's --seed and --horizon flags."""
    changes: Dict[str, Any] = {}
    if seed is not None:
        descriptor = config.descriptor
        changes["descriptor"] = replace(descriptor, master_seed_a=seed,
                                        master_seed_b=_gateway_seed(seed))
    if horizon is not None:
        changes["horizon"] = horizon
    return replace(config, **changes) if changes else config


def _gateway_seed(seed: bytes) -> bytes:
    return sha256(b"iotchan/gateway" + seed)
