"""
Actor strategies.

A strategy is written in scenario files either as a bare name or as
``name:argument``:

    honest
    publish_revoked:2       publish the commitment of revoked state 2
    collude_publisher:50000 drop the recovery for a total bribe of 50000
    collude_watchdog:50000  stay silent for a total bribe of 50000
    watchdog_silent         never alert (denial of service)
    publisher_drop          never publish (denial of service)
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Union

from .errors import ConfigInvalid


@dataclass(frozen=True)
class Strategy:
    name = "honest"

    def to_text(self) -> str:
        return self.name

    @property
    def is_honest(self) -> bool:
        return type(self) is Honest


@dataclass(frozen=True)
class Honest(Strategy):
    name = "honest"


@dataclass(frozen=True)
class PublishRevoked(Strategy):
    state_index: int
    name = "publish_revoked"

    def to_text(self) -> str:
        return f"{self.name}:{self.state_index}"


@dataclass(frozen=True)
class ColludePublisher(Strategy):
    bribe: int
    name = "collude_publisher"

    def to_text(self) -> str:
        return f"{self.name}:{self.bribe}"


@dataclass(frozen=True)
class ColludeWatchdog(Strategy):
    bribe: int
    name = "collude_watchdog"

    def to_text(self) -> str:
        return f"{self.name}:{self.bribe}"


@dataclass(frozen=True)
class WatchdogSilent(Strategy):
    name = "watchdog_silent"


@dataclass(frozen=True)
class PublisherDrop(Strategy):
    name = "publisher_drop"


_WITH_ARGUMENT = {
    PublishRevoked.name: PublishRevoked,
    ColludePublisher.name: ColludePublisher,
    ColludeWatchdog.name: ColludeWatchdog,
}
_WITHOUT_ARGUMENT = {
    Honest.name: Honest,
    WatchdogSilent.name: WatchdogSilent,
    PublisherDrop.name: PublisherDrop,
}

PARTY_STRATEGIES = (Honest, PublishRevoked)
PUBLISHER_STRATEGIES = (Honest, ColludePublisher, PublisherDrop)
WATCHDOG_STRATEGIES = (Honest, ColludeWatchdog, WatchdogSilent)


def parse_strategy(text: Union[str, Strategy]) -> Strategy:
    """Parse `name` or `name:argument` into a Strategy."""
    if isinstance(text, Strategy):
        return text
    if not isinstance(text, str):
        raise ConfigInvalid(f"strategy must be a string, got {text!r}")

    name, _, argument = text.strip().partition(":")
    if name in _WITHOUT_ARGUMENT:
        if argument:
            raise ConfigInvalid(f"strategy {name} takes no argument")
        return _WITHOUT_ARGUMENT[name]()
    if name in _WITH_ARGUMENT:
        try:
            value = int(argument)
        except ValueError as e:
            raise ConfigInvalid(f"strategy {name} needs an integer argument, got {argument!r}") from e
        if value < 0:
            raise ConfigInvalid(f"strategy {name} argument must be >= 0")
        return _WITH_ARGUMENT[name](value)
    raise ConfigInvalid(f"unknown strategy {name!r}")


@dataclass(frozen=True)
class StrategySet:
    """One strategy per actor."""
    device: Strategy
    gateway: Strategy
    publishers: List[Strategy]
    watchdogs: List[Strategy]

    @classmethod
    def from_dict(cls, data: Dict[str, Any], k1: int, k2: int) -> "StrategySet":
        data = data or {}
        publishers = cls._pool(data.get("publisher", "honest"), k1, "publisher")
        watchdogs = cls._pool(data.get("watchdog", "honest"), k2, "watchdog")
        strategies = cls(
            device=parse_strategy(data.get("device", "honest")),
            gateway=parse_strategy(data.get("gateway", "honest")),
            publishers=publishers,
            watchdogs=watchdogs,
        )
        strategies._check_roles()
        return strategies

    @staticmethod
    def _pool(value: Any, size: int, role: str) -> List[Strategy]:
        if isinstance(value, (str, Strategy)):
            return [parse_strategy(value) for _ in range(size)]
        if not isinstance(value, list) or len(value) != size:
            raise ConfigInvalid(f"{role} strategies must be one string or a list of {size}")
        return [parse_strategy(v) for v in value]

    def _check_roles(self) -> None:
        for role, strategy, allowed in (
            ("device", self.device, PARTY_STRATEGIES),
            ("gateway", self.gateway, PARTY_STRATEGIES),
        ):
            if not isinstance(strategy, allowed):
                raise ConfigInvalid(f"{strategy.name} is not a {role} strategy")
        if all(isinstance(s, PublishRevoked) for s in (self.device, self.gateway)):
            raise ConfigInvalid("only one party can publish a revoked state")
        for role, pool, allowed in (
            ("publisher", self.publishers, PUBLISHER_STRATEGIES),
            ("watchdog", self.watchdogs, WATCHDOG_STRATEGIES),
        ):
            for strategy in pool:
                if not isinstance(strategy, allowed):
                    raise ConfigInvalid(f"{strategy.name} is not a {role} strategy")
            bribes = {s.bribe for s in pool if hasattr(s, "bribe")}
            if len(bribes) > 1:
                raise ConfigInvalid(f"colluding {role}s must agree on one bribe")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "device": self.device.to_text(),
            "gateway": self.gateway.to_text(),
            "publisher": [s.to_text() for s in self.publishers],
            "watchdog": [s.to_text() for s in self.watchdogs],
        }
