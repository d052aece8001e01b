"""Block-synchronous simulation of the device, the gateway and the two pools."""

from .errors import ScenarioError, ConfigInvalid, HorizonExceeded, Unsettled, Violation
from .strategies import (
    Strategy,
    Honest,
    PublishRevoked,
    ColludePublisher,
    ColludeWatchdog,
    WatchdogSilent,
    PublisherDrop,
    StrategySet,
    parse_strategy,
)
from .scenario import ScenarioConfig, load_scenario, override
from .trace import TraceEvent, ScenarioTrace, PUBLISHER_POOL, publisher_name, watchdog_name
from .actors import (
    Message,
    Network,
    ChainView,
    Actor,
    DeviceActor,
    GatewayActor,
    PublisherMember,
    WatchdogMember,
    fingerprint,
)
from .runner import ScenarioRunner, run_scenario
from .settlement import AuditResult, settle, pool_totals, device_interface_audit

__all__ = [
    "ScenarioError",
    "ConfigInvalid",
    "HorizonExceeded",
    "Unsettled",
    "Violation",
    "Strategy",
    "Honest",
    "PublishRevoked",
    "ColludePublisher",
    "ColludeWatchdog",
    "WatchdogSilent",
    "PublisherDrop",
    "StrategySet",
    "parse_strategy",
    "ScenarioConfig",
    "load_scenario",
    "override",
    "TraceEvent",
    "ScenarioTrace",
    "PUBLISHER_POOL",
    "publisher_name",
    "watchdog_name",
    "Message",
    "Network",
    "ChainView",
    "Actor",
    "DeviceActor",
    "GatewayActor",
    "PublisherMember",
    "WatchdogMember",
    "fingerprint",
    "ScenarioRunner",
    "run_scenario",
    "AuditResult",
    "settle",
    "pool_totals",
    "device_interface_audit",
]
