"""
Scenario trace: the per-block event log of a run plus everything needed to
settle it afterwards (final chain, key directory, pool claims and off-chain
side payments).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from common.reporting import canonical_json
from ledger_sim import Chain, OutPoint

# event kinds
MESSAGE = "message"
SUBMIT = "submit"
CONFIRM = "confirm"
CHAIN_READ = "chain_read"
DROP = "drop"
NOTE = "note"
SIDE_PAYMENT = "side_payment"

DEVICE = "device"
GATEWAY = "gateway"
# pool outputs no member claimed
PUBLISHER_POOL = "publisher_pool"


def publisher_name(index: int) -> str:
    return f"publisher[{index}]"


def watchdog_name(index: int) -> str:
    return f"watchdog[{index}]"


@dataclass(frozen=True)
class TraceEvent:
    height: int
    actor: str
    kind: str
    data: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"height": self.height, "actor": self.actor, "kind": self.kind, "data": self.data}


@dataclass
class ScenarioTrace:
    name: str
    chain: Chain
    roles: List[str]
    owners: Dict[str, str] = field(default_factory=dict)
    events: List[TraceEvent] = field(default_factory=list)
    channel_txids: List[bytes] = field(default_factory=list)
    pool_claims: Dict[OutPoint, str] = field(default_factory=dict)
    side_payments: List[Dict[str, Any]] = field(default_factory=list)
    outcome: Optional[str] = None
    settled_height: Optional[int] = None
    breach_height: Optional[int] = None
    recovery_height: Optional[int] = None

    def record(self, height: int, actor: str, kind: str, **data: Any) -> TraceEvent:
        event = TraceEvent(height, actor, kind, data)
        self.events.append(event)
        return event

    def events_of(self, kind: Optional[str] = None, actor: Optional[str] = None) -> List[TraceEvent]:
        return [
            e for e in self.events
            if (kind is None or e.kind == kind) and (actor is None or e.actor == actor)
        ]

    @property
    def terminated(self) -> bool:
        return self.outcome is not None

    def confirmed_channel_txs(self) -> List[bytes]:
        """Channel transactions (funding, commitments, closes, sweeps) that made it on chain."""
        return [t for t in self.channel_txids if self.chain.confirmation_height(t) is not None]

    def to_jsonl(self) -> str:
        """One canonical JSON object per event."""
        return "".join(canonical_json(e.to_dict()) + "\n" for e in self.events)

    def summary(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "outcome": self.outcome,
            "blocks": self.chain.height,
            "settled_height": self.settled_height,
            "breach_height": self.breach_height,
            "recovery_height": self.recovery_height,
            "on_chain_channel_txs": len(self.confirmed_channel_txs()),
            "channel_txids": [t.hex() for t in self.confirmed_channel_txs()],
            "events": len(self.events),
            "side_payments": list(self.side_payments),
            "dropped": [d.to_dict() for d in self.chain.dropped],
        }
