"""Final balances of a finished scenario and the device isolation audit."""

from dataclasses import dataclass, field
from typing import Any, Dict, List

from script_engine import serialize_script

from .errors import Unsettled, Violation
from .trace import CHAIN_READ, DEVICE, ScenarioTrace, TraceEvent


def settle(trace: ScenarioTrace) -> Dict[str, int]:
    """
    Value each actor ends with: unspent outputs paying its keys, pool outputs
    of the member that published them, plus off-chain side payments.
    """
    if not trace.terminated:
        raise Unsettled(f"scenario {trace.name} has not reached settlement")

    balances = {role: 0 for role in trace.roles}
    for outpoint, entry in sorted(trace.chain.utxo.items(),
                                  key=lambda item: (item[0].txid, item[0].output_index)):
        owner = trace.pool_claims.get(outpoint)
        if owner is None:
            owner = trace.owners.get(serialize_script(entry.output.locking).hex())
        if owner is None:
            raise Unsettled(f"no actor owns {outpoint} ({entry.output.value} sat)")
        balances[owner] += entry.output.value

    for payment in trace.side_payments:
        balances[payment["from"]] -= payment["value"]
        balances[payment["to"]] += payment["value"]
    return balances


def pool_totals(balances: Dict[str, int]) -> Dict[str, int]:
    """Sum member balances into one figure per pool."""
    totals = {"publishers": 0, "watchdogs": 0}
    for role, value in balances.items():
        if role.startswith("publisher"):
            totals["publishers"] += value
        elif role.startswith("watchdog["):
            totals["watchdogs"] += value
    return totals


@dataclass
class AuditResult:
    violations: List[TraceEvent] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_for_violation(self) -> None:
        if self.violations:
            raise Violation(self.violations[0])

    def to_dict(self) -> Dict[str, Any]:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


def device_interface_audit(trace: ScenarioTrace) -> AuditResult:
    """The device may only learn about the ledger through messages."""
    return AuditResult([e for e in trace.events if e.kind == CHAIN_READ and e.actor == DEVICE])
