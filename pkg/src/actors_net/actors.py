"""
The four actor roles of a channel and the plumbing between them.

Messages posted during a block tick are delivered at the start of the next
one. The gateway and the pool members see the ledger through a ChainView,
which logs every query in the trace; the device gets no ChainView and learns
about the ledger only from messages.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from channel_protocol import (
    REVOCABLE_OUTPUT,
    Channel,
    ChannelError,
    ChannelKeys,
    CommitmentSide,
    RecoveryPackage,
    build_breach_remedy,
    build_delayed_sweep,
    prepare_recovery,
)
from common.logging_setup import build_logger
from ledger_sim import Chain, LedgerError, OutPoint, Transaction, txid
from script_engine import serialize_script, templates

from .strategies import ColludePublisher, Honest, PublishRevoked, Strategy
from .trace import (
    CHAIN_READ,
    DEVICE,
    DROP,
    GATEWAY,
    MESSAGE,
    NOTE,
    SUBMIT,
    ScenarioTrace,
    publisher_name,
    watchdog_name,
)

# what a submitted transaction is, for settlement detection
FUNDING = "funding"
CLOSE = "close"
COMMITMENT = "commitment"
RECOVERY = "recovery"
BREACH_REMEDY = "breach_remedy"
DELAYED_SWEEP = "delayed_sweep"
FINAL_KINDS = (CLOSE, RECOVERY, BREACH_REMEDY, DELAYED_SWEEP)


def fingerprint(tx: Transaction) -> bytes:
    """Identity of a transaction regardless of its unlocking scripts."""
    return txid(tx.blanked())


@dataclass(frozen=True)
class Message:
    sender: str
    recipient: str
    kind: str
    info: Dict[str, Any] = field(default_factory=dict)
    body: Any = None


class Network:
    """One-tick latency between every pair of actors."""

    def __init__(self, trace: ScenarioTrace):
        self.trace = trace
        self.actors: Dict[str, "Actor"] = {}
        self._in_flight: List[Message] = []

    def register(self, actor: "Actor") -> None:
        self.actors[actor.name] = actor
        actor.network = self

    def send(self, height: int, message: Message) -> None:
        self._in_flight.append(message)
        self.trace.record(height, message.sender, MESSAGE, to=message.recipient,
                          type=message.kind, **message.info)

    def deliver(self) -> None:
        pending, self._in_flight = self._in_flight, []
        for message in pending:
            self.actors[message.recipient].inbox.append(message)


class ChainView:
    """Ledger access for one actor; every call is written to the trace."""

    def __init__(self, chain: Chain, trace: ScenarioTrace, actor: str,
                 submissions: Dict[bytes, str]):
        self.chain = chain
        self.trace = trace
        self.actor = actor
        self.submissions = submissions

    def _read(self, query: str, **data: Any) -> None:
        self.trace.record(self.chain.height + 1, self.actor, CHAIN_READ, query=query, **data)

    def height(self) -> int:
        self._read("height")
        return self.chain.height

    def confirmation_height(self, tx_id: bytes) -> Optional[int]:
        self._read("confirmation_height", txid=tx_id.hex())
        return self.chain.confirmation_height(tx_id)

    def scan_for_spend(self, outpoint: OutPoint) -> Optional[Tuple[bytes, int]]:
        self._read("scan_for_spend", outpoint=str(outpoint))
        return self.chain.scan_for_spend(outpoint)

    def get_transaction(self, tx_id: bytes) -> Optional[Transaction]:
        self._read("get_transaction", txid=tx_id.hex())
        return self.chain.get_transaction(tx_id)

    def submit(self, tx: Transaction, kind: str) -> bool:
        """Hand a transaction to the mempool; False if it no longer validates."""
        height = self.chain.height + 1
        tx_id = txid(tx)
        try:
            self.chain.submit(tx)
        except LedgerError as e:
            self.trace.record(height, self.actor, DROP, txid=tx_id.hex(), tx_kind=kind,
                              reason=f"{type(e).__name__}: {e}")
            return False
        self.submissions[tx_id] = kind
        self.trace.channel_txids.append(tx_id)
        self.trace.record(height, self.actor, SUBMIT, txid=tx_id.hex(), tx_kind=kind)
        return True


class Actor:
    """Base actor: an inbox, a strategy and a step per block tick."""

    def __init__(self, name: str, strategy: Strategy, trace: ScenarioTrace):
        self.name = name
        self.strategy = strategy
        self.trace = trace
        self.inbox: List[Message] = []
        self.network: Optional[Network] = None
        self.logger = self._setup_logging()

    def _setup_logging(self):
        """Setup logging for the actor."""
        return build_logger(f"actor.{self.name}")

    def send(self, height: int, recipient: str, kind: str, body: Any = None, **info: Any) -> None:
        self.network.send(height, Message(self.name, recipient, kind, info, body))

    def take(self, kind: Optional[str] = None) -> List[Message]:
        """Remove and return inbox messages, optionally of one kind."""
        taken, kept = [], []
        for message in self.inbox:
            (taken if kind is None or message.kind == kind else kept).append(message)
        self.inbox = kept
        return taken

    def note(self, height: int, text: str, **data: Any) -> None:
        self.trace.record(height, self.name, NOTE, text=text, **data)
        self.logger.debug(f"[{height}] {text}")

    def step(self, height: int) -> None:
        raise NotImplementedError


class DeviceActor(Actor):
    """
    The IoT device. It signs and revokes states, hands its breach data to
    the watchdogs and answers their alerts, all without reading the ledger.
    """

    def __init__(self, channel: Channel, keys: ChannelKeys, strategy: Strategy,
                 trace: ScenarioTrace, updates: List[int], close_relay: str, miner_fee: int,
                 publishers: List[str], watchdogs: List[str]):
        super().__init__(DEVICE, strategy, trace)
        self.channel = channel
        self.keys = keys
        self.pending_updates = list(updates)
        self.close_relay = close_relay
        self.miner_fee = miner_fee
        self.publishers = publishers
        self.watchdogs = watchdogs

        self.funded = False
        self.awaiting_ack = False
        self.finished_updates = False
        self.recovering = False

    def _view(self):
        return self.channel.device

    def step(self, height: int) -> None:
        for message in self.take():
            handler = getattr(self, f"_on_{message.kind}", None)
            if handler is None:
                self.note(height, f"ignored {message.kind} from {message.sender}")
                continue
            handler(height, message)

        if not self.funded or self.awaiting_ack or self.finished_updates:
            return
        if self.pending_updates:
            balance = self.pending_updates.pop(0)
            self.awaiting_ack = True
            self.send(height, GATEWAY, "update_request", balance_a=balance)
            return

        self.finished_updates = True
        if isinstance(self.strategy, PublishRevoked):
            self._publish_revoked(height, self.strategy.state_index)
        else:
            self.send(height, GATEWAY, "close_request", relay=self.close_relay)

    def _on_funding_confirmed(self, height: int, message: Message) -> None:
        self.funded = True
        self.note(height, "channel funded", state=self.channel.current.index)

    def _on_update_ack(self, height: int, message: Message) -> None:
        self.awaiting_ack = False
        revoked = message.info["revoked"]
        pair = self._view().commitments[revoked]
        for watchdog in self.watchdogs:
            self.send(height, watchdog, "watch", state_index=revoked,
                      fingerprint=fingerprint(pair.tx_b).hex())

    def _on_close_signed(self, height: int, message: Message) -> None:
        for publisher in self.publishers:
            self.send(height, publisher, "publish", body=message.body, tx_kind=CLOSE)

    def _publish_revoked(self, height: int, state_index: int) -> None:
        tx = self._view().publishable(state_index)
        self.note(height, "publishing revoked commitment", state=state_index)
        for publisher in self.publishers:
            self.send(height, publisher, "publish", body=tx, tx_kind=COMMITMENT)

    def _on_alert(self, height: int, message: Message) -> None:
        if self.recovering:
            return
        state_index = message.info["state_index"]
        commitment: Transaction = message.body
        expected = fingerprint(self._view().commitments[state_index].tx_b)
        if fingerprint(commitment) != expected:
            self.note(height, "alert does not match a revoked commitment", sender=message.sender)
            return

        member = self.watchdogs.index(message.sender)
        try:
            package = prepare_recovery(
                self.channel.params, commitment, self.channel.state(state_index), member,
                self.keys.device, self.keys.pool, message.info["confirmation_height"], height,
                sweep_remote=True, miner_fee=self.miner_fee,
            )
        except ChannelError as e:
            self.note(height, f"cannot recover: {e}")
            return
        self.recovering = True
        self.logger.info(f"breach of state {state_index} reported by {message.sender}")
        self.send(height, message.sender, "recovery", body=package, state_index=state_index)


class GatewayActor(Actor):
    """The gateway: funds the channel, accepts updates, closes or cheats, and punishes."""

    def __init__(self, channel: Channel, keys: ChannelKeys, strategy: Strategy,
                 trace: ScenarioTrace, view: ChainView, funding_tx: Transaction,
                 close_timeout: int, miner_fee: int):
        super().__init__(GATEWAY, strategy, trace)
        self.channel = channel
        self.keys = keys
        self.view = view
        self.funding_tx = funding_tx
        self.close_timeout = close_timeout
        self.miner_fee = miner_fee

        self.funding_submitted = False
        self.funding_announced = False
        self.close_tx: Optional[Transaction] = None
        self.close_deadline: Optional[int] = None
        self.breach: Optional[Transaction] = None
        self.breach_state: Optional[int] = None
        self.swept = False
        self.punished = False
        self.watching_spends = False

    def step(self, height: int) -> None:
        if not self.funding_submitted:
            self.funding_submitted = self.view.submit(self.funding_tx, FUNDING)
            return
        if not self.funding_announced:
            if self.view.confirmation_height(txid(self.funding_tx)) is None:
                return
            self.funding_announced = True
            self.send(height, DEVICE, "funding_confirmed")

        for message in self.take():
            handler = getattr(self, f"_on_{message.kind}", None)
            if handler is not None:
                handler(height, message)

        if self.close_deadline is not None and height >= self.close_deadline:
            self._close_after_timeout(height)
        if self.breach is not None and not self.swept:
            self._sweep_when_mature(height)
        if self.watching_spends and not self.punished:
            self._punish_revoked_publication(height)

    def _on_update_request(self, height: int, message: Message) -> None:
        previous = self.channel.current.index
        try:
            state, _ = self.channel.update_state(message.info["balance_a"])
        except ChannelError as e:
            self.note(height, f"update refused: {e}")
            return
        self.watching_spends = True
        self.send(height, DEVICE, "update_ack", state_index=state.index, revoked=previous)

    def _on_close_request(self, height: int, message: Message) -> None:
        if isinstance(self.strategy, PublishRevoked):
            self._publish_revoked(height, self.strategy.state_index)
            return

        relayed = message.info.get("relay") == "publisher"
        self.close_tx = self.channel.close(relay_fee=relayed)
        if relayed:
            self.close_deadline = height + self.close_timeout
            self.send(height, DEVICE, "close_signed", body=self.close_tx)
        else:
            self.view.submit(self.close_tx, CLOSE)

    def _close_after_timeout(self, height: int) -> None:
        self.close_deadline = None
        if self.view.scan_for_spend(self.channel.funding.outpoint) is not None:
            return
        if txid(self.close_tx) in self.view.submissions:
            return
        self.logger.warning("relayed close not published by the pool; publishing it directly")
        self.view.submit(self.close_tx, CLOSE)

    def _publish_revoked(self, height: int, state_index: int) -> None:
        tx = self.channel.gateway.publishable(state_index)
        if self.view.submit(tx, COMMITMENT):
            self.breach, self.breach_state = tx, state_index
            self.logger.info(f"published revoked commitment of state {state_index}")

    def _sweep_when_mature(self, height: int) -> None:
        breach_id = txid(self.breach)
        confirmed = self.view.confirmation_height(breach_id)
        if confirmed is None or height - confirmed < self.channel.params.w:
            return
        if self.view.scan_for_spend(OutPoint(breach_id, REVOCABLE_OUTPUT)) is not None:
            self.swept = True
            self.note(height, "revocable output already claimed by the device")
            return
        sweep = build_delayed_sweep(
            self.breach, self.keys.gateway.slot("a", self.breach_state),
            self.keys.gateway.close().public_key, confirmed, height, self.channel.params.w,
            self.miner_fee,
        )
        self.swept = self.view.submit(sweep, DELAYED_SWEEP)

    def _punish_revoked_publication(self, height: int) -> None:
        spend = self.view.scan_for_spend(self.channel.funding.outpoint)
        if spend is None:
            return
        self.punished = True
        published = self.view.get_transaction(spend[0])
        gateway = self.channel.gateway
        for index in sorted(gateway.received_secrets):
            if fingerprint(published) != fingerprint(gateway.commitments[index].tx_a):
                continue
            self.logger.info(f"device published revoked state {index}; sweeping its output")
            remedy = build_breach_remedy(
                published, CommitmentSide.A, self.channel.state(index),
                self.keys.gateway.slot("b", index), self.keys.gateway.close().public_key,
                spend[1], height, self.channel.params.w, miner_fee=self.miner_fee,
            )
            self.view.submit(remedy, BREACH_REMEDY)
            return


class PublisherMember(Actor):
    """Publisher pool member: relays transactions for the device and claims σ₁."""

    def __init__(self, index: int, strategy: Strategy, trace: ScenarioTrace, view: ChainView,
                 pool_locking: bytes):
        super().__init__(publisher_name(index), strategy, trace)
        self.index = index
        self.view = view
        self.pool_locking = pool_locking

    def _drops(self, tx_kind: str) -> bool:
        if isinstance(self.strategy, ColludePublisher):
            return tx_kind == RECOVERY
        return not isinstance(self.strategy, Honest)

    def step(self, height: int) -> None:
        for message in self.take("publish"):
            tx_kind = message.info["tx_kind"]
            if self._drops(tx_kind):
                self.note(height, f"withholding {tx_kind}", strategy=self.strategy.to_text())
                continue
            tx: Transaction = message.body
            tx_id = txid(tx)
            if tx_id in self.view.submissions:
                continue
            if self.view.submit(tx, tx_kind):
                self._claim_pool_output(tx, tx_id)

    def _claim_pool_output(self, tx: Transaction, tx_id: bytes) -> None:
        for index, output in enumerate(tx.outputs):
            if serialize_script(output.locking) == self.pool_locking:
                self.trace.pool_claims[OutPoint(tx_id, index)] = self.name


class WatchdogMember(Actor):
    """Watchdog pool member: watches the funding output for revoked commitments b."""

    def __init__(self, index: int, strategy: Strategy, trace: ScenarioTrace, view: ChainView,
                 keys: ChannelKeys, funding_outpoint: OutPoint, alert_latency: int,
                 publishers: List[str]):
        super().__init__(watchdog_name(index), strategy, trace)
        self.index = index
        self.view = view
        self.keys = keys
        self.funding_outpoint = funding_outpoint
        self.alert_latency = alert_latency
        self.publishers = publishers

        self.watched: Dict[bytes, int] = {}
        self.alerted = False

    @property
    def active(self) -> bool:
        return isinstance(self.strategy, Honest)

    def step(self, height: int) -> None:
        for message in self.take("watch"):
            self.watched[bytes.fromhex(message.info["fingerprint"])] = message.info["state_index"]
        for message in self.take("recovery"):
            self._forward_recovery(height, message.body)

        if self.active and self.watched and not self.alerted:
            self._check_for_breach(height)

    def _check_for_breach(self, height: int) -> None:
        spend = self.view.scan_for_spend(self.funding_outpoint)
        if spend is None:
            return
        spender, confirmed = spend
        if height < confirmed + self.alert_latency:
            return
        self.alerted = True
        published = self.view.get_transaction(spender)
        state_index = self.watched.get(fingerprint(published))
        if state_index is None:
            return
        self.logger.info(f"revoked commitment of state {state_index} confirmed at {confirmed}")
        self.send(height, DEVICE, "alert", body=published, state_index=state_index,
                  confirmation_height=confirmed)

    def _forward_recovery(self, height: int, package: RecoveryPackage) -> None:
        if not self.active:
            self.note(height, "withholding recovery signature")
            return
        tx = package.complete(self.keys.watchdog(self.index).secret_key)
        for publisher in self.publishers:
            self.send(height, publisher, "publish", body=tx, tx_kind=RECOVERY)


def pool_locking(keys: ChannelKeys) -> bytes:
    return serialize_script(templates.multisig(1, keys.pool.publishers))
