"""
Channel state machine.

Each party keeps its own view: the commitment it can publish for every state
(already countersigned by the other side) and the slot-c secrets the other
side handed over when those states were revoked. Updates move between the
views only as explicit messages.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from common.logging_setup import build_logger
from crypto_keys import DeviceKeyStore, KeyChain, Party
from ledger_sim import Transaction

from .builders import (
    CommitmentPair,
    CommitmentSide,
    FundingOutput,
    build_commitment_pair,
    build_mutual_close,
)
from .errors import BalanceOutOfRange, ChannelClosed, InvalidRevocation, StateExhausted
from .keys import ChannelKeys
from .params import ChannelParams, ChannelState

SIDE_OF = {Party.A: CommitmentSide.A, Party.B: CommitmentSide.B}


@dataclass(frozen=True)
class CommitmentSignatures:
    """Funding signature a party sends for the counterparty's commitment of a state."""
    sender: Party
    state_index: int
    signature: bytes


@dataclass(frozen=True)
class RevocationMessage:
    """Slot-c secret of a superseded state, handed to the counterparty."""
    sender: Party
    state_index: int
    secret_key: bytes

    def to_dict(self) -> Dict[str, object]:
        # the secret stays out of traces and reports
        return {"sender": self.sender.name, "state_index": self.state_index}


@dataclass
class PartyView:
    """What one party holds about the channel."""
    party: Party
    keychain: KeyChain
    commitments: Dict[int, CommitmentPair] = field(default_factory=dict)
    received_secrets: Dict[int, bytes] = field(default_factory=dict)

    @property
    def side(self) -> CommitmentSide:
        return SIDE_OF[self.party]

    def countersign(self, pair: CommitmentPair) -> CommitmentSignatures:
        """Sign the counterparty's commitment of a new state."""
        other = CommitmentSide.B if self.side is CommitmentSide.A else CommitmentSide.A
        signed = pair.countersign(other, self.keychain.funding().secret_key, self.keychain.scheme)
        sig = signed.sig_b_on_tx_a if other is CommitmentSide.A else signed.sig_a_on_tx_b
        return CommitmentSignatures(self.party, pair.state_index, sig)

    def accept_commitment(self, pair: CommitmentPair, message: CommitmentSignatures) -> None:
        if self.side is CommitmentSide.A:
            pair = replace(pair, sig_b_on_tx_a=message.signature)
        else:
            pair = replace(pair, sig_a_on_tx_b=message.signature)
        self.commitments[pair.state_index] = pair

    def revoke(self, state_index: int) -> RevocationMessage:
        secret = self.keychain.slot("c", state_index).secret_key
        return RevocationMessage(self.party, state_index, secret)

    def receive_revocation(self, message: RevocationMessage, expected_pubkey: bytes) -> None:
        if self.keychain.scheme.public_key(message.secret_key) != expected_pubkey:
            raise InvalidRevocation(
                f"secret from {message.sender.name} does not match slot c of state "
                f"{message.state_index}"
            )
        self.received_secrets[message.state_index] = message.secret_key

    def publishable(self, state_index: int) -> Transaction:
        """This party's completed commitment of a state."""
        pair = self.commitments[state_index]
        return pair.complete(self.side, self.keychain.funding().secret_key, self.keychain.scheme)


class Channel:
    """Off-chain state of one device/gateway channel."""

    def __init__(self, params: ChannelParams, keys: ChannelKeys, funding: FundingOutput,
                 miner_fee: int = 0):
        self.params = params
        self.keys = keys
        self.funding = funding
        self.miner_fee = miner_fee
        self.logger = self._setup_logging()

        self.states: List[ChannelState] = []
        self.pairs: Dict[int, CommitmentPair] = {}
        self.device = PartyView(Party.A, keys.device)
        self.gateway = PartyView(Party.B, keys.gateway)
        self.messages: List[object] = []
        self.closed = False

    def _setup_logging(self):
        """Setup logging for the channel."""
        return build_logger("channel")

    @classmethod
    def open(cls, params: ChannelParams, keys: ChannelKeys, funding: FundingOutput,
             initial_balance_a: Optional[int] = None, miner_fee: int = 0) -> "Channel":
        """Create state 1 with (Ω_A, Ω_B), or another split of the capacity."""
        channel = cls(params, keys, funding, miner_fee)
        balance_a = params.omega_a if initial_balance_a is None else initial_balance_a
        channel._check_balance(balance_a)
        channel._add_state(balance_a)
        channel.logger.info(
            f"channel opened on {funding.outpoint} with state 1 = "
            f"({balance_a}, {params.capacity - balance_a})"
        )
        return channel

    @property
    def current(self) -> ChannelState:
        return self.states[-1]

    def state(self, index: int) -> ChannelState:
        return self.states[index - 1]

    def view(self, party: Party) -> PartyView:
        return self.device if party is Party.A else self.gateway

    def _check_balance(self, balance_a: int) -> None:
        if not 0 <= balance_a <= self.params.capacity:
            raise BalanceOutOfRange(f"balance {balance_a} outside 0..{self.params.capacity}")

    def _add_state(self, balance_a: int) -> ChannelState:
        index = len(self.states) + 1
        if index > self.params.max_states:
            raise StateExhausted(f"all {self.params.max_states} states used")
        state = ChannelState(index, balance_a, self.params.capacity - balance_a)
        pair = build_commitment_pair(self.params, state, self.keys.state(index), self.funding,
                                     self.miner_fee)

        # each side countersigns the other's commitment
        for_device = self.gateway.countersign(pair)
        for_gateway = self.device.countersign(pair)
        self.messages.extend([for_device, for_gateway])
        self.device.accept_commitment(pair, for_device)
        self.gateway.accept_commitment(pair, for_gateway)

        self.pairs[index] = pair
        self.states.append(state)
        return state

    def update_state(self, new_balance_a: int) -> Tuple[ChannelState, List[RevocationMessage]]:
        """Move to state j+1 and revoke state j by exchanging slot-c secrets.

        Raises BudgetExceeded when new_balance_a cannot cover sigma1 plus the
        miner fee, since tx_a pays the publisher pool from the device output.
        The channel is left unchanged in that case.
        """
        if self.closed:
            raise ChannelClosed("channel already closed")
        self._check_balance(new_balance_a)

        previous = self.current
        new_state = self._add_state(new_balance_a)

        from_device = self.device.revoke(previous.index)
        from_gateway = self.gateway.revoke(previous.index)
        state_keys = self.keys.state(previous.index)
        self.gateway.receive_revocation(from_device, state_keys.a_c)
        self.device.receive_revocation(from_gateway, state_keys.b_c)

        previous.revocation_secret_a = from_device.secret_key
        previous.revocation_secret_b = from_gateway.secret_key
        previous.revoked = True

        revocations = [from_device, from_gateway]
        self.messages.extend(revocations)
        self.logger.info(
            f"state {new_state.index} = ({new_state.balance_a}, {new_state.balance_b}); "
            f"state {previous.index} revoked"
        )
        return new_state, revocations

    def close(self, relay_fee: bool = False, miner_fee: Optional[int] = None) -> Transaction:
        """Signed mutual close of the current state; no further updates afterwards."""
        if self.closed:
            raise ChannelClosed("channel already closed")
        tx = build_mutual_close(
            self.params,
            self.current,
            (self.keys.device.close().public_key, self.keys.gateway.close().public_key),
            self.funding,
            {
                Party.A: self.keys.device.funding().secret_key,
                Party.B: self.keys.gateway.funding().secret_key,
            },
            relay_fee=relay_fee,
            pool=self.keys.pool,
            miner_fee=self.miner_fee if miner_fee is None else miner_fee,
        )
        self.closed = True
        self.logger.info(f"mutual close of state {self.current.index} built")
        return tx

    def device_store(self) -> DeviceKeyStore:
        """The record the device persists for the current state."""
        return DeviceKeyStore(
            master_seed=self.keys.device.master_seed,
            state_index=self.current.index,
            balance_a=self.current.balance_a,
            balance_b=self.current.balance_b,
        )

    def balances_a(self) -> List[int]:
        return [s.balance_a for s in self.states]
