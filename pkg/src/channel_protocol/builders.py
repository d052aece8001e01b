"""
Builders for the channel transactions.

    funding        inputs of A and B -> P2SH(2-of-2 funding keys) [+ change]
    commitment a   funding -> [to-A revocable, to-B, publisher pool]
    commitment b   funding -> [to-B revocable with watchdog, to-A]
    mutual close   funding -> [A close key, B close key (, publisher pool)]
    breach remedy  revocable output of a revoked commitment -> beneficiary
    recovery       commitment b to-B output (+ its to-A output) -> [A, watchdog, publisher pool]
    delayed sweep  revocable output of an own commitment, after W blocks -> owner

Every transaction has all unlocking scripts blanked while it is signed, so the
signatures of every signer and every input cover the same digest.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from crypto_keys import DEFAULT_SCHEME, Keypair, KeyChain, Party, SignatureScheme
from ledger_sim import OutPoint, Transaction, TxInput, TxOutput, sign_input, txid
from script_engine import Script
from script_engine import templates

from .errors import (
    BadMemberIndex,
    BalanceOutOfRange,
    BudgetExceeded,
    DescriptorInvalid,
    InsufficientFunds,
    MissingSignature,
    NotRevoked,
    StateExhausted,
    TimelockActive,
    WindowExpired,
)
from .keys import PoolKeys, StateKeys
from .params import ChannelParams, ChannelState

REVOCABLE_OUTPUT = 0
REMOTE_OUTPUT = 1
POOL_OUTPUT = 2


class CommitmentSide(Enum):
    """Which commitment of a pair: tx_a is published by A, tx_b by B."""
    A = "a"
    B = "b"


@dataclass(frozen=True)
class SpendableInput:
    """A P2PKH coin and the key that unlocks it."""
    outpoint: OutPoint
    value: int
    keypair: Keypair


@dataclass(frozen=True)
class FundingOutput:
    """The channel's funding outpoint and its 2-of-2 redeem script."""
    outpoint: OutPoint
    value: int
    redeem_script: Script

    @property
    def locking(self) -> Script:
        return templates.p2sh(self.redeem_script)


def _sign_p2pkh_inputs(tx: Transaction, keypairs: Sequence[Keypair],
                       scheme: SignatureScheme) -> Transaction:
    signed = tx
    for index, keypair in enumerate(keypairs):
        sig = sign_input(tx, index, keypair.secret_key, scheme)
        signed = signed.with_unlocking(index, templates.p2pkh_witness(sig, keypair.public_key))
    return signed


def build_funding_tx(params: ChannelParams, inputs_a: Sequence[SpendableInput],
                     inputs_b: Sequence[SpendableInput], funding_keys: Tuple[bytes, bytes],
                     miner_fee: int = 0,
                     scheme: SignatureScheme = DEFAULT_SCHEME) -> Tuple[Transaction, FundingOutput]:
    """
    Lock Ω_A + Ω_B behind P2SH of `2 <pk_A_FT> <pk_B_FT> 2 CHECKMULTISIG`.
    A's inputs also cover the miner fee; any surplus returns as change to the
    key of each side's first input.
    """
    total_a = sum(i.value for i in inputs_a)
    total_b = sum(i.value for i in inputs_b)
    if total_a < params.omega_a + miner_fee:
        raise InsufficientFunds(
            f"A's inputs hold {total_a}, need {params.omega_a + miner_fee}"
        )
    if total_b < params.omega_b:
        raise InsufficientFunds(f"B's inputs hold {total_b}, need {params.omega_b}")

    redeem = templates.funding_redeem_script(*funding_keys)
    outputs = [TxOutput(params.capacity, templates.p2sh(redeem))]
    change_a = total_a - params.omega_a - miner_fee
    change_b = total_b - params.omega_b
    if change_a:
        outputs.append(TxOutput(change_a, templates.p2pkh(inputs_a[0].keypair.public_key)))
    if change_b:
        outputs.append(TxOutput(change_b, templates.p2pkh(inputs_b[0].keypair.public_key)))

    coins = list(inputs_a) + list(inputs_b)
    tx = Transaction(
        inputs=tuple(TxInput(c.outpoint) for c in coins),
        outputs=tuple(outputs),
    )
    signed = _sign_p2pkh_inputs(tx, [c.keypair for c in coins], scheme)
    return signed, FundingOutput(OutPoint(txid(signed), 0), params.capacity, redeem)


def funding_witness(funding: FundingOutput, sig_a: bytes, sig_b: bytes) -> Script:
    return templates.p2sh_multisig_witness([sig_a, sig_b], funding.redeem_script)


@dataclass(frozen=True)
class CommitmentPair:
    """
    Commitments of one state. Each carries only the counterparty's half of the
    2-of-2 funding signature, so only the named party can complete it.
    """
    state_index: int
    tx_a: Transaction
    tx_b: Transaction
    funding: FundingOutput
    sig_b_on_tx_a: Optional[bytes] = None
    sig_a_on_tx_b: Optional[bytes] = None

    def unsigned(self, side: CommitmentSide) -> Transaction:
        return self.tx_a if side is CommitmentSide.A else self.tx_b

    def countersign(self, side: CommitmentSide, counterparty_secret: bytes,
                    scheme: SignatureScheme = DEFAULT_SCHEME) -> "CommitmentPair":
        """Add the counterparty's funding signature to the tx published by `side`."""
        sig = sign_input(self.unsigned(side), 0, counterparty_secret, scheme)
        if side is CommitmentSide.A:
            return replace(self, sig_b_on_tx_a=sig)
        return replace(self, sig_a_on_tx_b=sig)

    def complete(self, side: CommitmentSide, own_funding_secret: bytes,
                 scheme: SignatureScheme = DEFAULT_SCHEME) -> Transaction:
        """Finish the tx published by `side` with that party's own funding signature."""
        tx = self.unsigned(side)
        own_sig = sign_input(tx, 0, own_funding_secret, scheme)
        if side is CommitmentSide.A:
            if self.sig_b_on_tx_a is None:
                raise MissingSignature(f"commitment {self.state_index}a lacks B's signature")
            sigs = (own_sig, self.sig_b_on_tx_a)
        else:
            if self.sig_a_on_tx_b is None:
                raise MissingSignature(f"commitment {self.state_index}b lacks A's signature")
            sigs = (self.sig_a_on_tx_b, own_sig)
        return tx.with_unlocking(0, funding_witness(self.funding, *sigs))


def _check_state(params: ChannelParams, state: ChannelState, funding: FundingOutput) -> None:
    if state.index > params.max_states:
        raise StateExhausted(f"state {state.index} beyond max_states {params.max_states}")
    if state.total != funding.value:
        raise BalanceOutOfRange(
            f"state {state.index} balances sum to {state.total}, funding holds {funding.value}"
        )


def build_commitment_pair(params: ChannelParams, state: ChannelState, keys: StateKeys,
                          funding: FundingOutput, miner_fee: int = 0) -> CommitmentPair:
    """Unsigned tx_a/tx_b for one state; the publisher pays the miner fee."""
    _check_state(params, state, funding)
    alpha, beta = state.balance_a, state.balance_b
    if alpha < params.sigma1 + miner_fee:
        raise BudgetExceeded(
            f"A's balance {alpha} cannot fund sigma1 {params.sigma1} plus miner fee {miner_fee}"
        )
    if beta < miner_fee:
        raise BudgetExceeded(f"B's balance {beta} cannot fund miner fee {miner_fee}")

    funding_input = (TxInput(funding.outpoint),)
    tx_a = Transaction(
        inputs=funding_input,
        outputs=(
            TxOutput(alpha - params.sigma1 - miner_fee,
                     templates.device_to_local(params.w, keys.a_a, keys.b_b, keys.a_c)),
            TxOutput(beta, templates.p2pkh(keys.b_b)),
            TxOutput(params.sigma1, templates.multisig(1, keys.pool.publishers)),
        ),
    )
    tx_b = Transaction(
        inputs=funding_input,
        outputs=(
            TxOutput(beta - miner_fee,
                     templates.gateway_to_local(params.w, keys.b_a, keys.pool.watchdogs,
                                                keys.b_c, keys.a_b)),
            TxOutput(alpha, templates.p2pkh(keys.a_b)),
        ),
    )
    return CommitmentPair(state.index, tx_a, tx_b, funding)


def build_mutual_close(params: ChannelParams, state: ChannelState,
                       close_keys: Tuple[bytes, bytes], funding: FundingOutput,
                       funding_secrets: Dict[Party, bytes], relay_fee: bool = False,
                       pool: Optional[PoolKeys] = None, miner_fee: int = 0,
                       scheme: SignatureScheme = DEFAULT_SCHEME) -> Transaction:
    """
    Final balances to the close keys. With `relay_fee` the device pays σ₁ to
    the publisher pool so a publisher relays the close for it. A also pays
    the miner fee.
    """
    _check_state(params, state, funding)
    missing = [p.name for p in (Party.A, Party.B) if funding_secrets.get(p) is None]
    if missing:
        raise MissingSignature(f"mutual close needs signatures of {', '.join(missing)}")
    if relay_fee and pool is None:
        raise DescriptorInvalid("relayed close needs the publisher pool keys")

    pool_fee = params.sigma1 if relay_fee else 0
    to_a = state.balance_a - pool_fee - miner_fee
    if to_a < 0:
        raise BudgetExceeded(
            f"A's balance {state.balance_a} cannot fund relay fee {pool_fee} and miner fee {miner_fee}"
        )

    outputs = [
        TxOutput(to_a, templates.p2pkh(close_keys[0])),
        TxOutput(state.balance_b, templates.p2pkh(close_keys[1])),
    ]
    if relay_fee:
        outputs.append(TxOutput(pool_fee, templates.multisig(1, pool.publishers)))

    tx = Transaction(inputs=(TxInput(funding.outpoint),), outputs=tuple(outputs))
    sig_a = sign_input(tx, 0, funding_secrets[Party.A], scheme)
    sig_b = sign_input(tx, 0, funding_secrets[Party.B], scheme)
    return tx.with_unlocking(0, funding_witness(funding, sig_a, sig_b))


def _check_window(state: ChannelState, confirmation_height: int, at_height: int, w: int) -> None:
    if not state.revoked:
        raise NotRevoked(f"state {state.index} is current; its commitments cannot be punished")
    if at_height - confirmation_height >= w:
        raise WindowExpired(
            f"commitment confirmed at {confirmation_height} matures at "
            f"{confirmation_height + w}; too late at {at_height}"
        )


def build_breach_remedy(published_commitment: Transaction, side: CommitmentSide,
                        state: ChannelState, own_slot_b: Keypair, beneficiary_pubkey: bytes,
                        confirmation_height: int, at_height: int, w: int,
                        watchdog: Optional[Keypair] = None, miner_fee: int = 0,
                        scheme: SignatureScheme = DEFAULT_SCHEME) -> Transaction:
    """
    Sweep the revocable output of a revoked commitment through its ELSE
    branch: the beneficiary's own slot-b key and the cheater's revealed
    slot-c secret, plus one watchdog signature when punishing tx_b.
    """
    _check_window(state, confirmation_height, at_height, w)
    secret = state.revocation_secret_a if side is CommitmentSide.A else state.revocation_secret_b
    if side is CommitmentSide.B and watchdog is None:
        raise MissingSignature("punishing commitment b needs a watchdog signature")

    value = published_commitment.outputs[REVOCABLE_OUTPUT].value - miner_fee
    if value < 0:
        raise BudgetExceeded(f"miner fee {miner_fee} exceeds the revocable output")

    tx = Transaction(
        inputs=(TxInput(OutPoint(txid(published_commitment), REVOCABLE_OUTPUT)),),
        outputs=(TxOutput(value, templates.p2pkh(beneficiary_pubkey)),),
    )
    own_sig = sign_input(tx, 0, own_slot_b.secret_key, scheme)
    revealed_sig = sign_input(tx, 0, secret, scheme)
    revealed_pk = scheme.public_key(secret)
    if side is CommitmentSide.A:
        witness = templates.device_revocation_witness(own_sig, own_slot_b.public_key,
                                                      revealed_sig, revealed_pk)
    else:
        watchdog_sig = sign_input(tx, 0, watchdog.secret_key, scheme)
        witness = templates.gateway_revocation_witness(own_sig, own_slot_b.public_key,
                                                       revealed_sig, revealed_pk, watchdog_sig)
    return tx.with_unlocking(0, witness)


@dataclass(frozen=True)
class RecoveryPackage:
    """Recovery tx signed by the device, waiting for the watchdog member's signature."""
    tx: Transaction
    member_index: int
    sig_a_b: bytes
    pk_a_b: bytes
    sig_b_c: bytes
    pk_b_c: bytes

    def unlocking(self, watchdog_sig: bytes) -> Script:
        return templates.gateway_revocation_witness(self.sig_a_b, self.pk_a_b, self.sig_b_c,
                                                    self.pk_b_c, watchdog_sig)

    def with_watchdog_signature(self, watchdog_sig: bytes) -> Transaction:
        tx = self.tx.with_unlocking(0, self.unlocking(watchdog_sig))
        if len(tx.inputs) > 1:
            tx = tx.with_unlocking(1, templates.p2pkh_witness(self.sig_a_b, self.pk_a_b))
        return tx

    def complete(self, watchdog_secret: bytes,
                 scheme: SignatureScheme = DEFAULT_SCHEME) -> Transaction:
        return self.with_watchdog_signature(sign_input(self.tx, 0, watchdog_secret, scheme))


def prepare_recovery(params: ChannelParams, commitment_b: Transaction, state: ChannelState,
                     member_index: int, device_keys: KeyChain, pool: PoolKeys,
                     confirmation_height: int, at_height: int, sweep_remote: bool = False,
                     miner_fee: int = 0,
                     scheme: SignatureScheme = DEFAULT_SCHEME) -> RecoveryPackage:
    """
    Device half of the recovery transaction for a revoked commitment b.

    Outputs: [A recovery key, γ₁ to watchdog member ω, σ₁ to the publisher
    pool]. With `sweep_remote` the device's own to-A output of the same
    commitment is spent as a second input and added to A's output.
    """
    _check_window(state, confirmation_height, at_height, params.w)
    if not 0 <= member_index < params.k2:
        raise BadMemberIndex(f"watchdog {member_index} outside 0..{params.k2 - 1}")

    commitment_id = txid(commitment_b)
    inputs: List[TxInput] = [TxInput(OutPoint(commitment_id, REVOCABLE_OUTPUT))]
    value_in = commitment_b.outputs[REVOCABLE_OUTPUT].value
    if sweep_remote:
        inputs.append(TxInput(OutPoint(commitment_id, REMOTE_OUTPUT)))
        value_in += commitment_b.outputs[REMOTE_OUTPUT].value

    to_device = value_in - params.gamma1 - params.sigma1 - miner_fee
    if to_device < 0:
        raise BudgetExceeded(
            f"recovered value {value_in} cannot fund gamma1 {params.gamma1}, "
            f"sigma1 {params.sigma1} and miner fee {miner_fee}"
        )

    tx = Transaction(
        inputs=tuple(inputs),
        outputs=(
            TxOutput(to_device, templates.p2pkh(device_keys.recovery(state.index).public_key)),
            TxOutput(params.gamma1, templates.p2pkh(pool.watchdogs[member_index])),
            TxOutput(params.sigma1, templates.multisig(1, pool.publishers)),
        ),
    )
    slot_b = device_keys.slot("b", state.index)
    return RecoveryPackage(
        tx=tx,
        member_index=member_index,
        sig_a_b=sign_input(tx, 0, slot_b.secret_key, scheme),
        pk_a_b=slot_b.public_key,
        sig_b_c=sign_input(tx, 0, state.revocation_secret_b, scheme),
        pk_b_c=scheme.public_key(state.revocation_secret_b),
    )


def build_recovery_tx(params: ChannelParams, commitment_b: Transaction, state: ChannelState,
                      member_index: int, device_keys: KeyChain, pool: PoolKeys,
                      watchdog_secret: bytes, confirmation_height: int, at_height: int,
                      sweep_remote: bool = False, miner_fee: int = 0,
                      scheme: SignatureScheme = DEFAULT_SCHEME) -> Transaction:
    """Fully signed recovery transaction."""
    package = prepare_recovery(params, commitment_b, state, member_index, device_keys, pool,
                               confirmation_height, at_height, sweep_remote, miner_fee, scheme)
    return package.complete(watchdog_secret, scheme)


def build_delayed_sweep(commitment: Transaction, owner_slot_a: Keypair, destination_pubkey: bytes,
                        confirmation_height: int, at_height: int, w: int, miner_fee: int = 0,
                        scheme: SignatureScheme = DEFAULT_SCHEME) -> Transaction:
    """
    Spend the revocable output of one's own commitment through the IF
    branch once it is W blocks deep.
    """
    if at_height - confirmation_height < w:
        raise TimelockActive(
            f"revocable output confirmed at {confirmation_height} is locked until "
            f"{confirmation_height + w}"
        )
    value = commitment.outputs[REVOCABLE_OUTPUT].value - miner_fee
    if value < 0:
        raise BudgetExceeded(f"miner fee {miner_fee} exceeds the revocable output")

    tx = Transaction(
        inputs=(TxInput(OutPoint(txid(commitment), REVOCABLE_OUTPUT), sequence=w),),
        outputs=(TxOutput(value, templates.p2pkh(destination_pubkey)),),
    )
    sig = sign_input(tx, 0, owner_slot_a.secret_key, scheme)
    return tx.with_unlocking(0, templates.timelocked_witness(sig, owner_slot_a.public_key))
