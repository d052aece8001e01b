"""Funding, commitment, revocation, close and recovery of a device/gateway channel."""

from .errors import (
    ChannelError,
    DescriptorInvalid,
    InsufficientFunds,
    StateExhausted,
    BudgetExceeded,
    ChannelClosed,
    BalanceOutOfRange,
    MissingSignature,
    InvalidRevocation,
    WindowExpired,
    NotRevoked,
    BadMemberIndex,
    EmptyStates,
    TimelockActive,
)
from .params import ChannelParams, ChannelState, ChannelDescriptor, load_descriptor
from .keys import ChannelKeys, PoolKeys, StateKeys, default_pool_seed
from .builders import (
    REVOCABLE_OUTPUT,
    REMOTE_OUTPUT,
    POOL_OUTPUT,
    CommitmentSide,
    SpendableInput,
    FundingOutput,
    CommitmentPair,
    RecoveryPackage,
    build_funding_tx,
    funding_witness,
    build_commitment_pair,
    build_mutual_close,
    build_breach_remedy,
    prepare_recovery,
    build_recovery_tx,
    build_delayed_sweep,
)
from .channel import Channel, PartyView, CommitmentSignatures, RevocationMessage
from .fees import FeeBoundCheck, check_fee_bounds, fee_bounds

__all__ = [
    "ChannelError",
    "DescriptorInvalid",
    "InsufficientFunds",
    "StateExhausted",
    "BudgetExceeded",
    "ChannelClosed",
    "BalanceOutOfRange",
    "MissingSignature",
    "InvalidRevocation",
    "WindowExpired",
    "NotRevoked",
    "BadMemberIndex",
    "EmptyStates",
    "TimelockActive",
    "ChannelParams",
    "ChannelState",
    "ChannelDescriptor",
    "load_descriptor",
    "ChannelKeys",
    "PoolKeys",
    "StateKeys",
    "default_pool_seed",
    "REVOCABLE_OUTPUT",
    "REMOTE_OUTPUT",
    "POOL_OUTPUT",
    "CommitmentSide",
    "SpendableInput",
    "FundingOutput",
    "CommitmentPair",
    "RecoveryPackage",
    "build_funding_tx",
    "funding_witness",
    "build_commitment_pair",
    "build_mutual_close",
    "build_breach_remedy",
    "prepare_recovery",
    "build_recovery_tx",
    "build_delayed_sweep",
    "Channel",
    "PartyView",
    "CommitmentSignatures",
    "RevocationMessage",
    "FeeBoundCheck",
    "check_fee_bounds",
    "fee_bounds",
]
