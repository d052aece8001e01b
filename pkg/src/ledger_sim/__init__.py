"""Deterministic simulated ledger: transactions, blocks and the UTXO set."""

from .errors import (
    LedgerError,
    ValidationError,
    MissingUtxo,
    ScriptInvalid,
    DoubleSpend,
    ValueOverflow,
    NegativeFee,
    MalformedTransaction,
    IndexOutOfRange,
    DomainError,
)
from .transaction import (
    MAX_VALUE,
    OutPoint,
    TxInput,
    TxOutput,
    Transaction,
    serialize_tx,
    txid,
    signing_digest,
    sign_input,
)
from .chain import Chain, Block, UtxoEntry, ConfirmedTx, DroppedTx, SAFE_CONFIRMATION_DEPTH
from .sizing import estimate_size

__all__ = [
    "LedgerError",
    "ValidationError",
    "MissingUtxo",
    "ScriptInvalid",
    "DoubleSpend",
    "ValueOverflow",
    "NegativeFee",
    "MalformedTransaction",
    "IndexOutOfRange",
    "DomainError",
    "MAX_VALUE",
    "OutPoint",
    "TxInput",
    "TxOutput",
    "Transaction",
    "serialize_tx",
    "txid",
    "signing_digest",
    "sign_input",
    "Chain",
    "Block",
    "UtxoEntry",
    "ConfirmedTx",
    "DroppedTx",
    "SAFE_CONFIRMATION_DEPTH",
    "estimate_size",
]
