"""Errors raised by the simulated ledger."""

from common.errors import IotChanError


class LedgerError(IotChanError):
    """Base class for ledger errors."""


class ValidationError(LedgerError):
    """A transaction is not valid against the current chain."""


class MissingUtxo(ValidationError):
    """An input refers to an outpoint that is neither confirmed nor pending."""


class ScriptInvalid(ValidationError):
    """An input's unlocking/locking pair did not execute to true."""

    def __init__(self, input_index: int, reason: str = ""):
        self.input_index = input_index
        self.reason = reason
        super().__init__(f"input {input_index}: {reason}" if reason else f"input {input_index}")


class DoubleSpend(ValidationError):
    """An outpoint is spent twice in the tx, the batch or the chain."""


class ValueOverflow(ValidationError):
    """A value does not fit in a signed 64-bit integer."""


class NegativeFee(ValidationError):
    """Outputs exceed inputs."""


class MalformedTransaction(ValidationError):
    """Transaction shape is invalid (no inputs/outputs on a non-coinbase)."""


class IndexOutOfRange(LedgerError):
    """Input index beyond the transaction's inputs."""


class DomainError(LedgerError):
    """Arguments outside the function's domain."""
