"""Errors raised while parsing or executing scripts."""

from common.errors import IotChanError


class ScriptError(IotChanError):
    """Base class for script parse and execution failures."""


class UnknownToken(ScriptError):
    """Token or opcode byte outside the supported subset."""


class UnbalancedConditional(ScriptError):
    """IF/ELSE/ENDIF are not properly nested."""


class PushTooLarge(ScriptError):
    """Push payload longer than 75 bytes."""


class MalformedMultisig(ScriptError):
    """CHECKMULTISIG not preceded by `m <pk>... n`, or counts out of range."""


class ScriptTooLarge(ScriptError):
    """Serialized script exceeds the size guardrail."""


class StackUnderflow(ScriptError):
    """An opcode needed more stack items than available."""


class VerifyFailed(ScriptError):
    """A verify-style check (EQUALVERIFY, CSV, fail-fast CHECKSIG) failed."""


class InvalidContext(ScriptError):
    """Execution context is inconsistent (current height below confirmation)."""
