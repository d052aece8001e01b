"""Parse, serialize and execute the channel's script subset."""

from .errors import (
    ScriptError,
    UnknownToken,
    UnbalancedConditional,
    PushTooLarge,
    MalformedMultisig,
    ScriptTooLarge,
    StackUnderflow,
    VerifyFailed,
    InvalidContext,
)
from .opcodes import Opcode, OPCODE_BYTES
from .script import (
    Op,
    Script,
    parse_script,
    serialize_script,
    deserialize_script,
    encode_num,
    decode_num,
    push,
    const,
    number,
    op,
)
from .interpreter import ExecContext, ExecResult, execute, execute_verbose, is_p2sh
from . import templates

__all__ = [
    "ScriptError",
    "UnknownToken",
    "UnbalancedConditional",
    "PushTooLarge",
    "MalformedMultisig",
    "ScriptTooLarge",
    "StackUnderflow",
    "VerifyFailed",
    "InvalidContext",
    "Opcode",
    "OPCODE_BYTES",
    "Op",
    "Script",
    "parse_script",
    "serialize_script",
    "deserialize_script",
    "encode_num",
    "decode_num",
    "push",
    "const",
    "number",
    "op",
    "ExecContext",
    "ExecResult",
    "execute",
    "execute_verbose",
    "is_p2sh",
    "templates",
]
