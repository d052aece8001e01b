"""
Script values, the textual grammar and the canonical byte encoding.

Grammar: whitespace-separated tokens. `<hex>` pushes bytes, decimal 0..16 is
a CONST, larger decimals become minimal script-number pushes, and anything
else must be an opcode mnemonic (an `OP_` prefix is accepted).
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from .errors import (
    MalformedMultisig,
    PushTooLarge,
    ScriptTooLarge,
    UnbalancedConditional,
    UnknownToken,
)
from .opcodes import (
    BYTE_OPCODES,
    CONST_BASE_BYTE,
    CONST_ZERO_BYTE,
    MAX_MULTISIG_KEYS,
    MAX_PUSH_BYTES,
    MAX_SMALL_INT,
    MNEMONICS,
    OPCODE_BYTES,
    Opcode,
)

MAX_SCRIPT_BYTES = 10_000


def encode_num(num: int) -> bytes:
    """Minimal little-endian script number with a sign bit."""
    if num == 0:
        return b""
    abs_num = abs(num)
    negative = num < 0
    result = bytearray()
    while abs_num:
        result.append(abs_num & 0xff)
        abs_num >>= 8
    if result[-1] & 0x80:
        result.append(0x80 if negative else 0x00)
    elif negative:
        result[-1] |= 0x80
    return bytes(result)


def decode_num(element: bytes) -> int:
    if element == b"":
        return 0
    big_endian = element[::-1]
    if big_endian[0] & 0x80:
        negative = True
        result = big_endian[0] & 0x7f
    else:
        negative = False
        result = big_endian[0]
    for c in big_endian[1:]:
        result <<= 8
        result += c
    return -result if negative else result


@dataclass(frozen=True)
class Op:
    """One opcode; `data` for PUSH, `value` for CONST, (m, n) for CHECKMULTISIG."""
    code: Opcode
    data: bytes = b""
    value: int = 0
    m: int = 0
    n: int = 0

    def __post_init__(self):
        if self.code is Opcode.PUSH and not 0 < len(self.data) <= MAX_PUSH_BYTES:
            raise PushTooLarge(f"push of {len(self.data)} bytes (1..{MAX_PUSH_BYTES} allowed)")
        if self.code is Opcode.CONST and not 0 <= self.value <= MAX_SMALL_INT:
            raise UnknownToken(f"CONST {self.value} outside 0..{MAX_SMALL_INT}")

    def to_text(self) -> str:
        if self.code is Opcode.PUSH:
            return f"<{self.data.hex()}>"
        if self.code is Opcode.CONST:
            return str(self.value)
        return self.code.value


def push(data: bytes) -> Op:
    return Op(Opcode.PUSH, data=bytes(data))


def const(value: int) -> Op:
    return Op(Opcode.CONST, value=value)


def number(value: int) -> Op:
    """CONST for 0..16, otherwise a script-number push."""
    if 0 <= value <= MAX_SMALL_INT:
        return const(value)
    return push(encode_num(value))


def op(code: Opcode) -> Op:
    return Op(code)


@dataclass(frozen=True)
class Script:
    """Ordered sequence of opcodes."""
    ops: Tuple[Op, ...] = ()

    @classmethod
    def of(cls, *ops: Op) -> "Script":
        return validate_script(cls(tuple(ops)))

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def __add__(self, other: "Script") -> "Script":
        return validate_script(Script(self.ops + other.ops))

    def pushes(self) -> List[bytes]:
        return [o.data for o in self.ops if o.code is Opcode.PUSH]

    def is_push_only(self) -> bool:
        return all(o.code in (Opcode.PUSH, Opcode.CONST) for o in self.ops)

    def to_text(self) -> str:
        return " ".join(o.to_text() for o in self.ops)

    def to_bytes(self) -> bytes:
        return serialize_script(self)

    def __str__(self) -> str:
        return self.to_text()


def _check_conditionals(ops: Iterable[Op]) -> None:
    depth = 0
    else_seen: List[bool] = []
    for o in ops:
        if o.code is Opcode.IF:
            depth += 1
            else_seen.append(False)
        elif o.code is Opcode.ELSE:
            if depth == 0 or else_seen[-1]:
                raise UnbalancedConditional("ELSE without matching IF")
            else_seen[-1] = True
        elif o.code is Opcode.ENDIF:
            if depth == 0:
                raise UnbalancedConditional("ENDIF without matching IF")
            depth -= 1
            else_seen.pop()
    if depth != 0:
        raise UnbalancedConditional(f"{depth} IF block(s) left open")


def _small_int(o: Optional[Op]) -> Optional[int]:
    if o is not None and o.code is Opcode.CONST:
        return o.value
    return None


def _normalize_multisig(ops: Tuple[Op, ...]) -> Tuple[Op, ...]:
    """Rewrite each CHECKMULTISIG to CHECKMULTISIG(m, n) from its literal operands."""
    normalized = list(ops)
    for i, o in enumerate(ops):
        if o.code is not Opcode.CHECKMULTISIG:
            continue
        n = _small_int(ops[i - 1] if i >= 1 else None)
        if n is None or not 1 <= n <= MAX_MULTISIG_KEYS:
            raise MalformedMultisig("CHECKMULTISIG must follow a key count 1..15")
        keys = ops[i - 1 - n:i - 1] if i - 1 - n >= 0 else ()
        if len(keys) != n or any(k.code is not Opcode.PUSH for k in keys):
            raise MalformedMultisig(f"CHECKMULTISIG expects {n} key pushes")
        m = _small_int(ops[i - 2 - n] if i - 2 - n >= 0 else None)
        if m is None or not 1 <= m <= n:
            raise MalformedMultisig("CHECKMULTISIG needs a signature count 1..n")
        normalized[i] = Op(Opcode.CHECKMULTISIG, m=m, n=n)
    return tuple(normalized)


def validate_script(script: Script) -> Script:
    """Check nesting, multisig shape and size; return the normalized script."""
    _check_conditionals(script.ops)
    normalized = Script(_normalize_multisig(script.ops))
    size = len(serialize_script(normalized))
    if size > MAX_SCRIPT_BYTES:
        raise ScriptTooLarge(f"script is {size} bytes (limit {MAX_SCRIPT_BYTES})")
    return normalized


def _parse_token(token: str) -> Op:
    if token.startswith("<") and token.endswith(">"):
        body = token[1:-1]
        try:
            data = bytes.fromhex(body)
        except ValueError as e:
            raise UnknownToken(f"bad hex push {token!r}") from e
        if not data:
            return const(0)
        return push(data)

    if token.isdigit():
        return number(int(token))

    name = token.upper()
    if name.startswith("OP_"):
        name = name[3:]
    if name in MNEMONICS:
        return op(MNEMONICS[name])
    raise UnknownToken(f"unknown token {token!r}")


def parse_script(text: str) -> Script:
    """Parse the textual notation into a validated Script."""
    ops = tuple(_parse_token(token) for token in text.split())
    return validate_script(Script(ops))


def serialize_script(script: Script) -> bytes:
    """Canonical bytes: one byte per opcode, pushes length-prefixed."""
    out = bytearray()
    for o in script.ops:
        if o.code is Opcode.PUSH:
            out.append(len(o.data))
            out.extend(o.data)
        elif o.code is Opcode.CONST:
            out.append(CONST_ZERO_BYTE if o.value == 0 else CONST_BASE_BYTE + o.value)
        else:
            out.append(OPCODE_BYTES[o.code])
    return bytes(out)


def deserialize_script(raw: bytes) -> Script:
    """Inverse of serialize_script."""
    if len(raw) > MAX_SCRIPT_BYTES:
        raise ScriptTooLarge(f"script is {len(raw)} bytes (limit {MAX_SCRIPT_BYTES})")

    ops: List[Op] = []
    i = 0
    while i < len(raw):
        byte = raw[i]
        i += 1
        if byte == CONST_ZERO_BYTE:
            ops.append(const(0))
        elif 1 <= byte <= MAX_PUSH_BYTES:
            data = raw[i:i + byte]
            if len(data) != byte:
                raise UnknownToken("truncated push")
            ops.append(push(data))
            i += byte
        elif CONST_BASE_BYTE + 1 <= byte <= CONST_BASE_BYTE + MAX_SMALL_INT:
            ops.append(const(byte - CONST_BASE_BYTE))
        elif byte in BYTE_OPCODES:
            ops.append(op(BYTE_OPCODES[byte]))
        else:
            raise UnknownToken(f"unknown opcode byte 0x{byte:02x}")
    return validate_script(Script(tuple(ops)))
