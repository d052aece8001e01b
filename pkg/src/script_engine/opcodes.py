"""
Opcode subset and its canonical byte table.

    CONST 0          0x00
    CONST 1..16      0x51..0x60
    PUSH (1..75 B)   length byte 0x01..0x4b, then the payload
    IF               0x63
    ELSE             0x67
    ENDIF            0x68
    DROP             0x75
    DUP              0x76
    EQUAL            0x87
    EQUALVERIFY      0x88
    HASH160          0xa9
    CHECKSIG         0xac
    CHECKMULTISIG    0xae
    CHECKSEQUENCEVERIFY 0xb2

Values follow Bitcoin's so templates serialise to their familiar sizes
(P2PKH is 25 bytes).
"""

from enum import Enum
from typing import Dict

MAX_PUSH_BYTES = 75
MAX_SMALL_INT = 16
MAX_MULTISIG_KEYS = 15


class Opcode(Enum):
    PUSH = "PUSH"
    CONST = "CONST"
    DUP = "DUP"
    HASH160 = "HASH160"
    EQUAL = "EQUAL"
    EQUALVERIFY = "EQUALVERIFY"
    CHECKSIG = "CHECKSIG"
    CHECKMULTISIG = "CHECKMULTISIG"
    CHECKSEQUENCEVERIFY = "CHECKSEQUENCEVERIFY"
    DROP = "DROP"
    IF = "IF"
    ELSE = "ELSE"
    ENDIF = "ENDIF"


OPCODE_BYTES: Dict[Opcode, int] = {
    Opcode.IF: 0x63,
    Opcode.ELSE: 0x67,
    Opcode.ENDIF: 0x68,
    Opcode.DROP: 0x75,
    Opcode.DUP: 0x76,
    Opcode.EQUAL: 0x87,
    Opcode.EQUALVERIFY: 0x88,
    Opcode.HASH160: 0xa9,
    Opcode.CHECKSIG: 0xac,
    Opcode.CHECKMULTISIG: 0xae,
    Opcode.CHECKSEQUENCEVERIFY: 0xb2,
}

BYTE_OPCODES: Dict[int, Opcode] = {value: op for op, value in OPCODE_BYTES.items()}

CONST_ZERO_BYTE = 0x00
CONST_BASE_BYTE = 0x50

MNEMONICS: Dict[str, Opcode] = {op.value: op for op in OPCODE_BYTES}
MNEMONICS["CSV"] = Opcode.CHECKSEQUENCEVERIFY
