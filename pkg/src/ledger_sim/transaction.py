"""
Transactions and their canonical encoding.

Byte layout (all integers little-endian):

    u8   coinbase flag
    u32  input count
         per input:  32B txid | u32 output_index | u32 len | unlocking | u32 sequence
    u32  output count
         per output: i64 value | u32 len | locking
    u32  locktime

locktime is carried for uniqueness of seed transactions only; it is not enforced.
"""

import struct
from dataclasses import dataclass, replace
from typing import Any, Dict, Tuple

from crypto_keys.hashing import Digest32, sha256d
from crypto_keys.signatures import DEFAULT_SCHEME, SignatureScheme
from script_engine import Script, serialize_script

from .errors import IndexOutOfRange, ValueOverflow

MAX_VALUE = 2 ** 63 - 1
EMPTY_SCRIPT = Script()


@dataclass(frozen=True)
class OutPoint:
    """Reference to one output of a transaction."""
    txid: bytes
    output_index: int

    def to_dict(self) -> Dict[str, Any]:
        return {"txid": self.txid.hex(), "index": self.output_index}

    def __str__(self) -> str:
        return f"{self.txid.hex()[:16]}:{self.output_index}"


@dataclass(frozen=True)
class TxInput:
    previous: OutPoint
    unlocking: Script = EMPTY_SCRIPT
    sequence: int = 0


@dataclass(frozen=True)
class TxOutput:
    value: int
    locking: Script


@dataclass(frozen=True)
class Transaction:
    """Inputs and outputs; coinbase transactions have no inputs."""
    inputs: Tuple[TxInput, ...]
    outputs: Tuple[TxOutput, ...]
    coinbase: bool = False
    locktime: int = 0

    def total_out(self) -> int:
        return sum(o.value for o in self.outputs)

    def outpoint(self, index: int) -> OutPoint:
        if not 0 <= index < len(self.outputs):
            raise IndexOutOfRange(f"output {index} of {len(self.outputs)}")
        return OutPoint(txid(self), index)

    def with_unlocking(self, input_index: int, unlocking: Script) -> "Transaction":
        """Copy with one input's unlocking script replaced."""
        if not 0 <= input_index < len(self.inputs):
            raise IndexOutOfRange(f"input {input_index} of {len(self.inputs)}")
        inputs = list(self.inputs)
        inputs[input_index] = replace(inputs[input_index], unlocking=unlocking)
        return replace(self, inputs=tuple(inputs))

    def blanked(self) -> "Transaction":
        """Copy with every unlocking script emptied."""
        return replace(
            self, inputs=tuple(replace(i, unlocking=EMPTY_SCRIPT) for i in self.inputs)
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "txid": txid(self).hex(),
            "coinbase": self.coinbase,
            "inputs": [
                {
                    "previous": i.previous.to_dict(),
                    "unlocking": i.unlocking.to_text(),
                    "sequence": i.sequence,
                }
                for i in self.inputs
            ],
            "outputs": [
                {"value": o.value, "locking": o.locking.to_text()} for o in self.outputs
            ],
        }


def _pack_bytes(data: bytes) -> bytes:
    return struct.pack("<I", len(data)) + data


def serialize_tx(tx: Transaction) -> bytes:
    """Canonical serialization."""
    out = bytearray(struct.pack("<B", 1 if tx.coinbase else 0))
    out += struct.pack("<I", len(tx.inputs))
    for i in tx.inputs:
        out += i.previous.txid
        out += struct.pack("<I", i.previous.output_index)
        out += _pack_bytes(serialize_script(i.unlocking))
        out += struct.pack("<I", i.sequence)
    out += struct.pack("<I", len(tx.outputs))
    for o in tx.outputs:
        if not 0 <= o.value <= MAX_VALUE:
            raise ValueOverflow(f"output value {o.value} outside 0..2^63-1")
        out += struct.pack("<q", o.value)
        out += _pack_bytes(serialize_script(o.locking))
    out += struct.pack("<I", tx.locktime)
    return bytes(out)


def txid(tx: Transaction) -> Digest32:
    """SHA-256d of the canonical serialization."""
    return sha256d(serialize_tx(tx))


def signing_digest(tx: Transaction, input_index: int) -> Digest32:
    """Digest signed for an input: the tx with all unlocking scripts blanked."""
    if not 0 <= input_index < len(tx.inputs):
        raise IndexOutOfRange(f"input {input_index} of {len(tx.inputs)}")
    return sha256d(serialize_tx(tx.blanked()))


def sign_input(tx: Transaction, input_index: int, secret_key: bytes,
               scheme: SignatureScheme = DEFAULT_SCHEME) -> bytes:
    """Signature over an input's signing digest."""
    return scheme.sign(secret_key, signing_digest(tx, input_index))
