"""
Deterministic hierarchical key derivation.

A device keeps only its master seed, the current state index and the
balances; every keypair it ever needs is re-derived from (seed, KeyPath).

child_secret = SHA-256(master_seed || encode(path)), where encode(path) is the
fixed 8-byte little-endian layout party:u8 | role:u8 | state_index:u32 |
member_index:u16.
"""

import json
import struct
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Tuple

from .errors import InvalidKeyPath, InvalidSeed
from .hashing import sha256
from .signatures import DEFAULT_SCHEME, Secp256k1Scheme, SignatureScheme

SEED_BYTES = 32
PATH_LAYOUT = "<BBIH"


class Party(Enum):
    """Owner of a key."""
    A = 0
    B = 1
    THIRD_PARTY_PUB = 2
    THIRD_PARTY_WATCH = 3


class KeyRole(Enum):
    """What a key is used for."""
    FUNDING = 0
    CLOSE = 1
    STATE_A = 2
    STATE_B = 3
    STATE_C = 4
    THIRD_PARTY_A = 5
    THIRD_PARTY_RC = 6


STATE_ROLES = (KeyRole.STATE_A, KeyRole.STATE_B, KeyRole.STATE_C)
FIXED_ROLES = (KeyRole.FUNDING, KeyRole.CLOSE)


@dataclass(frozen=True)
class KeyPath:
    """Identity of one keypair under a master seed."""
    party: Party
    role: KeyRole
    state_index: int = 0
    member_index: int = 0

    def __post_init__(self):
        if self.state_index < 0 or self.member_index < 0:
            raise InvalidKeyPath(f"negative index in {self}")
        if self.role in STATE_ROLES and self.state_index < 1:
            raise InvalidKeyPath(f"{self.role.name} keys need state_index >= 1")
        if self.role in FIXED_ROLES and self.state_index != 0:
            raise InvalidKeyPath(f"{self.role.name} keys need state_index = 0")

    def label(self) -> str:
        return f"{self.party.name}/{self.role.name}/{self.state_index}/{self.member_index}"


@dataclass(frozen=True)
class Keypair:
    """A secret key and its 33-byte compressed public key."""
    public_key: bytes
    secret_key: bytes = field(repr=False)


def encode_path(path: KeyPath) -> bytes:
    """Fixed 8-byte little-endian encoding of a key path."""
    return struct.pack(
        PATH_LAYOUT, path.party.value, path.role.value, path.state_index, path.member_index
    )


def parse_seed(seed: Any) -> bytes:
    """Accept a 32-byte value or 64 hex characters."""
    if isinstance(seed, (bytes, bytearray)):
        raw = bytes(seed)
    elif isinstance(seed, str):
        try:
            raw = bytes.fromhex(seed)
        except ValueError as e:
            raise InvalidSeed(f"seed is not hex: {e}") from e
    else:
        raise InvalidSeed(f"unsupported seed type {type(seed).__name__}")

    if len(raw) != SEED_BYTES:
        raise InvalidSeed(f"seed must be {SEED_BYTES} bytes, got {len(raw)}")
    return raw


def derive_keypair(master_seed: bytes, path: KeyPath,
                   scheme: SignatureScheme = DEFAULT_SCHEME) -> Keypair:
    """Derive the keypair for a path. Pure and total for any 32-byte seed."""
    material = bytes(master_seed) + encode_path(path)
    secret = sha256(material)
    # out-of-range scalars are re-hashed; practically never taken
    while not Secp256k1Scheme.is_valid_secret(secret):
        secret = sha256(secret)
    return Keypair(public_key=scheme.public_key(secret), secret_key=secret)


class KeyChain:
    """Cached deriver for one party's keys under one master seed."""

    def __init__(self, master_seed: bytes, party: Party,
                 scheme: SignatureScheme = DEFAULT_SCHEME):
        self.master_seed = parse_seed(master_seed)
        self.party = party
        self.scheme = scheme
        self._cache: Dict[KeyPath, Keypair] = {}

    def get(self, role: KeyRole, state_index: int = 0, member_index: int = 0) -> Keypair:
        path = KeyPath(self.party, role, state_index, member_index)
        if path not in self._cache:
            self._cache[path] = derive_keypair(self.master_seed, path, self.scheme)
        return self._cache[path]

    def funding(self) -> Keypair:
        return self.get(KeyRole.FUNDING)

    def close(self) -> Keypair:
        return self.get(KeyRole.CLOSE)

    def state_keys(self, state_index: int) -> Tuple[Keypair, Keypair, Keypair]:
        """The three per-state slots (a, b, c)."""
        return (
            self.get(KeyRole.STATE_A, state_index),
            self.get(KeyRole.STATE_B, state_index),
            self.get(KeyRole.STATE_C, state_index),
        )

    def slot(self, slot: str, state_index: int) -> Keypair:
        role = {"a": KeyRole.STATE_A, "b": KeyRole.STATE_B, "c": KeyRole.STATE_C}[slot]
        return self.get(role, state_index)

    def third_party(self, state_index: int = 0) -> Keypair:
        return self.get(KeyRole.THIRD_PARTY_A, state_index)

    def recovery(self, state_index: int) -> Keypair:
        return self.get(KeyRole.THIRD_PARTY_RC, state_index)

    def pool_member(self, member_index: int) -> Keypair:
        role = KeyRole.THIRD_PARTY_A if self.party is Party.THIRD_PARTY_PUB else KeyRole.THIRD_PARTY_RC
        return self.get(role, 0, member_index)


@dataclass
class DeviceKeyStore:
    """
    Everything the device persists: the master seed, the current key index and
    the balances of that state. No derived secret is ever stored.
    """
    master_seed: bytes
    state_index: int
    balance_a: int
    balance_b: int

    def keychain(self) -> KeyChain:
        return KeyChain(self.master_seed, Party.A)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "master_seed": self.master_seed.hex(),
            "state_index": self.state_index,
            "balance_a": self.balance_a,
            "balance_b": self.balance_b,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, payload: str) -> "DeviceKeyStore":
        data = json.loads(payload)
        return cls(
            master_seed=parse_seed(data["master_seed"]),
            state_index=int(data["state_index"]),
            balance_a=int(data["balance_a"]),
            balance_b=int(data["balance_b"]),
        )
