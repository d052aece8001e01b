"""Hashing, signatures and deterministic key derivation."""

from .errors import CryptoKeysError, InvalidSeed, InvalidKeyPath
from .hashing import sha256, sha256d, ripemd160, hash160, Digest20, Digest32
from .signatures import SignatureScheme, Secp256k1Scheme, DEFAULT_SCHEME, sign, verify, public_key_for
from .derivation import (
    Party,
    KeyRole,
    KeyPath,
    Keypair,
    encode_path,
    derive_keypair,
    parse_seed,
    KeyChain,
    DeviceKeyStore,
)

__all__ = [
    "CryptoKeysError",
    "InvalidSeed",
    "InvalidKeyPath",
    "sha256",
    "sha256d",
    "ripemd160",
    "hash160",
    "Digest20",
    "Digest32",
    "SignatureScheme",
    "Secp256k1Scheme",
    "DEFAULT_SCHEME",
    "sign",
    "verify",
    "public_key_for",
    "Party",
    "KeyRole",
    "KeyPath",
    "Keypair",
    "encode_path",
    "derive_keypair",
    "parse_seed",
    "KeyChain",
    "DeviceKeyStore",
]
