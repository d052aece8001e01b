"""
Hash primitives used by scripts and transaction ids.

Digest20 is RIPEMD-160 over SHA-256 (public key and script hashes), Digest32 is
double SHA-256 (transaction ids and signing digests).
"""

import hashlib
from typing import NewType

Digest20 = NewType("Digest20", bytes)
Digest32 = NewType("Digest32", bytes)


def sha256(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def sha256d(data: bytes) -> Digest32:
    """Double SHA-256."""
    return Digest32(hashlib.sha256(hashlib.sha256(data).digest()).digest())


def ripemd160(data: bytes) -> bytes:
    """RIPEMD-160, falling back to pycryptodomex when OpenSSL lacks it."""
    try:
        hasher = hashlib.new("ripemd160")
    except ValueError:
        from Cryptodome.Hash import RIPEMD160

        return RIPEMD160.new(data).digest()
    hasher.update(data)
    return hasher.digest()


def hash160(data: bytes) -> Digest20:
    """RIPEMD160(SHA256(data))."""
    return Digest20(ripemd160(sha256(data)))
