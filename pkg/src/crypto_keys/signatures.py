"""
Signature schemes.

Scripts only need public verifiability, so the scheme sits behind a small
abstract interface. The default is ECDSA over secp256k1 with RFC 6979 nonces,
which keeps every signature (and therefore every txid) deterministic.
"""

import hashlib
from abc import ABC, abstractmethod

from ecdsa import BadSignatureError, SECP256k1, SigningKey, VerifyingKey
from ecdsa.errors import MalformedPointError
from ecdsa.keys import BadDigestError
from ecdsa.util import MalformedSignature, sigdecode_string, sigencode_string


class SignatureScheme(ABC):
    """Public-key signature scheme used by CHECKSIG and CHECKMULTISIG."""

    name: str = "abstract"

    @abstractmethod
    def public_key(self, secret_key: bytes) -> bytes:
        """Derive the public key for a secret key."""

    @abstractmethod
    def sign(self, secret_key: bytes, message: bytes) -> bytes:
        """Sign a 32-byte message digest."""

    @abstractmethod
    def verify(self, public_key: bytes, message: bytes, signature: bytes) -> bool:
        """Return True iff the signature is valid for (public_key, message)."""


class Secp256k1Scheme(SignatureScheme):
    """ECDSA over secp256k1, compressed 33-byte keys, 64-byte r||s signatures."""

    name = "secp256k1-ecdsa-rfc6979"

    def public_key(self, secret_key: bytes) -> bytes:
        sk = SigningKey.from_string(secret_key, curve=SECP256k1)
        return sk.get_verifying_key().to_string("compressed")

    def sign(self, secret_key: bytes, message: bytes) -> bytes:
        sk = SigningKey.from_string(secret_key, curve=SECP256k1)
        return sk.sign_digest_deterministic(
            message, hashfunc=hashlib.sha256, sigencode=sigencode_string
        )

    def verify(self, public_key: bytes, message: bytes, signature: bytes) -> bool:
        try:
            vk = VerifyingKey.from_string(public_key, curve=SECP256k1)
            return vk.verify_digest(signature, message, sigdecode=sigdecode_string)
        except (BadSignatureError, BadDigestError, MalformedPointError, MalformedSignature,
                ValueError, AssertionError):
            return False

    @staticmethod
    def is_valid_secret(secret_key: bytes) -> bool:
        value = int.from_bytes(secret_key, "big")
        return 0 < value < SECP256k1.order


DEFAULT_SCHEME: SignatureScheme = Secp256k1Scheme()


def public_key_for(secret_key: bytes, scheme: SignatureScheme = DEFAULT_SCHEME) -> bytes:
    return scheme.public_key(secret_key)


def sign(secret_key: bytes, message: bytes, scheme: SignatureScheme = DEFAULT_SCHEME) -> bytes:
    """Sign a signing digest with the default scheme."""
    return scheme.sign(secret_key, message)


def verify(public_key: bytes, message: bytes, signature: bytes,
           scheme: SignatureScheme = DEFAULT_SCHEME) -> bool:
    """Verify a signature with the default scheme."""
    return scheme.verify(public_key, message, signature)
