"""Errors raised by the crypto_keys package."""

from common.errors import IotChanError


class CryptoKeysError(IotChanError):
    """Base class for key handling errors."""


class InvalidSeed(CryptoKeysError):
    """Master seed is not 32 bytes / 64 hex characters."""


class InvalidKeyPath(CryptoKeysError):
    """Key path violates the role/state-index rules."""
