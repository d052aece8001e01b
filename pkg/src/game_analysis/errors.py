"""Errors raised by the game analysis."""

from common.errors import IotChanError


class GameError(IotChanError):
    """Base class for game analysis errors."""


class InvalidConfig(GameError):
    """Game configuration violates the ordering or constant-sum constraints."""


class IncompleteProfile(GameError):
    """A strategy profile misses an information set or names an unknown action."""
