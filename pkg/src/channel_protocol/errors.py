"""Errors raised while building and evolving a channel."""

from common.errors import IotChanError


class ChannelError(IotChanError):
    """Base class for channel errors."""


class DescriptorInvalid(ChannelError):
    """Channel parameters or descriptor fields are inconsistent."""


class InsufficientFunds(ChannelError):
    """Funding inputs do not cover the channel capacity plus miner fee."""


class StateExhausted(ChannelError):
    """State index beyond the keys pre-derived at channel open."""


class BudgetExceeded(ChannelError):
    """A fee output does not fit in the balance that funds it."""


class ChannelClosed(ChannelError):
    """The channel no longer accepts updates."""


class BalanceOutOfRange(ChannelError):
    """Requested balance outside 0..capacity."""


class MissingSignature(ChannelError):
    """A required party signature is not available."""


class InvalidRevocation(ChannelError):
    """A revocation secret does not match the revoked state's slot-c key."""


class WindowExpired(ChannelError):
    """The publisher's timelock has matured; the revocation race is lost."""


class NotRevoked(ChannelError):
    """The commitment belongs to a state that has not been revoked."""


class BadMemberIndex(ChannelError):
    """Pool member index outside 0..K-1."""


class EmptyStates(ChannelError):
    """Fee bounds need at least one state."""


class TimelockActive(ChannelError):
    """A revocable output is swept through its delay branch before W blocks."""
