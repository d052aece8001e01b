"""Root of the exception hierarchy shared by every package."""


class IotChanError(Exception):
    """Base class for all errors raised by this project."""
