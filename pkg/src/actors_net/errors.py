"""Errors raised by the scenario simulation."""

from common.errors import IotChanError


class ScenarioError(IotChanError):
    """Base class for simulation errors."""


class ConfigInvalid(ScenarioError):
    """Scenario configuration is inconsistent or malformed."""


class HorizonExceeded(ScenarioError):
    """The channel did not settle within the configured number of blocks."""


class Unsettled(ScenarioError):
    """Final balances cannot be read from the trace."""


class Violation(ScenarioError):
    """The device touched the ledger directly."""

    def __init__(self, event):
        super().__init__(f"device read the chain at height {event.height}: {event.data}")
        self.event = event
