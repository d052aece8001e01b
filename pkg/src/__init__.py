"""
iotchan - payment channels for devices without ledger access

A device that cannot watch the ledger opens a bidirectional channel with a
gateway. Two incentivised pools stand in for it: watchdogs detect a revoked
state being published and publishers broadcast the device's transactions.
The package simulates the ledger, the script language, the actors and the
game that prices the pools' fees.
"""

__version__ = "0.1.0"

