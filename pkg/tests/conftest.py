"""Shared fixtures for the iotchan test suite."""

import json
import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from channel_protocol import (  # noqa: E402
    Channel,
    ChannelKeys,
    SpendableInput,
    build_funding_tx,
    load_descriptor,
)
from common.config import get_default_config  # noqa: E402
from ledger_sim import Chain  # noqa: E402
from script_engine import templates  # noqa: E402

FIXTURES = Path(__file__).parent.parent / "data" / "fixtures"

SEED_A = bytes.fromhex("1f" * 32)
SEED_B = bytes.fromhex("2e" * 32)


@pytest.fixture
def config():
    return get_default_config()


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def load_fixture(name):
    return json.loads((FIXTURES / name).read_text(encoding="utf-8"))


@pytest.fixture
def channel_descriptor():
    return load_fixture("channel.json")


class ChannelEnv:
    """Fixture channel with both funding coins confirmed on a fresh chain."""

    def __init__(self, descriptor_data, miner_fee=0):
        descriptor = load_descriptor(descriptor_data)
        self.params = descriptor.params
        self.keys = ChannelKeys(self.params, descriptor.master_seed_a, descriptor.master_seed_b)
        self.chain = Chain()
        self.miner_fee = miner_fee

        device, gateway = self.keys.device.funding(), self.keys.gateway.funding()
        self.coin_a = SpendableInput(
            self.chain.seed(self.params.omega_a + miner_fee, templates.p2pkh(device.public_key)),
            self.params.omega_a + miner_fee, device,
        )
        self.coin_b = SpendableInput(
            self.chain.seed(self.params.omega_b, templates.p2pkh(gateway.public_key)),
            self.params.omega_b, gateway,
        )
        self.chain.mine_block()
        self.funding_tx, self.funding = build_funding_tx(
            self.params, [self.coin_a], [self.coin_b], (device.public_key, gateway.public_key),
            miner_fee=miner_fee,
        )

    def confirm(self, tx):
        """Submit and mine; returns the confirmation height."""
        self.chain.submit(tx)
        self.chain.mine_block()
        return self.chain.height

    def open(self, initial_balance_a=None):
        self.confirm(self.funding_tx)
        return Channel.open(self.params, self.keys, self.funding, initial_balance_a,
                            miner_fee=self.miner_fee)


@pytest.fixture
def env(channel_descriptor):
    return ChannelEnv(channel_descriptor)
