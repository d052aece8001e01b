"""
Block-synchronous scenario loop.

Each tick delivers the messages of the previous tick, lets every actor act
in a fixed order (device, gateway, watchdogs, publishers) and mines one
block. The run ends when a closing, recovery, remedy or delayed-sweep
transaction confirms.
"""

from typing import Dict, List, Optional

from channel_protocol import Channel, ChannelKeys, SpendableInput, build_funding_tx
from common.logging_setup import build_logger
from ledger_sim import Chain
from script_engine import serialize_script, templates

from .actors import (
    COMMITMENT,
    DELAYED_SWEEP,
    FINAL_KINDS,
    RECOVERY,
    ChainView,
    DeviceActor,
    GatewayActor,
    Network,
    PublisherMember,
    WatchdogMember,
    pool_locking,
)
from .errors import HorizonExceeded
from .scenario import ScenarioConfig
from .strategies import ColludePublisher, ColludeWatchdog
from .trace import (
    CONFIRM,
    DEVICE,
    DROP,
    GATEWAY,
    PUBLISHER_POOL,
    NOTE,
    SIDE_PAYMENT,
    ScenarioTrace,
    publisher_name,
    watchdog_name,
)

RUNNER = "runner"


def _p2pkh_key(pubkey: bytes) -> str:
    return serialize_script(templates.p2pkh(pubkey)).hex()


class ScenarioRunner:
    """Runs one channel scenario to settlement."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.params = config.params
        self.logger = self._setup_logging()

        self.chain = Chain()
        self.keys = ChannelKeys(self.params, config.descriptor.master_seed_a,
                                config.descriptor.master_seed_b, config.pool_seed)
        self.publisher_names = [publisher_name(i) for i in range(self.params.k1)]
        self.watchdog_names = [watchdog_name(i) for i in range(self.params.k2)]
        self.trace = ScenarioTrace(
            name=config.name,
            chain=self.chain,
            roles=[DEVICE, GATEWAY, PUBLISHER_POOL] + self.publisher_names + self.watchdog_names,
        )
        self.submissions: Dict[bytes, str] = {}
        self.network = Network(self.trace)

    def _setup_logging(self):
        """Setup logging for the scenario runner."""
        return build_logger("scenario")

    def view_for(self, actor: str) -> ChainView:
        return ChainView(self.chain, self.trace, actor, self.submissions)

    # -- setup -----------------------------------------------------------

    def _fund(self):
        """Seed both parties' coins, then build and pre-sign the funding transaction."""
        device, gateway = self.keys.device.funding(), self.keys.gateway.funding()
        coin_a = self.chain.seed(self.params.omega_a + self.config.miner_fee,
                                 templates.p2pkh(device.public_key))
        coin_b = self.chain.seed(self.params.omega_b, templates.p2pkh(gateway.public_key))
        self.chain.mine_block()
        self.trace.record(self.chain.height, RUNNER, NOTE, text="funding coins seeded")

        return build_funding_tx(
            self.params,
            [SpendableInput(coin_a, self.params.omega_a + self.config.miner_fee, device)],
            [SpendableInput(coin_b, self.params.omega_b, gateway)],
            (device.public_key, gateway.public_key),
            miner_fee=self.config.miner_fee,
        )

    def _key_directory(self) -> Dict[str, str]:
        """Locking script of every P2PKH key an actor owns, mapped to the actor."""
        owners: Dict[str, str] = {}
        states = range(1, len(self.config.updates) + 2)
        for name, chain in ((DEVICE, self.keys.device), (GATEWAY, self.keys.gateway)):
            keypairs = [chain.funding(), chain.close()]
            for j in states:
                keypairs.extend(chain.state_keys(j))
                keypairs.append(chain.recovery(j))
            for keypair in keypairs:
                owners[_p2pkh_key(keypair.public_key)] = name
        for i, name in enumerate(self.publisher_names):
            owners[_p2pkh_key(self.keys.publisher(i).public_key)] = name
        for i, name in enumerate(self.watchdog_names):
            owners[_p2pkh_key(self.keys.watchdog(i).public_key)] = name
        owners[pool_locking(self.keys).hex()] = PUBLISHER_POOL
        return owners

    def _build_device(self, channel: Channel) -> DeviceActor:
        strategies = self.config.strategies
        return DeviceActor(
            channel, self.keys, strategies.device, self.trace, list(self.config.updates),
            self.config.close_relay, self.config.miner_fee,
            self.publisher_names, self.watchdog_names,
        )

    def _build_actors(self, channel: Channel, funding_tx) -> List:
        strategies = self.config.strategies
        device = self._build_device(channel)
        gateway = GatewayActor(
            channel, self.keys, strategies.gateway, self.trace, self.view_for(GATEWAY),
            funding_tx, self.config.close_timeout, self.config.miner_fee,
        )
        watchdogs = [
            WatchdogMember(i, strategies.watchdogs[i], self.trace, self.view_for(name),
                           self.keys, channel.funding.outpoint, self.config.alert_latency,
                           self.publisher_names)
            for i, name in enumerate(self.watchdog_names)
        ]
        locking = pool_locking(self.keys)
        publishers = [
            PublisherMember(i, strategies.publishers[i], self.trace, self.view_for(name), locking)
            for i, name in enumerate(self.publisher_names)
        ]
        actors = [device, gateway] + watchdogs + publishers
        for actor in actors:
            self.network.register(actor)
        return actors

    # -- loop ------------------------------------------------------------

    def run(self) -> ScenarioTrace:
        funding_tx, funding = self._fund()
        channel = Channel.open(self.params, self.keys, funding, miner_fee=self.config.miner_fee)
        self.trace.owners = self._key_directory()
        actors = self._build_actors(channel, funding_tx)
        self.logger.info(
            f"scenario {self.config.name}: {len(self.config.updates)} update(s), "
            f"strategies {self.config.strategies.to_dict()}"
        )

        start = self.chain.height
        while self.chain.height - start < self.config.horizon:
            height = self.chain.height + 1
            self.network.deliver()
            for actor in actors:
                actor.step(height)
            block = self.chain.mine_block()
            outcome = self._after_block(block)
            if outcome is not None:
                self._finish(outcome, block.height)
                return self.trace

        error = HorizonExceeded(
            f"scenario {self.config.name} not settled within {self.config.horizon} blocks"
        )
        error.trace = self.trace
        raise error

    def _after_block(self, block) -> Optional[str]:
        outcome = None
        for dropped in self.chain.dropped:
            if dropped.height == block.height:
                self.trace.record(block.height, RUNNER, DROP, txid=dropped.txid.hex(),
                                  reason=dropped.reason)
        for tx_id in block.txids:
            kind = self.submissions.get(tx_id)
            if kind is None:
                continue
            self.trace.record(block.height, RUNNER, CONFIRM, txid=tx_id.hex(), tx_kind=kind)
            if kind == COMMITMENT:
                self.trace.breach_height = block.height
            if kind == RECOVERY:
                self.trace.recovery_height = block.height
            if kind in FINAL_KINDS:
                outcome = kind
        return outcome

    def _finish(self, outcome: str, height: int) -> None:
        self.trace.outcome = outcome
        self.trace.settled_height = height
        if outcome == DELAYED_SWEEP:
            self._pay_bribes(height)
        self.logger.info(f"scenario {self.config.name} settled by {outcome} at height {height}")

    def _pay_bribes(self, height: int) -> None:
        """Off-chain payments from the gateway to pools that colluded unanimously."""
        strategies = self.config.strategies
        for names, pool, kind in (
            (self.publisher_names, strategies.publishers, ColludePublisher),
            (self.watchdog_names, strategies.watchdogs, ColludeWatchdog),
        ):
            if not all(isinstance(s, kind) for s in pool):
                continue
            share = pool[0].bribe // len(pool)
            for name in names:
                payment = {"from": GATEWAY, "to": name, "value": share}
                self.trace.side_payments.append(payment)
                self.trace.record(height, RUNNER, SIDE_PAYMENT, **payment)


def run_scenario(config: ScenarioConfig) -> ScenarioTrace:
    """Run a scenario and return its trace."""
    return ScenarioRunner(config).run()
