"""
Tests for the scenario simulation: strategies, scenario files, the four
actors and settlement.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from actors_net import (  # noqa: E402
    PUBLISHER_POOL,
    ColludePublisher,
    ConfigInvalid,
    DeviceActor,
    Honest,
    HorizonExceeded,
    PublishRevoked,
    ScenarioRunner,
    ScenarioTrace,
    StrategySet,
    Unsettled,
    Violation,
    WatchdogSilent,
    device_interface_audit,
    load_scenario,
    override,
    parse_strategy,
    pool_totals,
    run_scenario,
    settle,
)
from actors_net.trace import CHAIN_READ, DEVICE, MESSAGE  # noqa: E402
from game_analysis import build_tree_p1_first, load_game_config  # noqa: E402
from ledger_sim import Chain  # noqa: E402

from conftest import FIXTURES, load_fixture  # noqa: E402

SCENARIOS = [
    "honest_scenario.json",
    "breach_scenario.json",
    "collusion_scenario.json",
    "device_breach_scenario.json",
    "relay_close_scenario.json",
]


def scenario(name, **changes):
    data = load_fixture(name)
    data.update(changes)
    return load_scenario(data)


def run_fixture(name, **changes):
    trace = run_scenario(scenario(name, **changes))
    return trace, settle(trace)


class TestStrategies:
    """Test strategy parsing and per-role validation."""

    def test_parse(self):
        assert parse_strategy("honest") == Honest()
        assert parse_strategy("publish_revoked:2") == PublishRevoked(2)
        assert parse_strategy("collude_publisher:20000") == ColludePublisher(20000)
        assert parse_strategy(" watchdog_silent ") == WatchdogSilent()

    def test_text_round_trip(self):
        for text in ("honest", "publish_revoked:3", "collude_watchdog:500", "publisher_drop"):
            assert parse_strategy(text).to_text() == text

    @pytest.mark.parametrize("text", ["lazy", "publish_revoked", "publish_revoked:x",
                                      "honest:1", "collude_publisher:-5"])
    def test_parse_errors(self, text):
        with pytest.raises(ConfigInvalid):
            parse_strategy(text)

    def test_pool_string_expands(self):
        strategies = StrategySet.from_dict({"watchdog": "watchdog_silent"}, 3, 2)
        assert strategies.publishers == [Honest()] * 3
        assert strategies.watchdogs == [WatchdogSilent()] * 2

    def test_pool_list_length(self):
        with pytest.raises(ConfigInvalid):
            StrategySet.from_dict({"publisher": ["honest", "honest"]}, 3, 2)

    def test_wrong_role(self):
        with pytest.raises(ConfigInvalid):
            StrategySet.from_dict({"gateway": "watchdog_silent"}, 1, 1)
        with pytest.raises(ConfigInvalid):
            StrategySet.from_dict({"publisher": "collude_watchdog:10"}, 1, 1)

    def test_single_cheater(self):
        with pytest.raises(ConfigInvalid):
            StrategySet.from_dict(
                {"device": "publish_revoked:1", "gateway": "publish_revoked:1"}, 1, 1
            )

    def test_pool_agrees_on_bribe(self):
        with pytest.raises(ConfigInvalid):
            StrategySet.from_dict(
                {"publisher": ["collude_publisher:10", "collude_publisher:20"]}, 2, 1
            )


class TestScenarioConfig:
    """Test scenario loading and validation."""

    def test_load_from_file(self):
        config = load_scenario(FIXTURES / "breach_scenario.json")
        assert config.name == "breach_scenario"
        assert config.updates == (80000, 90000)
        assert config.strategies.gateway == PublishRevoked(2)
        assert config.final_balance_a() == 90000

    def test_defaults_from_config(self, config):
        data = load_fixture("honest_scenario.json")
        del data["horizon"]
        loaded = load_scenario(data, config)
        assert loaded.horizon == config["scenario"]["horizon"]

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigInvalid):
            load_scenario(tmp_path / "absent.json")

    def test_bad_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigInvalid):
            load_scenario(path)

    @pytest.mark.parametrize("changes", [
        {"updates": [100001]},
        {"updates": [-1]},
        {"horizon": 0},
        {"miner_fee": -1},
        {"alert_latency": 6},
        {"close_timeout": 0},
        {"close_relay": "watchdog"},
        {"strategies": {"gateway": "publish_revoked:3"}},
        {"strategies": {"publisher": "collude_publisher:12"}},
    ])
    def test_invalid(self, changes):
        data = load_fixture("breach_scenario.json")
        data.update(changes)
        with pytest.raises(ConfigInvalid):
            load_scenario(data)

    def test_missing_channel(self):
        with pytest.raises(ConfigInvalid):
            load_scenario({"updates": []})

    def test_to_dict_reloads(self):
        config = scenario("relay_close_scenario.json")
        assert load_scenario(config.to_dict()) == config

    def test_override(self):
        config = scenario("honest_scenario.json")
        seed = bytes.fromhex("aa" * 32)
        changed = override(config, seed=seed, horizon=7)
        assert changed.horizon == 7
        assert changed.descriptor.master_seed_a == seed
        assert changed.descriptor.master_seed_b != config.descriptor.master_seed_b
        assert override(config) is config


class TestHonestRun:
    """Test the cooperative open, update and close."""

    def test_two_channel_transactions(self):
        trace, balances = run_fixture("honest_scenario.json")
        assert trace.outcome == "close"
        assert len(trace.confirmed_channel_txs()) == 2
        assert trace.settled_height == 9
        assert trace.breach_height is None

    def test_balances(self):
        trace, balances = run_fixture("honest_scenario.json")
        assert balances["device"] == 80000
        assert balances["gateway"] == 20000
        assert pool_totals(balances) == {"publishers": 0, "watchdogs": 0}
        assert trace.chain.check_conservation()

    def test_miner_fee_paid_by_device(self):
        trace, balances = run_fixture("honest_scenario.json", miner_fee=500)
        assert trace.outcome == "close"
        assert balances["device"] == 80000 - 500
        assert balances["gateway"] == 20000
        assert trace.chain.total_fees == 1000
        assert trace.chain.check_conservation()

    def test_no_updates(self):
        trace, balances = run_fixture("honest_scenario.json", updates=[])
        assert trace.outcome == "close"
        assert balances["device"] == balances["gateway"] == 50000

    def test_watchdogs_receive_revoked_states(self):
        trace, _ = run_fixture("honest_scenario.json")
        watches = [e for e in trace.events_of(MESSAGE, DEVICE) if e.data["type"] == "watch"]
        assert {e.data["state_index"] for e in watches} == {1, 2}
        assert len(watches) == 2 * 5

    def test_deterministic(self):
        first, _ = run_fixture("honest_scenario.json")
        second, _ = run_fixture("honest_scenario.json")
        assert first.to_jsonl() == second.to_jsonl()
        assert first.summary() == second.summary()

    def test_horizon_exceeded(self):
        with pytest.raises(HorizonExceeded) as excinfo:
            run_scenario(scenario("honest_scenario.json", horizon=5))
        assert not excinfo.value.trace.terminated


class TestGatewayBreach:
    """Test recovery after the gateway publishes a revoked commitment."""

    def test_recovered_before_timelock(self):
        trace, _ = run_fixture("breach_scenario.json")
        assert trace.outcome == "recovery"
        assert trace.breach_height == 9
        assert trace.recovery_height == 13
        assert trace.recovery_height < trace.breach_height + 6

    def test_balances(self):
        trace, balances = run_fixture("breach_scenario.json")
        assert balances["device"] == 76000
        assert balances["gateway"] == 0
        assert balances["watchdog[0]"] == 12000
        assert balances["publisher[0]"] == 12000
        assert sum(balances.values()) == 100000
        assert trace.chain.check_conservation()

    def test_single_honest_watchdog(self):
        trace, balances = run_fixture(
            "breach_scenario.json",
            strategies={"gateway": "publish_revoked:2",
                        "watchdog": ["watchdog_silent"] * 4 + ["honest"]},
        )
        assert trace.outcome == "recovery"
        assert balances["device"] == 76000
        assert balances["watchdog[4]"] == 12000
        assert balances["watchdog[0]"] == 0

    def test_alert_comes_from_watchdog(self):
        trace, _ = run_fixture("breach_scenario.json")
        alerts = [e for e in trace.events_of(MESSAGE) if e.data["type"] == "alert"]
        assert alerts
        assert all(e.actor.startswith("watchdog[") for e in alerts)
        assert all(e.data["to"] == DEVICE for e in alerts)

    def test_publisher_collusion_lets_gateway_sweep(self):
        trace, balances = run_fixture("collusion_scenario.json")
        assert trace.outcome == "delayed_sweep"
        assert trace.settled_height == 15
        assert balances["device"] == 80000
        assert balances["gateway"] == 0
        assert all(balances[f"publisher[{i}]"] == 4000 for i in range(5))
        assert pool_totals(balances)["watchdogs"] == 0
        assert len(trace.side_payments) == 5

    def test_watchdog_collusion_lets_gateway_sweep(self):
        trace, balances = run_fixture(
            "breach_scenario.json",
            strategies={"gateway": "publish_revoked:2", "watchdog": "collude_watchdog:10000"},
        )
        assert trace.outcome == "delayed_sweep"
        assert balances["device"] == 80000
        assert balances["gateway"] == 10000
        assert pool_totals(balances) == {"publishers": 0, "watchdogs": 10000}

    def test_silent_watchdogs_are_not_paid(self):
        trace, balances = run_fixture(
            "breach_scenario.json",
            strategies={"gateway": "publish_revoked:2", "watchdog": "watchdog_silent"},
        )
        assert trace.outcome == "delayed_sweep"
        assert trace.side_payments == []
        assert balances["gateway"] == 20000


class TestDeviceBreach:
    """Test the gateway's remedy when the device publishes a revoked state."""

    def test_remedy(self):
        trace, balances = run_fixture("device_breach_scenario.json")
        assert trace.outcome == "breach_remedy"
        assert trace.breach_height == 9
        assert trace.settled_height == 10
        assert balances["device"] == 0
        assert balances["gateway"] == 88000
        assert balances["publisher[0]"] == 12000
        assert trace.chain.check_conservation()


class TestRelayedClose:
    """Test closes relayed through the publisher pool."""

    def test_honest_member_publishes(self):
        trace, balances = run_fixture("relay_close_scenario.json")
        assert trace.outcome == "close"
        assert balances["device"] == 68000
        assert balances["gateway"] == 20000
        assert balances["publisher[2]"] == 12000
        assert balances["publisher[0]"] == 0

    def test_gateway_publishes_after_timeout(self):
        trace, balances = run_fixture(
            "relay_close_scenario.json", strategies={"publisher": "publisher_drop"}
        )
        assert trace.outcome == "close"
        assert trace.settled_height == 12
        assert balances["device"] == 68000
        assert balances[PUBLISHER_POOL] == 12000
        assert pool_totals(balances)["publishers"] == 12000


class TestSettlement:
    """Test settlement and the device isolation audit."""

    @pytest.mark.parametrize("name", SCENARIOS)
    def test_conserves_value(self, name):
        trace, balances = run_fixture(name)
        assert sum(balances.values()) == 100000
        assert trace.chain.check_conservation()

    @pytest.mark.parametrize("name", SCENARIOS)
    def test_device_never_reads_chain(self, name):
        trace, _ = run_fixture(name)
        audit = device_interface_audit(trace)
        assert audit.ok
        audit.raise_for_violation()
        assert trace.events_of(CHAIN_READ)

    def test_unsettled(self):
        trace = ScenarioTrace(name="open", chain=Chain(), roles=[DEVICE])
        with pytest.raises(Unsettled):
            settle(trace)

    def test_reading_device_is_flagged(self):
        class ReadingDevice(DeviceActor):
            def __init__(self, view, *args):
                super().__init__(*args)
                self.view = view

            def step(self, height):
                self.view.height()
                super().step(height)

        class ReadingRunner(ScenarioRunner):
            def _build_device(self, channel):
                s = self.config.strategies
                return ReadingDevice(
                    self.view_for(DEVICE), channel, self.keys, s.device, self.trace,
                    list(self.config.updates), self.config.close_relay, self.config.miner_fee,
                    self.publisher_names, self.watchdog_names,
                )

        trace = ReadingRunner(scenario("honest_scenario.json")).run()
        audit = device_interface_audit(trace)
        assert not audit.ok
        assert audit.to_dict()["violations"][0]["actor"] == DEVICE
        with pytest.raises(Violation):
            audit.raise_for_violation()


class TestGameAgreement:
    """Settled balances match the leaves of the game the scenario plays."""

    @pytest.fixture
    def tree(self):
        return build_tree_p1_first(load_game_config(load_fixture("breach_game.json")))

    @staticmethod
    def per_member(balances):
        totals = pool_totals(balances)
        return (balances["gateway"], balances["device"],
                Fraction(totals["publishers"], 5), Fraction(totals["watchdogs"], 5))

    def test_breach_matches_all_follow(self, tree):
        _, balances = run_fixture("breach_scenario.json")
        leaf = tree.leaf_at("S2", "F", "F", "F")
        assert self.per_member(balances) == leaf.payoffs()

    def test_publisher_collusion_matches_leaf(self, tree):
        _, balances = run_fixture("collusion_scenario.json")
        leaf = tree.leaf_at("S2", "F", "F", "D")
        assert self.per_member(balances) == leaf.payoffs()
