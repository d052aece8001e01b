"""
Tests for the iotchan command line.
"""

import json
import sys
from pathlib import Path

import pytest
from click.testing import CliRunner

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from main import cli  # noqa: E402

from conftest import FIXTURES, load_fixture  # noqa: E402


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, [str(a) for a in args])


def report_of(result):
    """The JSON report line of a command's output."""
    for line in result.output.splitlines():
        if line.startswith("{"):
            return json.loads(line)
    raise AssertionError(f"no report in output: {result.output!r}")


class TestEstimateSize:
    """Test the size estimate command."""

    def test_two_by_two(self, runner):
        result = invoke(runner, "estimate-size", 2, 2)
        assert result.exit_code == 0
        report = report_of(result)
        assert report["command"] == "estimate-size"
        assert report["results"] == {"min": 372, "max": 376}

    def test_zero_inputs(self, runner):
        assert invoke(runner, "estimate-size", 0, 1).exit_code == 2


class TestDemos:
    """Test the two demonstration commands."""

    def test_demo_honest(self, runner):
        result = invoke(runner, "demo-honest")
        assert result.exit_code == 0
        results = report_of(result)["results"]
        assert results["on_chain_channel_txs"] == 2
        assert results["checks_passed"] is True
        assert results["balances"]["device"] == 80000
        assert results["audit"]["ok"] is True
        assert results["conservation"] is True

    def test_demo_breach(self, runner):
        result = invoke(runner, "demo-breach")
        assert result.exit_code == 0
        results = report_of(result)["results"]
        assert results["checks_passed"] is True
        assert results["trace"]["outcome"] == "recovery"
        assert results["balances"]["device"] == 76000
        assert results["balances"]["gateway"] == 0
        assert results["pools"] == {"publishers": 12000, "watchdogs": 12000}

    def test_reports_are_reproducible(self, runner):
        first = invoke(runner, "demo-breach").output
        assert invoke(runner, "demo-breach").output == first

    def test_seed_changes_digest_not_outcome(self, runner):
        plain = report_of(invoke(runner, "demo-honest"))
        result = invoke(runner, "--seed", "ab" * 32, "demo-honest")
        assert result.exit_code == 0
        seeded = report_of(result)
        assert seeded["inputs_digest"] != plain["inputs_digest"]
        assert seeded["results"]["balances"] == plain["results"]["balances"]

    def test_horizon_too_short(self, runner):
        assert invoke(runner, "--horizon", 3, "demo-honest").exit_code == 1


class TestRunScenario:
    """Test running scenario files."""

    def test_collusion(self, runner):
        result = invoke(runner, "run-scenario", FIXTURES / "collusion_scenario.json")
        assert result.exit_code == 0
        results = report_of(result)["results"]
        assert results["trace"]["outcome"] == "delayed_sweep"
        assert results["pools"]["publishers"] == 20000

    def test_trace_out(self, runner, tmp_path):
        out = tmp_path / "trace.jsonl"
        result = invoke(runner, "run-scenario", FIXTURES / "honest_scenario.json",
                        "--trace-out", out)
        assert result.exit_code == 0
        events = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
        assert len(events) == report_of(result)["results"]["trace"]["events"]
        assert {"height", "actor", "kind", "data"} == set(events[0])

    def test_invalid_scenario(self, runner, tmp_path):
        data = load_fixture("honest_scenario.json")
        data["strategies"] = {"device": "lazy"}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        result = invoke(runner, "run-scenario", path)
        assert result.exit_code == 2
        assert "unknown strategy" in result.output

    def test_unsettled_within_horizon(self, runner):
        result = invoke(runner, "--horizon", 4, "run-scenario",
                        FIXTURES / "breach_scenario.json")
        assert result.exit_code == 1

    def test_chain_report(self, runner):
        result = invoke(runner, "chain-report", FIXTURES / "honest_scenario.json")
        assert result.exit_code == 0
        results = report_of(result)["results"]
        assert results["height"] == 9
        assert sorted(u["value"] for u in results["utxo"]) == [20000, 80000]
        assert results["seeded_value"] == 100000


class TestGameCommands:
    """Test the game analysis commands."""

    def test_analyze_game(self, runner):
        result = invoke(runner, "analyze-game", FIXTURES / "game.json")
        assert result.exit_code == 0
        results = report_of(result)["results"]
        assert "all-follow" in results["equilibria"]
        assert results["min_fees"] == {"sigma1": "10000", "gamma1": "10000"}

    def test_min_fees(self, runner):
        result = invoke(runner, "min-fees", FIXTURES / "breach_game.json")
        assert result.exit_code == 0
        assert report_of(result)["results"] == {"sigma1": "4000", "gamma1": "4000"}

    def test_invalid_game(self, runner, tmp_path):
        data = load_fixture("game.json")
        data["tx2"] = [1, 99999]
        path = tmp_path / "bad_game.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        assert invoke(runner, "min-fees", path).exit_code == 2

    def test_verify_fee_bounds(self, runner):
        result = invoke(runner, "verify-fee-bounds", "--samples", 25, "--sweep-seed", 7)
        assert result.exit_code == 0
        results = report_of(result)["results"]
        assert results["samples"] == 25
        assert results["ok"] is True
        assert results["counterexamples"] == []


class TestGlobalOptions:
    """Test the options shared by every command."""

    @pytest.mark.parametrize("seed", ["zz", "g" * 64])
    def test_bad_seed(self, runner, seed):
        assert invoke(runner, "--seed", seed, "demo-honest").exit_code == 2

    def test_missing_config(self, runner, tmp_path):
        result = invoke(runner, "--config", tmp_path / "absent.yaml", "demo-honest")
        assert result.exit_code == 2

    def test_config_file(self, runner, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("analysis:\n  sweep_samples: 5\n", encoding="utf-8")
        result = invoke(runner, "--config", path, "verify-fee-bounds")
        assert result.exit_code == 0
        assert report_of(result)["results"]["samples"] == 5
