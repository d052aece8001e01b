"""Main entry point for the iotchan command line."""

import sys
from pathlib import Path
from typing import Any, Dict, Optional

import click

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from actors_net import (  # noqa: E402
    HorizonExceeded,
    ScenarioConfig,
    ScenarioTrace,
    device_interface_audit,
    load_scenario,
    override,
    pool_totals,
    run_scenario,
    settle,
)
from common.config import fixture_dir, load_config  # noqa: E402
from common.errors import IotChanError  # noqa: E402
from common.logging_setup import configure_logging  # noqa: E402
from common.reporting import Report  # noqa: E402
from crypto_keys import parse_seed  # noqa: E402
from game_analysis import GameAnalyzer, load_game_config, min_fees  # noqa: E402
from ledger_sim import estimate_size  # noqa: E402

EXIT_FAILED = 1
EXIT_USAGE = 2

HONEST_FIXTURE = "honest_scenario.json"
BREACH_FIXTURE = "breach_scenario.json"


class Settings:
    """Global options shared by every subcommand."""

    def __init__(self, config: Dict[str, Any], seed: Optional[bytes], horizon: Optional[int],
                 verbose: bool):
        self.config = config
        self.seed = seed
        self.horizon = horizon
        self.verbose = verbose


def _parse_seed(ctx, param, value):
    if value is None:
        return None
    if len(value) != 64:
        raise click.BadParameter("expected 64 hex characters")
    try:
        return parse_seed(value)
    except IotChanError as e:
        raise click.BadParameter(str(e))


def emit(report: Report, settings: Settings, summary: Optional[str] = None) -> None:
    click.echo(report.to_json())
    if settings.verbose and summary:
        click.echo(summary, err=True)


def fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(settings: Settings, path: Path) -> ScenarioConfig:
    return override(load_scenario(path, settings.config), settings.seed, settings.horizon)


def _scenario_results(trace: ScenarioTrace) -> Dict[str, Any]:
    balances = settle(trace)
    return {
        "trace": trace.summary(),
        "on_chain_channel_txs": len(trace.confirmed_channel_txs()),
        "balances": balances,
        "pools": pool_totals(balances),
        "audit": device_interface_audit(trace).to_dict(),
        "conservation": trace.chain.check_conservation(),
    }


def _human_summary(trace: ScenarioTrace, results: Dict[str, Any]) -> str:
    lines = [
        f"scenario {trace.name}: {trace.outcome} at height {trace.settled_height}",
        f"  channel txs on chain: {results['on_chain_channel_txs']}",
    ]
    for role, value in results["balances"].items():
        if value:
            lines.append(f"  {role}: {value}")
    return "\n".join(lines)


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="Configuration file (default: config.yaml)")
@click.option("--seed", callback=_parse_seed, default=None,
              help="Device master seed as 64 hex characters")
@click.option("--horizon", type=click.IntRange(min=1), default=None,
              help="Blocks a scenario may run before it must settle")
@click.option("--verbose", is_flag=True, help="Log progress and print a summary to stderr")
@click.pass_context
def cli(ctx, config_path, seed, horizon, verbose):
    """Payment channels for devices without ledger access."""
    if config_path is not None and not Path(config_path).exists():
        raise click.BadParameter(f"{config_path} does not exist", param_hint="--config")
    config = load_config(config_path)
    configure_logging("INFO" if verbose else config["logging"]["level"], config["logging"]["file"])
    ctx.obj = Settings(config, seed, horizon, verbose)


@cli.command("run-scenario")
@click.argument("scenario", type=click.Path(exists=True, dir_okay=False))
@click.option("--trace-out", type=click.Path(dir_okay=False), default=None,
              help="Write the event trace as JSON lines")
@click.pass_obj
def run_scenario_command(settings: Settings, scenario, trace_out):
    """Run a scenario file to settlement."""
    report = Report("run-scenario", {"scenario": Path(scenario).read_text(encoding="utf-8"),
                                     "seed": settings.seed, "horizon": settings.horizon})
    try:
        trace = run_scenario(_load(settings, Path(scenario)))
    except HorizonExceeded as e:
        fail(str(e), EXIT_FAILED)
    except IotChanError as e:
        fail(str(e), EXIT_USAGE)

    if trace_out:
        Path(trace_out).write_text(trace.to_jsonl(), encoding="utf-8")
    report.results = _scenario_results(trace)
    emit(report, settings, _human_summary(trace, report.results))


@cli.command("analyze-game")
@click.argument("game", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def analyze_game(settings: Settings, game):
    """Payoff matrix, extensive forms and fee bounds of a game configuration."""
    try:
        game_config = load_game_config(game)
    except IotChanError as e:
        fail(str(e), EXIT_USAGE)

    analysis = GameAnalyzer(settings.config).analyze(game_config)
    report = Report("analyze-game", {"game": game_config.to_dict()})
    report.warnings = analysis.pop("warnings")
    report.results = analysis
    emit(report, settings, f"equilibria: {', '.join(analysis['equilibria'])}")


@cli.command("min-fees")
@click.argument("game", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def min_fees_command(settings: Settings, game):
    """Smallest pool fees that keep collusion unprofitable."""
    try:
        game_config = load_game_config(game)
    except IotChanError as e:
        fail(str(e), EXIT_USAGE)

    bounds = min_fees(game_config)
    report = Report("min-fees", {"game": game_config.to_dict()})
    report.results = {name: str(value) for name, value in bounds.items()}
    emit(report, settings)


@cli.command("estimate-size")
@click.argument("inputs", type=int)
@click.argument("outputs", type=int)
@click.pass_obj
def estimate_size_command(settings: Settings, inputs, outputs):
    """Byte-size bracket of a transaction with the given shape."""
    try:
        low, high = estimate_size(inputs, outputs)
    except IotChanError as e:
        fail(str(e), EXIT_USAGE)

    report = Report("estimate-size", {"inputs": inputs, "outputs": outputs})
    report.results = {"min": low, "max": high}
    emit(report, settings)


def _fixture(settings: Settings, name: str) -> Path:
    path = fixture_dir(settings.config) / name
    if not path.exists():
        fail(f"fixture {path} not found", EXIT_USAGE)
    return path


def _demo(settings: Settings, command: str, fixture: str, check) -> None:
    path = _fixture(settings, fixture)
    try:
        scenario = _load(settings, path)
        trace = run_scenario(scenario)
    except HorizonExceeded as e:
        fail(str(e), EXIT_FAILED)
    except IotChanError as e:
        fail(str(e), EXIT_USAGE)

    report = Report(command, {"scenario": path.read_text(encoding="utf-8"),
                              "seed": settings.seed, "horizon": settings.horizon})
    report.results = _scenario_results(trace)
    failures = check(scenario, trace, report.results)
    report.results["checks_passed"] = not failures
    report.warnings = failures
    emit(report, settings, _human_summary(trace, report.results))
    if failures:
        sys.exit(EXIT_FAILED)


def _check_honest(scenario: ScenarioConfig, trace: ScenarioTrace, results: Dict[str, Any]):
    failures = []
    if results["on_chain_channel_txs"] != 2:
        failures.append(f"expected 2 channel transactions, got {results['on_chain_channel_txs']}")
    if trace.outcome != "close":
        failures.append(f"expected a mutual close, got {trace.outcome}")
    return failures


def _check_breach(scenario: ScenarioConfig, trace: ScenarioTrace, results: Dict[str, Any]):
    if trace.outcome != "recovery":
        return [f"expected the breach to be recovered, got {trace.outcome}"]

    failures = []
    params, fee = scenario.params, scenario.miner_fee
    w = params.w
    if not trace.recovery_height < trace.breach_height + w:
        failures.append(
            f"recovery at {trace.recovery_height} not before {trace.breach_height} + {w}"
        )

    revoked = scenario.strategies.gateway.state_index
    balance_a = ([params.omega_a] + list(scenario.updates))[revoked - 1]
    balance_b = params.capacity - balance_a
    recovered = balance_b - fee + balance_a - params.gamma1 - params.sigma1 - fee
    balances = results["balances"]
    if balances["gateway"] >= balance_b:
        failures.append(f"gateway settled {balances['gateway']}, not below {balance_b}")
    if balances["device"] != recovered:
        failures.append(f"device settled {balances['device']}, recovery pays {recovered}")
    return failures


@cli.command("demo-honest")
@click.pass_obj
def demo_honest(settings: Settings):
    """Open, update twice and close cooperatively: two transactions on chain."""
    _demo(settings, "demo-honest", HONEST_FIXTURE, _check_honest)


@cli.command("demo-breach")
@click.pass_obj
def demo_breach(settings: Settings):
    """The gateway publishes a revoked state and is punished."""
    _demo(settings, "demo-breach", BREACH_FIXTURE, _check_breach)


@cli.command("verify-fee-bounds")
@click.option("--samples", type=click.IntRange(min=1), default=None,
              help="Random configurations to check (default from config)")
@click.option("--sweep-seed", type=int, default=None, help="Seed of the random generator")
@click.option("--progress", is_flag=True, help="Show a progress bar")
@click.pass_obj
def verify_fee_bounds(settings: Settings, samples, sweep_seed, progress):
    """Check that all-follow is an equilibrium exactly when the fee bounds hold."""
    result = GameAnalyzer(settings.config).verify_fee_bounds(samples, sweep_seed, progress)
    report = Report("verify-fee-bounds", {"samples": result.samples, "seed": result.seed})
    report.results = result.to_dict()
    emit(report, settings, f"{result.samples} configurations, "
                           f"{len(result.counterexamples)} counterexample(s)")
    if not result.ok:
        sys.exit(EXIT_FAILED)


@cli.command("chain-report")
@click.argument("scenario", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def chain_report(settings: Settings, scenario):
    """Run a scenario and dump the resulting ledger."""
    try:
        trace = run_scenario(_load(settings, Path(scenario)))
    except HorizonExceeded as e:
        fail(str(e), EXIT_FAILED)
    except IotChanError as e:
        fail(str(e), EXIT_USAGE)

    report = Report("chain-report", {"scenario": Path(scenario).read_text(encoding="utf-8"),
                                     "seed": settings.seed, "horizon": settings.horizon})
    report.results = trace.chain.to_report()
    emit(report, settings)


def main():
    """Main entry point."""
    cli(obj=None)


if __name__ == "__main__":
    main()
