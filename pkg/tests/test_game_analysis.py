"""
Tests for the payoff matrix, the two extensive-form games and the fee bounds.
"""

import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from channel_protocol import ChannelParams, ChannelState, check_fee_bounds  # noqa: E402
from game_analysis import (  # noqa: E402
    COLUMNS,
    ROWS,
    GameAnalyzer,
    GameConfig,
    IncompleteProfile,
    InvalidConfig,
    PayoffMatrix,
    PoolShare,
    all_follow_profile,
    backward_induction,
    build_tree_p1_first,
    build_tree_p2_first,
    equilibrium_check,
    fees_satisfy_bounds,
    load_game_config,
    matrix_equilibrium,
    min_fees,
    payoff_matrix,
    random_config,
)

from conftest import FIXTURES, load_fixture  # noqa: E402


@pytest.fixture
def game():
    return load_game_config(load_fixture("game.json"))


def with_fees(game, sigma1=None, gamma1=None):
    data = game.to_dict()
    if sigma1 is not None:
        data["sigma1"] = sigma1
    if gamma1 is not None:
        data["gamma1"] = gamma1
    return GameConfig.from_dict(data)


def payoffs(leaf):
    return tuple(int(v) if v.denominator == 1 else v for v in leaf.payoffs())


class TestGameConfig:
    """Test configuration validation."""

    def test_fixture_loads_from_file(self):
        game = load_game_config(FIXTURES / "game.json")
        assert game.gap == 50000
        assert game.bribe_sigma == game.bribe_gamma == 50000
        assert game.total == 100000

    def test_explicit_bribes(self, game):
        data = dict(game.to_dict(), sigma2="20000")
        assert GameConfig.from_dict(data).bribe_sigma == 20000

    @pytest.mark.parametrize("field,value", [
        ("tx1", [90000, 10000]),
        ("tx3", [30000, 60000]),
        ("sigma1", -1),
    ])
    def test_invalid(self, game, field, value):
        data = dict(game.to_dict(), **{field: value})
        with pytest.raises(InvalidConfig):
            GameConfig.from_dict(data)

    def test_missing_field(self, game):
        data = game.to_dict()
        del data["k2"]
        with pytest.raises(InvalidConfig):
            GameConfig.from_dict(data)

    def test_not_a_number(self, game):
        with pytest.raises(InvalidConfig):
            GameConfig.from_dict(dict(game.to_dict(), gamma1="twelve"))


class TestPayoffMatrix:
    """Test the normal-form game."""

    def test_fixture_entries(self, game):
        matrix = payoff_matrix(game)
        assert matrix[("F", "TX2")] == (100000, 0)
        assert matrix[("F", "TX1")] == (40000, 60000)
        assert all(matrix[("D_2", col)][0] == 0 for col in COLUMNS)

    def test_symbolic_entries_for_random_configs(self):
        rng = random.Random(7)
        for _ in range(100):
            game = random_config(rng)
            matrix = payoff_matrix(game)
            (a1, b1), (a2, b2), (a3, b3) = game.states
            expected = {
                ("F", "TX1"): (b1, a1), ("F", "TX2"): (a2 + b2, 0), ("F", "TX3"): (a3 + b3, 0),
                ("D_1", "TX1"): (b1, a1), ("D_1", "TX2"): (b2, a2), ("D_1", "TX3"): (b3, a3),
                ("D_2", "TX1"): (0, a1), ("D_2", "TX2"): (0, a2), ("D_2", "TX3"): (0, a3),
            }
            assert matrix.entries == expected
            assert ("F", "TX1") in matrix_equilibrium(matrix)

    def test_follow_is_an_equilibrium(self, game):
        equilibria = matrix_equilibrium(payoff_matrix(game))
        assert ("F", "TX1") in equilibria
        assert ("D_1", "TX2") not in equilibria

    def test_ties_count(self):
        flat = PayoffMatrix({(r, c): (Fraction(1), Fraction(1)) for r in ROWS for c in COLUMNS})
        assert len(matrix_equilibrium(flat)) == 9

    def test_report_shape(self, game):
        report = payoff_matrix(game).to_dict()
        assert report["entries"][0][1] == ["100000", "0"]


class TestTrees:
    """Test the two extensive forms."""

    def test_p1_first_leaves(self, game):
        tree = build_tree_p1_first(game)
        assert payoffs(tree.leaf_at("S2", "F", "F", "F")) == (0, 76000, 2400, 2400)
        assert payoffs(tree.leaf_at("S1", "D")) == (60000, 0, 0, 0)
        assert payoffs(tree.leaf_at("S1", "F", "F", "F")) == (60000, 28000, 2400, 0)
        assert payoffs(tree.leaf_at("S2", "D")) == (50000, 0, 0, 10000)
        assert payoffs(tree.leaf_at("S2", "F", "F", "D")) == (30000, 20000, 10000, 0)

    def test_p2_first_leaves(self, game):
        tree = build_tree_p2_first(game)
        assert payoffs(tree.leaf_at("S1", "D")) == (0, 0, 0, 0)
        assert payoffs(tree.leaf_at("S2", "F", "F")) == (88000, 0, 2400, 0)
        assert payoffs(tree.leaf_at("S1", "F", "D")) == (0, -10000, 10000, 0)
        assert payoffs(tree.leaf_at("S3", "F", "D")) == (30000, 20000, 10000, 0)
        assert len(tree.warnings) == 1

    def test_information_sets(self, game):
        p1_first = build_tree_p1_first(game).info_sets()
        assert p1_first["P4:watch"].node_ids == ("s1", "s2", "s3")
        assert p1_first["P3:publish"].node_ids == ("a", "b", "c")
        p2_first = build_tree_p2_first(game).info_sets()
        assert p2_first["P3:publish"].node_ids == ("s1", "s2", "s3")
        for info in list(p1_first.values()) + list(p2_first.values()):
            assert info.actions in (("S1", "S2", "S3"), ("F", "D"))

    def test_leaves_never_pay_out_more_than_the_channel(self, game):
        for tree in (build_tree_p1_first(game), build_tree_p2_first(game)):
            for node in tree.leaves():
                assert node.leaf.total_paid() <= game.total

    def test_pool_share(self):
        earned = PoolShare(Fraction(12000), 5, split=False)
        offered = PoolShare(Fraction(12000), 5)
        assert earned.per_member == offered.per_member == 2400
        assert earned.member_value == 12000
        assert offered.member_value == 2400


class TestEquilibrium:
    """Test the equilibrium check and the fee bounds."""

    def test_all_follow_holds_above_the_bounds(self, game):
        for tree in (build_tree_p1_first(game), build_tree_p2_first(game)):
            result = equilibrium_check(tree, all_follow_profile(tree))
            assert result.is_equilibrium, result.to_dict()

    def test_underpaid_publishers_collude(self, game):
        cheap = with_fees(game, sigma1=8000)
        result = equilibrium_check(build_tree_p1_first(cheap),
                                   all_follow_profile(build_tree_p1_first(cheap)))
        assert not result.is_equilibrium
        players = {(d.player, d.node_id) for d in result.deviations}
        assert players == {("P3", "b"), ("P3", "c")}
        deviation = result.deviations[0]
        assert (deviation.follow_value, deviation.deviation_value) == (8000, 10000)
        assert deviation.delta == 2000

    def test_underpaid_watchdogs_collude(self, game):
        cheap = with_fees(game, gamma1=9000)
        tree = build_tree_p1_first(cheap)
        result = equilibrium_check(tree, all_follow_profile(tree))
        assert {d.player for d in result.deviations} == {"P4"}

    def test_fee_on_the_bound_is_not_enough(self, game):
        assert not GameAnalyzer().all_follow_holds(with_fees(game, sigma1=10000))
        assert GameAnalyzer().all_follow_holds(with_fees(game, sigma1="10001"))

    def test_small_gap_exact_rationals(self):
        small = GameConfig(tx1=(5, 15), tx2=(10, 10), tx3=(0, 20),
                           sigma1=2, gamma1=3, k1=5, k2=5)
        assert min_fees(small)["sigma1"] == 2
        assert not fees_satisfy_bounds(small)
        assert not GameAnalyzer().all_follow_holds(small)
        nudged = GameConfig(tx1=(5, 15), tx2=(10, 10), tx3=(0, 20),
                            sigma1=Fraction(2001, 1000), gamma1=3, k1=5, k2=5)
        assert fees_satisfy_bounds(nudged)
        assert GameAnalyzer().all_follow_holds(nudged)

    def test_incomplete_profile(self, game):
        tree = build_tree_p1_first(game)
        profile = all_follow_profile(tree)
        del profile["P4:watch"]
        with pytest.raises(IncompleteProfile):
            equilibrium_check(tree, profile)

    def test_unknown_action(self, game):
        tree = build_tree_p2_first(game)
        profile = dict(all_follow_profile(tree), **{"P2:root": "S4"})
        with pytest.raises(IncompleteProfile):
            equilibrium_check(tree, profile)

    def test_root_deviation_is_reported(self, game):
        tree = build_tree_p1_first(game)
        profile = dict(all_follow_profile(tree), **{"P1:root": "S2"})
        result = equilibrium_check(tree, profile)
        assert any(d.player == "P1" and d.action == "S1" for d in result.deviations)

    def test_backward_induction(self, game):
        solved = backward_induction(build_tree_p1_first(game))
        assert solved["choices"]["root"] == "S1"
        assert solved["outcome"] == ["60000", "28000", "2400", "0"]

    def test_min_fees(self, game):
        assert min_fees(game) == {"sigma1": 10000, "gamma1": 10000}
        single = GameConfig.from_dict(dict(game.to_dict(), k1=1))
        assert min_fees(single)["sigma1"] == 50000

    def test_min_fees_agree_with_channel_bounds(self, game):
        params = ChannelParams(omega_a=50000, omega_b=50000)
        states = [ChannelState(i, int(a), int(b)) for i, (a, b) in enumerate(game.states, 1)]
        check = check_fee_bounds(params, states)
        bounds = min_fees(game)
        assert (check.sigma1_min, check.gamma1_min) == (bounds["sigma1"], bounds["gamma1"])


class TestAnalyzer:
    """Test the analyzer report and the randomised sweep."""

    def test_analyze_fixture(self, game):
        report = GameAnalyzer().analyze(game)
        assert "all-follow" in report["equilibria"]
        assert report["min_fees"] == {"sigma1": "10000", "gamma1": "10000"}
        assert report["fees_within_bounds"]
        assert all(c["is_equilibrium"] for c in report["tree_checks"].values())
        assert len(report["warnings"]) == 1

    def test_random_configs_are_fee_feasible(self):
        rng = random.Random(3)
        for _ in range(200):
            assert random_config(rng).fee_feasible

    def test_sweep_finds_no_counterexample(self, config):
        result = GameAnalyzer(config).verify_fee_bounds(samples=500, seed=20190101)
        assert result.ok, result.counterexamples[:3]
        assert 0 < result.within_bounds < result.samples
        assert result.equilibria == result.within_bounds

    def test_sweep_is_deterministic(self, config):
        analyzer = GameAnalyzer(config)
        first = analyzer.verify_fee_bounds(samples=50, seed=11).to_dict()
        assert analyzer.verify_fee_bounds(samples=50, seed=11).to_dict() == first
