"""
Game analyzer: runs the matrix and tree checks for one configuration and
sweeps random configurations to confirm that the all-follow profile is an
equilibrium exactly when the pool fees clear their bounds.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from tqdm import tqdm

from common.config import get_default_config
from common.logging_setup import build_logger

from .config import GameConfig
from .equilibrium import backward_induction, equilibrium_check, fees_satisfy_bounds, min_fees
from .matrix import matrix_equilibrium, payoff_matrix, sorted_equilibria
from .trees import all_follow_profile, build_tree_p1_first, build_tree_p2_first

MAX_SWEEP_POOL = 10


def random_config(rng: random.Random, max_total: int = 200000) -> GameConfig:
    """
    Draw a valid configuration whose fees fit the smallest counterparty
    balance: σ₁ and γ₁ in [0, β₂/2]. A third of the fees sit on or right
    next to their bound so both sides of the strict inequality get hit.
    """
    total = rng.randint(10, max_total)
    a3, a1, a2 = sorted(rng.sample(range(0, total - 1), 3))
    k1, k2 = rng.randint(1, MAX_SWEEP_POOL), rng.randint(1, MAX_SWEEP_POOL)
    cap = Fraction(total - a2, 2)
    gap = a2 - a3

    def draw_fee(k: int) -> Fraction:
        bound = Fraction(gap, k)
        mode = rng.randrange(3)
        if mode == 0:
            value = bound
        elif mode == 1:
            value = bound + Fraction(rng.randint(-4, 4), 8)
        else:
            value = cap * Fraction(rng.randint(0, 64), 64)
        return min(max(value, Fraction(0)), cap)

    return GameConfig(
        tx1=(a1, total - a1),
        tx2=(a2, total - a2),
        tx3=(a3, total - a3),
        sigma1=draw_fee(k1),
        gamma1=draw_fee(k2),
        k1=k1,
        k2=k2,
    )


@dataclass
class SweepResult:
    samples: int
    seed: int
    within_bounds: int = 0
    equilibria: int = 0
    counterexamples: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> Dict[str, Any]:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "within_bounds": self.within_bounds,
            "all_follow_equilibria": self.equilibria,
            "counterexamples": self.counterexamples,
            "ok": self.ok,
        }


class GameAnalyzer:
    """Checks the fairness claims of the channel games."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        self.config = config or get_default_config()
        self.logger = self._setup_logging()

    def _setup_logging(self):
        """Setup logging for the analyzer."""
        return build_logger("game")

    def tree_checks(self, game: GameConfig) -> Dict[str, Any]:
        checks = {}
        for tree in (build_tree_p1_first(game), build_tree_p2_first(game)):
            result = equilibrium_check(tree, all_follow_profile(tree))
            checks[tree.name] = result.to_dict()
        return checks

    def all_follow_holds(self, game: GameConfig) -> bool:
        for tree in (build_tree_p1_first(game), build_tree_p2_first(game)):
            if not equilibrium_check(tree, all_follow_profile(tree)).is_equilibrium:
                return False
        return True

    def analyze(self, game: GameConfig) -> Dict[str, Any]:
        """Full report: matrix, its equilibria, both trees and the fee bounds."""
        matrix = payoff_matrix(game)
        equilibria = sorted_equilibria(matrix_equilibrium(matrix))
        trees = [build_tree_p1_first(game), build_tree_p2_first(game)]
        warnings = [w for tree in trees for w in tree.warnings]

        checks = {}
        for tree in trees:
            result = equilibrium_check(tree, all_follow_profile(tree))
            checks[tree.name] = result.to_dict()
            if not result.is_equilibrium:
                self.logger.warning(
                    f"all-follow is not an equilibrium of {tree.name}: "
                    f"{len(result.deviations)} profitable deviation(s)"
                )

        bounds = min_fees(game)
        return {
            "config": game.to_dict(),
            "matrix": matrix.to_dict(),
            "equilibria": equilibria,
            "tree_checks": checks,
            "backward_induction": {tree.name: backward_induction(tree) for tree in trees},
            "min_fees": {name: str(value) for name, value in bounds.items()},
            "fees_within_bounds": fees_satisfy_bounds(game),
            "warnings": warnings,
        }

    def verify_fee_bounds(self, samples: Optional[int] = None, seed: Optional[int] = None,
                          progress: bool = False) -> SweepResult:
        """Compare the all-follow check with the fee bounds over random configurations."""
        analysis = self.config.get("analysis", {})
        samples = samples if samples is not None else analysis.get("sweep_samples", 500)
        seed = seed if seed is not None else analysis.get("sweep_seed", 0)

        rng = random.Random(seed)
        result = SweepResult(samples=samples, seed=seed)
        for _ in tqdm(range(samples), desc="fee-bound sweep", disable=not progress):
            game = random_config(rng)
            expected = fees_satisfy_bounds(game)
            observed = self.all_follow_holds(game)
            result.within_bounds += expected
            result.equilibria += observed
            if expected != observed:
                result.counterexamples.append(game.to_dict())

        if result.ok:
            self.logger.info(f"fee-bound sweep: {samples} configurations, no counterexample")
        else:
            self.logger.error(
                f"fee-bound sweep: {len(result.counterexamples)} counterexample(s) "
                f"in {samples} configurations"
            )
        return result
