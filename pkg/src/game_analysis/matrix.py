"""
Two-player payment channel game in normal form.

Player I picks the state to publish (columns TX1..TX3), player II responds
(rows F, D_1, D_2). Entries are (payoff II, payoff I).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Set, Tuple

from .config import GameConfig

ROWS = ("F", "D_1", "D_2")
COLUMNS = ("TX1", "TX2", "TX3")
FOLLOW_PROFILE = ("F", "TX1")

Entry = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class PayoffMatrix:
    entries: Dict[Tuple[str, str], Entry]

    def __getitem__(self, key: Tuple[str, str]) -> Entry:
        return self.entries[key]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": list(ROWS),
            "columns": list(COLUMNS),
            "entries": [
                [[str(v) for v in self.entries[(row, col)]] for col in COLUMNS] for row in ROWS
            ],
        }


def payoff_matrix(config: GameConfig) -> PayoffMatrix:
    """Build the 3x3 matrix from the three states."""
    entries: Dict[Tuple[str, str], Entry] = {}
    for i, col in enumerate(COLUMNS, start=1):
        alpha, beta = config.alpha(i), config.beta(i)
        if i == 1:
            # publishing the current state leaves nothing to punish
            entries[("F", col)] = (beta, alpha)
        else:
            entries[("F", col)] = (alpha + beta, Fraction(0))
        entries[("D_1", col)] = (beta, alpha)
        entries[("D_2", col)] = (Fraction(0), alpha)
    return PayoffMatrix(entries)


def matrix_equilibrium(matrix: PayoffMatrix) -> Set[Tuple[str, str]]:
    """Pure profiles (row, column) where no player gains by deviating alone; ties count."""
    equilibria = set()
    for row in ROWS:
        for col in COLUMNS:
            payoff_ii, payoff_i = matrix[(row, col)]
            best_ii = max(matrix[(r, col)][0] for r in ROWS)
            best_i = max(matrix[(row, c)][1] for c in COLUMNS)
            if payoff_ii >= best_ii and payoff_i >= best_i:
                equilibria.add((row, col))
    return equilibria


def profile_label(profile: Tuple[str, str]) -> str:
    return "all-follow" if profile == FOLLOW_PROFILE else f"{profile[0]}/{profile[1]}"


def sorted_equilibria(equilibria: Set[Tuple[str, str]]) -> List[str]:
    order = {(r, c): (ROWS.index(r), COLUMNS.index(c)) for r in ROWS for c in COLUMNS}
    return [profile_label(p) for p in sorted(equilibria, key=order.__getitem__)]
