"""Payoff matrix, extensive-form games and fee-bound verification."""

from .errors import GameError, InvalidConfig, IncompleteProfile
from .config import GameConfig, load_game_config, to_fraction
from .matrix import (
    ROWS,
    COLUMNS,
    FOLLOW_PROFILE,
    PayoffMatrix,
    payoff_matrix,
    matrix_equilibrium,
    sorted_equilibria,
)
from .trees import (
    P1_FIRST,
    P2_FIRST,
    PoolShare,
    Leaf,
    Node,
    InfoSet,
    GameTree,
    build_tree_p1_first,
    build_tree_p2_first,
    all_follow_profile,
)
from .equilibrium import (
    Deviation,
    EquilibriumResult,
    equilibrium_check,
    backward_induction,
    min_fees,
    fees_satisfy_bounds,
)
from .analyzer import GameAnalyzer, SweepResult, random_config

__all__ = [
    "GameError",
    "InvalidConfig",
    "IncompleteProfile",
    "GameConfig",
    "load_game_config",
    "to_fraction",
    "ROWS",
    "COLUMNS",
    "FOLLOW_PROFILE",
    "PayoffMatrix",
    "payoff_matrix",
    "matrix_equilibrium",
    "sorted_equilibria",
    "P1_FIRST",
    "P2_FIRST",
    "PoolShare",
    "Leaf",
    "Node",
    "InfoSet",
    "GameTree",
    "build_tree_p1_first",
    "build_tree_p2_first",
    "all_follow_profile",
    "Deviation",
    "EquilibriumResult",
    "equilibrium_check",
    "backward_induction",
    "min_fees",
    "fees_satisfy_bounds",
    "GameAnalyzer",
    "SweepResult",
    "random_config",
]
