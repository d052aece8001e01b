"""
Equilibrium checks on the extensive-form games.

A profile fixes one action per information set. Every decision node is
examined, off the played path too: the acting player switches the action of
its information set and the game is replayed from that node.

Pool players deviate only as a whole (unanimous collusion). A pool member
compares the bribe share it would get against the fee it gets by following,
and joins the collusion as soon as the share is positive and at least as
large as that fee.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from channel_protocol.fees import fee_bounds

from .config import GameConfig
from .errors import IncompleteProfile
from .trees import DEVIATE, POOL_PLAYERS, GameTree, Node


@dataclass(frozen=True)
class Deviation:
    player: str
    info_set: str
    node_id: str
    action: str
    follow_value: Fraction
    deviation_value: Fraction

    @property
    def delta(self) -> Fraction:
        return self.deviation_value - self.follow_value

    def to_dict(self) -> Dict[str, Any]:
        return {
            "player": self.player,
            "info_set": self.info_set,
            "node": self.node_id,
            "action": self.action,
            "follow_value": str(self.follow_value),
            "deviation_value": str(self.deviation_value),
            "delta": str(self.delta),
        }


@dataclass
class EquilibriumResult:
    tree: str
    profile: Dict[str, str]
    outcome: Tuple[Fraction, ...]
    deviations: List[Deviation] = field(default_factory=list)

    @property
    def is_equilibrium(self) -> bool:
        return not self.deviations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tree": self.tree,
            "profile": dict(sorted(self.profile.items())),
            "outcome": [str(v) for v in self.outcome],
            "is_equilibrium": self.is_equilibrium,
            "profitable_deviations": [d.to_dict() for d in self.deviations],
        }


def _validate_profile(tree: GameTree, profile: Dict[str, str]) -> None:
    for set_id, info in tree.info_sets().items():
        if set_id not in profile:
            raise IncompleteProfile(f"no action for information set {set_id}")
        if profile[set_id] not in info.actions:
            raise IncompleteProfile(
                f"action {profile[set_id]!r} not available at {set_id} ({', '.join(info.actions)})"
            )


def _profitable(player: str, follow_leaf, deviation_leaf) -> bool:
    if deviation_leaf is follow_leaf:
        return False
    follow = follow_leaf.value(player)
    deviation = deviation_leaf.value(player)
    if player in POOL_PLAYERS:
        return deviation > 0 and deviation >= follow
    return deviation > follow


def _node_deviations(tree: GameTree, node: Node, profile: Dict[str, str]) -> List[Deviation]:
    follow_leaf = tree.play(profile, node).leaf
    found = []
    for action in node.children:
        if action == profile[node.info_set]:
            continue
        switched = dict(profile, **{node.info_set: action})
        deviation_leaf = tree.play(switched, node).leaf
        if _profitable(node.player, follow_leaf, deviation_leaf):
            found.append(Deviation(
                player=node.player,
                info_set=node.info_set,
                node_id=node.node_id,
                action=action,
                follow_value=follow_leaf.value(node.player),
                deviation_value=deviation_leaf.value(node.player),
            ))
    return found


def equilibrium_check(tree: GameTree, profile: Dict[str, str]) -> EquilibriumResult:
    """List every profitable single-player deviation from a profile."""
    _validate_profile(tree, profile)
    result = EquilibriumResult(tree.name, dict(profile), tree.play(profile).leaf.payoffs())
    for node in tree.decision_nodes():
        result.deviations.extend(_node_deviations(tree, node, profile))
    return result


def backward_induction(tree: GameTree) -> Dict[str, Any]:
    """
    Solve the perfect-information relaxation, ignoring information sets.

    Ties go to the first listed action, except that a pool prefers colluding
    whenever its share is positive and not below the fee.
    """
    choices: Dict[str, str] = {}

    def solve(node: Node):
        if node.is_leaf:
            return node.leaf
        outcomes = {action: solve(child) for action, child in node.children.items()}
        actions = list(outcomes)
        best = actions[0]
        for action in actions[1:]:
            candidate, current = outcomes[action], outcomes[best]
            if node.player in POOL_PLAYERS and action == DEVIATE:
                if _profitable(node.player, current, candidate):
                    best = action
            elif candidate.value(node.player) > current.value(node.player):
                best = action
        choices[node.node_id] = best
        return outcomes[best]

    leaf = solve(tree.root)
    return {
        "tree": tree.name,
        "choices": dict(sorted(choices.items())),
        "outcome": [str(v) for v in leaf.payoffs()],
    }


def min_fees(config: GameConfig) -> Dict[str, Fraction]:
    """Smallest σ₁ and γ₁ bounds; the fees themselves must exceed them strictly."""
    return fee_bounds(config.gap, config.k1, config.k2)


def fees_satisfy_bounds(config: GameConfig) -> bool:
    bounds = min_fees(config)
    return config.sigma1 > bounds["sigma1"] and config.gamma1 > bounds["gamma1"]
