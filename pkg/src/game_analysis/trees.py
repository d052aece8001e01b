"""
Extensive-form games between the gateway (P1), the device (P2), the
publisher pool (P3) and the watchdog pool (P4).

Pool payoffs are kept as a PoolShare: the amount paid to the pool and
whether it is split among all K members. A fee earned by following goes to
whichever single member acts, so it is not split; a bribe for unanimous
collusion is. The displayed per-member value is always total/K.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Tuple

from .config import GameConfig

PLAYERS = ("P1", "P2", "P3", "P4")
POOL_PLAYERS = ("P3", "P4")
FOLLOW = "F"
DEVIATE = "D"
ROOT_ACTIONS = ("S1", "S2", "S3")
BINARY_ACTIONS = (FOLLOW, DEVIATE)

P1_FIRST = "p1_first"
P2_FIRST = "p2_first"


@dataclass(frozen=True)
class PoolShare:
    total: Fraction
    size: int
    split: bool = True

    @property
    def per_member(self) -> Fraction:
        return Fraction(self.total) / self.size

    @property
    def member_value(self) -> Fraction:
        """What one member obtains from this outcome."""
        return self.per_member if self.split else Fraction(self.total)


def fee(total: Fraction, size: int) -> PoolShare:
    return PoolShare(Fraction(total), size, split=False)


def bribe(total: Fraction, size: int) -> PoolShare:
    return PoolShare(Fraction(total), size, split=True)


def nothing(size: int) -> PoolShare:
    return PoolShare(Fraction(0), size, split=True)


@dataclass(frozen=True)
class Leaf:
    p1: Fraction
    p2: Fraction
    p3: PoolShare
    p4: PoolShare

    def payoffs(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        """(P1, P2, P3, P4) with pool payoffs per member."""
        return (Fraction(self.p1), Fraction(self.p2), self.p3.per_member, self.p4.per_member)

    def value(self, player: str) -> Fraction:
        """Payoff a player weighs when choosing an action."""
        if player == "P1":
            return Fraction(self.p1)
        if player == "P2":
            return Fraction(self.p2)
        share = self.p3 if player == "P3" else self.p4
        return share.member_value

    def total_paid(self) -> Fraction:
        return Fraction(self.p1) + Fraction(self.p2) + self.p3.total + self.p4.total

    def to_dict(self) -> Dict[str, Any]:
        return {"payoffs": [str(v) for v in self.payoffs()]}


@dataclass
class Node:
    node_id: str
    path: Tuple[str, ...]
    player: Optional[str] = None
    info_set: Optional[str] = None
    children: Dict[str, "Node"] = field(default_factory=dict)
    leaf: Optional[Leaf] = None

    @property
    def is_leaf(self) -> bool:
        return self.leaf is not None

    def child(self, action: str, node_id: str, **kwargs) -> "Node":
        node = Node(node_id=node_id, path=self.path + (action,), **kwargs)
        self.children[action] = node
        return node

    def terminal(self, action: str, leaf: Leaf) -> "Node":
        return self.child(action, f"{self.node_id}/{action}", leaf=leaf)


@dataclass(frozen=True)
class InfoSet:
    info_set_id: str
    player: str
    node_ids: Tuple[str, ...]
    actions: Tuple[str, ...]


@dataclass
class GameTree:
    name: str
    root: Node
    warnings: List[str] = field(default_factory=list)

    def nodes(self) -> Iterator[Node]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(list(node.children.values())))

    def decision_nodes(self) -> List[Node]:
        return [n for n in self.nodes() if not n.is_leaf]

    def leaves(self) -> List[Node]:
        return [n for n in self.nodes() if n.is_leaf]

    def node(self, node_id: str) -> Node:
        for n in self.nodes():
            if n.node_id == node_id:
                return n
        raise KeyError(node_id)

    def info_sets(self) -> Dict[str, InfoSet]:
        grouped: Dict[str, List[Node]] = {}
        for n in self.decision_nodes():
            grouped.setdefault(n.info_set, []).append(n)
        return {
            set_id: InfoSet(set_id, members[0].player, tuple(m.node_id for m in members),
                            tuple(members[0].children))
            for set_id, members in grouped.items()
        }

    def leaf_at(self, *actions: str) -> Leaf:
        """Leaf reached by following the given actions from the root."""
        node = self.root
        for action in actions:
            node = node.children[action]
        if node.leaf is None:
            raise KeyError(f"path {'/'.join(actions)} ends at a decision node")
        return node.leaf

    def play(self, profile: Dict[str, str], start: Optional[Node] = None) -> Node:
        """Follow a profile (action per information set) down to a leaf."""
        node = start or self.root
        while not node.is_leaf:
            node = node.children[profile[node.info_set]]
        return node

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "info_sets": {
                k: {"player": v.player, "nodes": list(v.node_ids), "actions": list(v.actions)}
                for k, v in sorted(self.info_sets().items())
            },
            "leaves": {
                "/".join(n.path): [str(v) for v in n.leaf.payoffs()] for n in self.leaves()
            },
        }


def all_follow_profile(tree: GameTree) -> Dict[str, str]:
    """S1 at the root, F at every other information set."""
    return {
        set_id: ROOT_ACTIONS[0] if info.actions == ROOT_ACTIONS else FOLLOW
        for set_id, info in tree.info_sets().items()
    }


def build_tree_p1_first(config: GameConfig) -> GameTree:
    """
    The gateway publishes state i; the watchdog pool decides whether to
    alert the device, the device whether to respond, and the publisher pool
    whether to publish the response.
    """
    k1, k2 = config.k1, config.k2
    s1, g1 = config.sigma1, config.gamma1
    s2, g2 = config.bribe_sigma, config.bribe_gamma
    zero = Fraction(0)

    root = Node(node_id="root", path=(), player="P1", info_set="P1:root")
    for i, action in enumerate(ROOT_ACTIONS, start=1):
        alpha, beta = config.alpha(i), config.beta(i)
        watch = root.child(action, f"s{i}", player="P4", info_set="P4:watch")
        device = watch.child(FOLLOW, f"s{i}/device", player="P2", info_set=f"P2:{action}")
        publish = device.child(FOLLOW, "abc"[i - 1], player="P3", info_set="P3:publish")

        if i == 1:
            publish.terminal(FOLLOW, Leaf(alpha, beta - s1, fee(s1, k1), nothing(k2)))
            publish.terminal(DEVIATE, Leaf(alpha, zero, nothing(k1), nothing(k2)))
            device.terminal(DEVIATE, Leaf(alpha, zero, nothing(k1), nothing(k2)))
            watch.terminal(DEVIATE, Leaf(alpha, zero, nothing(k1), nothing(k2)))
        else:
            publish.terminal(FOLLOW, Leaf(zero, alpha + beta - s1 - g1, fee(s1, k1), fee(g1, k2)))
            publish.terminal(DEVIATE, Leaf(alpha - s2, beta, bribe(s2, k1), nothing(k2)))
            device.terminal(DEVIATE, Leaf(alpha + beta, zero, nothing(k1), nothing(k2)))
            watch.terminal(DEVIATE, Leaf(alpha + beta - g2, zero, nothing(k1), bribe(g2, k2)))

    return GameTree(P1_FIRST, root)


def build_tree_p2_first(config: GameConfig) -> GameTree:
    """
    The device publishes state i through the publisher pool, which may drop
    it; the gateway then follows or deviates.
    """
    k1, k2 = config.k1, config.k2
    s1, s2 = config.sigma1, config.bribe_sigma
    zero = Fraction(0)
    warnings: List[str] = []

    root = Node(node_id="root", path=(), player="P2", info_set="P2:root")
    for i, action in enumerate(ROOT_ACTIONS, start=1):
        alpha, beta = config.alpha(i), config.beta(i)
        publish = root.child(action, f"s{i}", player="P3", info_set="P3:publish")
        gateway = publish.child(FOLLOW, f"s{i}/gateway", player="P1", info_set=f"P1:{action}")
        publish.terminal(DEVIATE, Leaf(zero, zero, nothing(k1), nothing(k2)))

        if i == 1:
            gateway.terminal(FOLLOW, Leaf(alpha, beta - s1, fee(s1, k1), nothing(k2)))
            gateway.terminal(DEVIATE, Leaf(zero, beta - s2, bribe(s2, k1), nothing(k2)))
        else:
            gateway.terminal(FOLLOW, Leaf(alpha + beta - s1, zero, fee(s1, k1), nothing(k2)))
            gateway.terminal(DEVIATE, Leaf(alpha, beta - s2, bribe(s2, k1), nothing(k2)))

    warnings.append(
        "p2_first S3/F/D leaf uses (alpha3, beta3 - sigma2) following the S1/S2 pattern "
        "instead of reusing (alpha2, beta2 - sigma2)"
    )
    return GameTree(P2_FIRST, root, warnings)
