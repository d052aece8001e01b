"""Minimum pool fees that keep collusion with a cheating gateway unprofitable."""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Sequence

from .errors import EmptyStates
from .params import ChannelParams, ChannelState


@dataclass(frozen=True)
class FeeBoundCheck:
    ok: bool
    sigma1_min: Fraction
    gamma1_min: Fraction

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "sigma1_min": str(self.sigma1_min),
            "gamma1_min": str(self.gamma1_min),
            "sigma1_min_sat": math.ceil(self.sigma1_min),
            "gamma1_min_sat": math.ceil(self.gamma1_min),
        }


def fee_bounds(alpha_gap: int, k1: int, k2: int) -> Dict[str, Fraction]:
    """The largest bribe a pool can be offered, shared among its members."""
    return {"sigma1": Fraction(alpha_gap, k1), "gamma1": Fraction(alpha_gap, k2)}


def check_fee_bounds(params: ChannelParams, states: Sequence[ChannelState]) -> FeeBoundCheck:
    """σ₁ and γ₁ must strictly exceed (α_max − α_min)/K over the channel's states."""
    if not states:
        raise EmptyStates("fee bounds need at least one channel state")
    balances = [s.balance_a for s in states]
    bounds = fee_bounds(max(balances) - min(balances), params.k1, params.k2)
    ok = params.sigma1 > bounds["sigma1"] and params.gamma1 > bounds["gamma1"]
    return FeeBoundCheck(ok, bounds["sigma1"], bounds["gamma1"])
