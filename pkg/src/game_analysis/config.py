"""
Game configuration: three channel states and the pool fees.

TX1 is the current state, TX2 the state most favourable to player 1 (the
gateway) and TX3 the least favourable one:

    α₂ > α₁ > α₃,  β₃ > β₁ > β₂,  α₁+β₁ = α₂+β₂ = α₃+β₃

Bribes σ₂ (publisher pool) and γ₂ (watchdog pool) default to the largest
bribe the gateway can afford, α₂ − α₃.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from .errors import InvalidConfig

Number = Union[int, str, Fraction]


def to_fraction(value: Number) -> Fraction:
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InvalidConfig(f"not an exact number: {value!r}") from e


@dataclass(frozen=True)
class GameConfig:
    tx1: Tuple[Fraction, Fraction]
    tx2: Tuple[Fraction, Fraction]
    tx3: Tuple[Fraction, Fraction]
    sigma1: Fraction
    gamma1: Fraction
    k1: int
    k2: int
    sigma2: Optional[Fraction] = None
    gamma2: Optional[Fraction] = None

    def __post_init__(self):
        for name in ("tx1", "tx2", "tx3"):
            object.__setattr__(self, name, tuple(to_fraction(v) for v in getattr(self, name)))
        for name in ("sigma1", "gamma1", "sigma2", "gamma2"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, to_fraction(value))

        a1, b1 = self.tx1
        a2, b2 = self.tx2
        a3, b3 = self.tx3
        if not a2 > a1 > a3:
            raise InvalidConfig(f"need alpha2 > alpha1 > alpha3, got {a2}, {a1}, {a3}")
        if not b3 > b1 > b2:
            raise InvalidConfig(f"need beta3 > beta1 > beta2, got {b3}, {b1}, {b2}")
        if not a1 + b1 == a2 + b2 == a3 + b3:
            raise InvalidConfig("the three states must hold the same total")
        if min(a1, a2, a3, b1, b2, b3) < 0:
            raise InvalidConfig("balances must be non-negative")
        for name in ("sigma1", "gamma1", "sigma2", "gamma2"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise InvalidConfig(f"{name} must be >= 0")
        if self.k1 < 1 or self.k2 < 1:
            raise InvalidConfig("pool sizes must be at least 1")

    def alpha(self, i: int) -> Fraction:
        return self.states[i - 1][0]

    def beta(self, i: int) -> Fraction:
        return self.states[i - 1][1]

    @property
    def states(self) -> Tuple[Tuple[Fraction, Fraction], ...]:
        return (self.tx1, self.tx2, self.tx3)

    @property
    def total(self) -> Fraction:
        return self.tx1[0] + self.tx1[1]

    @property
    def gap(self) -> Fraction:
        """α₂ − α₃."""
        return self.tx2[0] - self.tx3[0]

    @property
    def bribe_sigma(self) -> Fraction:
        return self.gap if self.sigma2 is None else self.sigma2

    @property
    def bribe_gamma(self) -> Fraction:
        return self.gap if self.gamma2 is None else self.gamma2

    @property
    def fee_feasible(self) -> bool:
        """Both fees fit in the smallest counterparty balance β₂."""
        return self.sigma1 + self.gamma1 <= self.tx2[1]

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "tx1": [str(v) for v in self.tx1],
            "tx2": [str(v) for v in self.tx2],
            "tx3": [str(v) for v in self.tx3],
            "sigma1": str(self.sigma1),
            "gamma1": str(self.gamma1),
            "k1": self.k1,
            "k2": self.k2,
        }
        if self.sigma2 is not None:
            data["sigma2"] = str(self.sigma2)
        if self.gamma2 is not None:
            data["gamma2"] = str(self.gamma2)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GameConfig":
        try:
            states = [tuple(to_fraction(v) for v in data[name]) for name in ("tx1", "tx2", "tx3")]
            if any(len(s) != 2 for s in states):
                raise InvalidConfig("each state is an [alpha, beta] pair")
            return cls(
                tx1=states[0],
                tx2=states[1],
                tx3=states[2],
                sigma1=to_fraction(data["sigma1"]),
                gamma1=to_fraction(data["gamma1"]),
                k1=int(data["k1"]),
                k2=int(data["k2"]),
                sigma2=to_fraction(data["sigma2"]) if data.get("sigma2") is not None else None,
                gamma2=to_fraction(data["gamma2"]) if data.get("gamma2") is not None else None,
            )
        except KeyError as e:
            raise InvalidConfig(f"missing field {e.args[0]}") from e
        except TypeError as e:
            raise InvalidConfig(str(e)) from e


def load_game_config(source: Union[str, Path, Dict[str, Any]]) -> GameConfig:
    """Load a GameConfig from a JSON file or a parsed dict."""
    if isinstance(source, dict):
        return GameConfig.from_dict(source)
    try:
        with open(source, 'r', encoding='utf-8') as f:
            return GameConfig.from_dict(json.load(f))
    except FileNotFoundError as e:
        raise InvalidConfig(f"game config {source} not found") from e
    except json.JSONDecodeError as e:
        raise InvalidConfig(f"game config {source} is not valid JSON: {e}") from e
