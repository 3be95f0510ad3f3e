"""The abelian group of SI dimension exponent vectors.

A :class:`Dimension` is a vector of seven integer exponents, one per
:class:`BaseDimension` (Mass, Length, Time, Temperature, Light, Current,
Matter).  Multiplication adds exponents, division subtracts them,
reciprocation negates them; the identity is the all-zero vector
(dimensionless).  Values are immutable and hashable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

__all__ = [
    "BaseDimension",
    "Dimension",
    "DIMENSIONLESS",
    "BASE_DIMENSIONS",
    "parse_dimension",
    "base_dimension_name",
    "base_by_name",
]


class BaseDimension(Enum):
    """The seven SI base dimensions, in fixed rendering order."""

    MASS = 0
    LENGTH = 1
    TIME = 2
    TEMPERATURE = 3
    LIGHT = 4
    CURRENT = 5
    MATTER = 6


# Rendering symbols, indexed by BaseDimension value.
_SYMBOLS = ("M", "L", "T", "Θ", "J", "I", "N")

# Registry-file / diagnostic names, indexed by BaseDimension value.
_NAMES = ("Mass", "Length", "Time", "Temperature", "Light", "Current", "Matter")

_NAME_TO_BASE = {name: BaseDimension(i) for i, name in enumerate(_NAMES)}


@dataclass(frozen=True)
class Dimension:
    """Seven integer exponents over the SI base dimensions."""

    exponents: tuple[int, int, int, int, int, int, int]

    @classmethod
    def base(cls, b: BaseDimension) -> "Dimension":
        exps = [0] * 7
        exps[b.value] = 1
        return cls(tuple(exps))

    @classmethod
    def one(cls) -> "Dimension":
        """The group identity: the dimensionless vector."""
        return DIMENSIONLESS

    @classmethod
    def of(cls, **exponents: int) -> "Dimension":
        """Build from keyword exponents, e.g. ``Dimension.of(length=1, time=-2)``."""
        exps = [0] * 7
        for name, power in exponents.items():
            try:
                b = BaseDimension[name.upper()]
            except KeyError:
                raise ValueError(f"unknown base dimension: {name!r}") from None
            exps[b.value] = power
        return cls(tuple(exps))

    def exponent(self, b: BaseDimension) -> int:
        return self.exponents[b.value]

    def __mul__(self, other: "Dimension") -> "Dimension":
        return Dimension(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __truediv__(self, other: "Dimension") -> "Dimension":
        return Dimension(tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def reciprocal(self) -> "Dimension":
        return Dimension(tuple(-a for a in self.exponents))

    def __pow__(self, n: int) -> "Dimension":
        return Dimension(tuple(a * n for a in self.exponents))

    def is_dimensionless(self) -> bool:
        return self == DIMENSIONLESS

    def render(self) -> str:
        """Fixed-order rendering such as ``L^1·T^-2``; ``1`` when dimensionless."""
        parts = [
            f"{_SYMBOLS[i]}^{p}" for i, p in enumerate(self.exponents) if p != 0
        ]
        return "·".join(parts) if parts else "1"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Dimension({self.exponents!r})"


DIMENSIONLESS = Dimension((0, 0, 0, 0, 0, 0, 0))

# All seven base dimensions in rendering order.
BASE_DIMENSIONS = tuple(BaseDimension)


def base_dimension_name(b: BaseDimension) -> str:
    return _NAMES[b.value]


def base_by_name(name: str) -> BaseDimension | None:
    """Look up a base dimension by its full name (``Length``, ``Time``, ...)."""
    return _NAME_TO_BASE.get(name)


def parse_dimension(text: str) -> Dimension:
    """Parse the textual dimension syntax: ``Base ('^' int)?`` joined by ``*``/``/``.

    Bases are named Mass, Length, Time, Temperature, Light, Current, Matter.
    Example: ``Length/Time^2``.
    """
    result = DIMENSIONLESS
    op = "*"
    for token in _split_dim_tokens(text):
        if token in ("*", "/"):
            op = token
            continue
        name, _, power_text = token.partition("^")
        name = name.strip()
        if name not in _NAME_TO_BASE:
            raise ValueError(f"unknown base dimension: {name!r}")
        power = 1
        if power_text:
            try:
                power = int(power_text.strip())
            except ValueError:
                raise ValueError(f"bad exponent in dimension term: {token!r}") from None
        term = Dimension.base(_NAME_TO_BASE[name]) ** power
        result = result * term if op == "*" else result / term
    return result


def _split_dim_tokens(text: str):
    text = text.strip()
    if not text:
        raise ValueError("empty dimension expression")
    if text == "1":  # dimensionless spelled explicitly
        return
    term = ""
    for ch in text:
        if ch in "*/":
            if not term.strip():
                raise ValueError(f"misplaced {ch!r} in dimension expression")
            yield term.strip()
            yield ch
            term = ""
        else:
            term += ch
    if not term.strip():
        raise ValueError("dimension expression ends with an operator")
    yield term.strip()
