"""Units, the unit registry, and dimension-checked measurement arithmetic.

A :class:`Unit` names a dimension together with the affine map
``v -> scale*v + offset`` taking values in the unit to the canonical unit
of its dimension.  A :class:`Measurement` pairs an exact decimal value with
a unit.  Additive operations and comparisons are guarded: they are defined
only when the operands share a dimension, and otherwise raise
:class:`DimensionMismatchError`.  All conversions route through the
canonical unit, are computed exactly on rationals, and are rounded once at
the end.

A :class:`UnitRegistry` is built during initialization (``register`` /
``derive`` / ``alias``) and treated as immutable afterwards; units and
measurements are immutable values throughout.
"""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .decvalue import DEFAULT_CONTEXT, DecValue, PrecisionContext, ulp
from .dimension import DIMENSIONLESS, BaseDimension, Dimension, parse_dimension

__all__ = [
    "Unit",
    "Measurement",
    "UnitRegistry",
    "standard_registry",
    "default_registry",
    "load_registry",
    "as_fraction",
    "convert_roundtrip",
    "UnitError",
    "DuplicateNameError",
    "UnknownUnitError",
    "InvalidScaleError",
    "AffineCompositeError",
    "DimensionMismatchError",
    "RegistryParseError",
]

# Canonical names used when synthesizing composite canonical units and when
# a unit is not attached to any registry.
_SI_BY_DIMENSION = {
    BaseDimension.MASS: "Kilogram",
    BaseDimension.LENGTH: "Metre",
    BaseDimension.TIME: "Second",
    BaseDimension.TEMPERATURE: "Kelvin",
    BaseDimension.LIGHT: "Candela",
    BaseDimension.CURRENT: "Ampere",
    BaseDimension.MATTER: "Mole",
}


class UnitError(ValueError):
    """Base class for unit and registry errors."""


class DuplicateNameError(UnitError):
    pass


class UnknownUnitError(UnitError):
    pass


class InvalidScaleError(UnitError):
    pass


class AffineCompositeError(UnitError):
    """An offset unit was used where only linear units are allowed."""


class RegistryParseError(UnitError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DimensionMismatchError(ValueError):
    """Operands of an additive operation or comparison differ in dimension."""

    def __init__(self, left: Dimension, right: Dimension, context: str = ""):
        what = f" in {context}" if context else ""
        super().__init__(f"dimension mismatch{what}: {left.render()} vs {right.render()}")
        self.left = left
        self.right = right


def as_fraction(value) -> Fraction:
    """Coerce int, Fraction, DecValue, or text (``p/q`` or decimal) to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, DecValue):
        return value.to_rational()
    if isinstance(value, str):
        if "/" in value:
            num, _, den = value.partition("/")
            return Fraction(int(num), int(den))
        return DecValue.parse(value).to_rational()
    raise TypeError(f"cannot interpret {value!r} as a rational")


def _is_single_base(dimension: Dimension) -> bool:
    exps = dimension.exponents
    return sum(1 for p in exps if p != 0) == 1 and sum(exps) == 1


@dataclass(frozen=True)
class Unit:
    """A named unit: dimension plus the affine normalization to canonical.

    ``canonical`` units are the identity map (scale 1, offset 0).  A nonzero
    offset is allowed only on single-base dimensions (temperature scales);
    offset units are barred from composites.
    """

    name: str
    dimension: Dimension
    scale: Fraction
    offset: Fraction = Fraction(0)
    canonical: bool = False
    registry: "UnitRegistry | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "scale", as_fraction(self.scale))
        object.__setattr__(self, "offset", as_fraction(self.offset))
        if self.scale <= 0:
            raise InvalidScaleError(f"unit {self.name!r}: scale must be positive")
        if self.canonical and (self.scale != 1 or self.offset != 0):
            raise InvalidScaleError(f"unit {self.name!r}: canonical units must be the identity map")
        if self.offset != 0 and not _is_single_base(self.dimension):
            raise AffineCompositeError(
                f"unit {self.name!r}: offsets are only allowed on single-base dimensions"
            )

    @property
    def is_affine(self) -> bool:
        return self.offset != 0

    def to_canonical_fraction(self, v: Fraction) -> Fraction:
        return self.scale * v + self.offset

    def from_canonical_fraction(self, v: Fraction) -> Fraction:
        return (v - self.offset) / self.scale

    def __str__(self):
        return self.name


def _canonical_composite_name(dimension: Dimension, base_names) -> str:
    num = []
    den = []
    for i, power in enumerate(dimension.exponents):
        if power > 0:
            num.append(base_names[i] + (f"^{power}" if power > 1 else ""))
        elif power < 0:
            den.append(base_names[i] + (f"^{-power}" if power < -1 else ""))
    if not num and not den:
        return "1"
    head = "·".join(num) if num else "1"
    return head + ("/" + "·".join(den) if den else "")


def _canonical_unit_for(dimension: Dimension, registry: "UnitRegistry | None") -> Unit:
    if registry is not None:
        return registry.canonical_for(dimension)
    name = _canonical_composite_name(dimension, _ORDERED_SI_NAMES)
    return Unit(name, dimension, Fraction(1), Fraction(0), canonical=True)


_ORDERED_SI_NAMES = tuple(_SI_BY_DIMENSION[BaseDimension(i)] for i in range(7))

_COMPARISONS = {
    "eq": lambda a, b: a == b,
    "neq": lambda a, b: a != b,
    "lt": lambda a, b: a < b,
    "le": lambda a, b: a <= b,
    "gt": lambda a, b: a > b,
    "ge": lambda a, b: a >= b,
}
# Symbolic spellings accepted as aliases.
_COMPARISONS.update(
    {
        "==": _COMPARISONS["eq"],
        "!=": _COMPARISONS["neq"],
        "<": _COMPARISONS["lt"],
        "<=": _COMPARISONS["le"],
        ">": _COMPARISONS["gt"],
        ">=": _COMPARISONS["ge"],
    }
)


@dataclass(frozen=True, eq=False)
class Measurement:
    """An exact decimal value paired with a unit."""

    value: DecValue
    unit: Unit

    @property
    def dimension(self) -> Dimension:
        return self.unit.dimension

    @classmethod
    def random(cls, unit: Unit, seed: int) -> "Measurement":
        """Deterministic pseudo-random measurement for property testing.

        Significand at most 12 digits, exponent in [-12, 12].
        """
        rng = random.Random(seed)
        ndig = rng.randint(1, 12)
        sig = rng.randrange(10 ** (ndig - 1), 10 ** ndig)
        if rng.random() < 0.5:
            sig = -sig
        exp = rng.randint(-12, 12)
        return cls(DecValue.make_float(sig, exp), unit)

    def canonical_fraction(self) -> Fraction:
        """The exact value expressed in the canonical unit."""
        return self.unit.to_canonical_fraction(self.value.to_rational())

    def to_canonical(self, ctx: PrecisionContext | None = None) -> "Measurement":
        target = _canonical_unit_for(self.dimension, self.unit.registry)
        return Measurement(DecValue.from_rational(self.canonical_fraction(), ctx), target)

    def convert(self, target: Unit, ctx: PrecisionContext | None = None) -> "Measurement":
        """Convert through the canonical unit, exactly, with one final rounding."""
        if self.dimension != target.dimension:
            raise DimensionMismatchError(self.dimension, target.dimension, "conversion")
        v = target.from_canonical_fraction(self.canonical_fraction())
        return Measurement(DecValue.from_rational(v, ctx), target)

    # -- additive operations (guarded) -----------------------------------

    def add(self, other: "Measurement", ctx: PrecisionContext | None = None) -> "Measurement":
        """Sum in the unit of the first operand; defined only on equal dimensions."""
        return self._additive(other, ctx, subtract=False)

    def sub(self, other: "Measurement", ctx: PrecisionContext | None = None) -> "Measurement":
        return self._additive(other, ctx, subtract=True)

    def _additive(self, other, ctx, subtract):
        if not isinstance(other, Measurement):
            raise TypeError("measurements only combine with measurements")
        if self.dimension != other.dimension:
            raise DimensionMismatchError(self.dimension, other.dimension, "addition")
        converted = self.unit.from_canonical_fraction(other.canonical_fraction())
        va = self.value.to_rational()
        v = va - converted if subtract else va + converted
        return Measurement(DecValue.from_rational(v, ctx), self.unit)

    def compare(self, op: str, other: "Measurement") -> bool:
        """Compare canonical values exactly; op is eq/neq/lt/le/gt/ge."""
        if not isinstance(other, Measurement):
            raise TypeError("measurements only compare with measurements")
        if self.dimension != other.dimension:
            raise DimensionMismatchError(self.dimension, other.dimension, "comparison")
        try:
            cmp = _COMPARISONS[op]
        except KeyError:
            raise ValueError(f"unknown comparison {op!r}") from None
        return cmp(self.canonical_fraction(), other.canonical_fraction())

    # -- multiplicative operations ---------------------------------------

    def mul(self, other: "Measurement", ctx: PrecisionContext | None = None) -> "Measurement":
        return self._multiplicative(other, ctx, divide=False)

    def div(self, other: "Measurement", ctx: PrecisionContext | None = None) -> "Measurement":
        return self._multiplicative(other, ctx, divide=True)

    def _multiplicative(self, other, ctx, divide):
        if not isinstance(other, Measurement):
            raise TypeError("measurements only combine with measurements")
        if divide and other.value.is_zero():
            raise ZeroDivisionError("division by a zero measurement")
        a, b = self, other
        dim = a.dimension / b.dimension if divide else a.dimension * b.dimension
        registry = a.unit.registry or b.unit.registry
        if a.unit.is_affine or b.unit.is_affine:
            # Affine operands have no coherent composite; work in canonical form.
            va = a.canonical_fraction()
            vb = b.canonical_fraction()
            unit = _canonical_unit_for(dim, registry)
            v = va / vb if divide else va * vb
            return Measurement(DecValue.from_rational(v, ctx), unit)
        va = a.value.to_rational()
        vb = b.value.to_rational()
        if divide:
            scale = a.unit.scale / b.unit.scale
            v = va / vb
            sep = "/"
        else:
            scale = a.unit.scale * b.unit.scale
            v = va * vb
            sep = "·"
        unit = _find_equivalent(registry, dim, scale)
        if unit is None:
            name = f"{a.unit.name}{sep}{b.unit.name}"
            if registry is not None:
                unit = registry.adopt_composite(name, dim, scale)
            else:
                unit = Unit(name, dim, scale)
        return Measurement(DecValue.from_rational(v, ctx), unit)

    def pow(self, n: int, ctx: PrecisionContext | None = None) -> "Measurement":
        """Raise to an integer power: value and unit scale are both powered."""
        if not isinstance(n, int):
            raise TypeError("measurement powers must be integers")
        dim = self.dimension ** n
        registry = self.unit.registry
        if self.unit.is_affine:
            v = self.canonical_fraction() ** n
            return Measurement(DecValue.from_rational(v, ctx), _canonical_unit_for(dim, registry))
        v = self.value.to_rational() ** n
        scale = self.unit.scale ** n
        unit = _find_equivalent(registry, dim, scale)
        if unit is None:
            name = f"{self.unit.name}^{n}"
            if registry is not None:
                unit = registry.adopt_composite(name, dim, scale)
            else:
                unit = Unit(name, dim, scale)
        return Measurement(DecValue.from_rational(v, ctx), unit)

    def scaled(self, k: "DecValue | int", ctx: PrecisionContext | None = None) -> "Measurement":
        """Scale by a dimensionless factor; the unit is unchanged."""
        k = k if isinstance(k, DecValue) else DecValue.from_int(k)
        v = k.to_rational() * self.value.to_rational()
        return Measurement(DecValue.from_rational(v, ctx), self.unit)

    # -- operators (default context) -------------------------------------

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.sub(other)

    def __mul__(self, other):
        if isinstance(other, (DecValue, int)):
            return self.scaled(other)
        return self.mul(other)

    def __rmul__(self, other):
        if isinstance(other, (DecValue, int)):
            return self.scaled(other)
        return NotImplemented

    def __truediv__(self, other):
        return self.div(other)

    def __neg__(self):
        return Measurement(-self.value, self.unit)

    def __eq__(self, other):
        if not isinstance(other, Measurement):
            return NotImplemented
        return self.compare("eq", other)

    def __ne__(self, other):
        if not isinstance(other, Measurement):
            return NotImplemented
        return self.compare("neq", other)

    def __lt__(self, other):
        return self.compare("lt", other)

    def __le__(self, other):
        return self.compare("le", other)

    def __gt__(self, other):
        return self.compare("gt", other)

    def __ge__(self, other):
        return self.compare("ge", other)

    def __hash__(self):
        return hash((self.dimension, self.canonical_fraction()))

    def __str__(self):
        if self.unit.name == "1":
            return str(self.value)
        return f"{self.value} {self.unit.name}"

    def __repr__(self):
        return f"Measurement({self.value!r}, {self.unit.name!r})"


def convert_roundtrip(
    m: Measurement, via: Unit, ctx: PrecisionContext | None = None
) -> tuple[Measurement, Fraction]:
    """Convert there and back; also return the trip's rounding tolerance.

    Each leg rounds once, contributing at most half of its own last-place
    step; the intermediate step is mapped into the source unit by the
    linear part of the two normalizations.  The returned tolerance is the
    largest step encountered, so |back - m| never exceeds it for a correct
    conversion chain.
    """
    inter = m.convert(via, ctx)
    back = inter.convert(m.unit, ctx)
    ratio = via.scale / m.unit.scale
    tol = max(ulp(m.value, ctx), ulp(back.value, ctx), ulp(inter.value, ctx) * ratio)
    return back, tol


def _find_equivalent(registry, dimension, scale):
    """First registered linear unit matching (dimension, scale), if any."""
    if registry is None:
        return None
    for unit in registry.units():
        if unit.dimension == dimension and unit.scale == scale and unit.offset == 0:
            return unit
    return None


class UnitRegistry:
    """Name-to-unit mapping with exactly one canonical unit per used dimension.

    Build it up front with :meth:`register_base`, :meth:`register`,
    :meth:`derive` and :meth:`alias`; afterwards treat it as immutable and
    share freely.
    """

    def __init__(self):
        self._units: dict[str, Unit] = {}
        self._aliases: dict[str, str] = {}
        self._canonical: dict[Dimension, Unit] = {}

    @classmethod
    def standard(cls) -> "UnitRegistry":
        """The seven SI base canonical units plus the dimensionless unit."""
        reg = cls()
        for b, name in _SI_BY_DIMENSION.items():
            reg.register_base(name, b)
        one = Unit("1", DIMENSIONLESS, Fraction(1), Fraction(0), canonical=True, registry=reg)
        reg._units["1"] = one
        reg._canonical[DIMENSIONLESS] = one
        return reg

    # -- construction ----------------------------------------------------

    def register_base(self, name: str, b: BaseDimension) -> Unit:
        dimension = Dimension.base(b)
        if dimension in self._canonical:
            raise DuplicateNameError(f"dimension {dimension.render()} already has a canonical unit")
        self._check_name_free(name)
        unit = Unit(name, dimension, Fraction(1), Fraction(0), canonical=True, registry=self)
        self._units[name] = unit
        self._canonical[dimension] = unit
        lowered = name.lower()
        if lowered != name and lowered not in self._units and lowered not in self._aliases:
            self._aliases[lowered] = name
        return unit

    def register(self, name: str, dimension: Dimension, scale, offset=0) -> Unit:
        """Define a unit by its affine map to the canonical unit of ``dimension``."""
        return self._add_unit(name, dimension, as_fraction(scale), as_fraction(offset))

    def derive(self, name: str, numerators, denominators=()) -> Unit:
        """Compose linear units into a product/quotient unit.

        Constituents may be units or registered names; offset units are
        rejected.
        """
        num = [self._as_unit(u) for u in numerators]
        den = [self._as_unit(u) for u in denominators]
        for u in num + den:
            if u.is_affine:
                raise AffineCompositeError(
                    f"cannot derive {name!r}: {u.name!r} has an offset"
                )
        dimension = DIMENSIONLESS
        scale = Fraction(1)
        for u in num:
            dimension = dimension * u.dimension
            scale *= u.scale
        for u in den:
            dimension = dimension / u.dimension
            scale /= u.scale
        return self._add_unit(name, dimension, scale, Fraction(0))

    def alias(self, name: str, target: str):
        self._check_name_free(name)
        if target not in self._units:
            raise UnknownUnitError(f"unknown unit: {target!r}")
        self._aliases[name] = target

    def _add_unit(self, name, dimension, scale, offset) -> Unit:
        self._check_name_free(name)
        if dimension not in self._canonical and (scale != 1 or offset != 0):
            self._synthesize_canonical(dimension)
        canonical = dimension not in self._canonical
        unit = Unit(name, dimension, scale, offset, canonical=canonical, registry=self)
        self._units[name] = unit
        if canonical:
            self._canonical[dimension] = unit
        return unit

    def _synthesize_canonical(self, dimension: Dimension) -> Unit:
        name = self._canonical_name(dimension)
        if name in self._units:
            raise DuplicateNameError(
                f"cannot synthesize canonical unit {name!r}: name already taken"
            )
        unit = Unit(name, dimension, Fraction(1), Fraction(0), canonical=True, registry=self)
        self._units[name] = unit
        self._canonical[dimension] = unit
        return unit

    def _check_name_free(self, name: str):
        if not name:
            raise UnitError("unit names must be non-empty")
        if name in self._units or name in self._aliases:
            raise DuplicateNameError(f"unit name already in use: {name!r}")

    def _as_unit(self, u) -> Unit:
        return u if isinstance(u, Unit) else self.resolve(u)

    def copy(self) -> "UnitRegistry":
        """Independent registry with equal definitions; extend it freely."""
        new = UnitRegistry()
        for name, unit in self._units.items():
            new._units[name] = dataclasses.replace(unit, registry=new)
        for dimension, unit in self._canonical.items():
            new._canonical[dimension] = new._units[unit.name]
        new._aliases = dict(self._aliases)
        return new

    # -- lookup ----------------------------------------------------------

    def resolve(self, name: str) -> Unit:
        target = self._aliases.get(name, name)
        try:
            return self._units[target]
        except KeyError:
            raise UnknownUnitError(f"unknown unit: {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._units or name in self._aliases

    def units(self):
        """All registered units, in registration order (aliases excluded)."""
        return list(self._units.values())

    def canonical_for(self, dimension: Dimension) -> Unit:
        unit = self._canonical.get(dimension)
        if unit is not None:
            return unit
        name = self._canonical_name(dimension)
        if name not in self._units and name not in self._aliases:
            return self._synthesize_canonical(dimension)
        # The natural name is taken by something else; hand out an
        # unregistered stand-in rather than fail mid-arithmetic.
        return Unit(name, dimension, Fraction(1), Fraction(0), canonical=True, registry=self)

    def adopt_composite(self, name: str, dimension: Dimension, scale) -> Unit:
        """Register a product/quotient unit synthesized during arithmetic.

        Falls back to an unregistered unit when the name is already taken,
        so arithmetic never raises on naming.
        """
        try:
            return self._add_unit(name, dimension, Fraction(scale), Fraction(0))
        except UnitError:
            return Unit(name, dimension, Fraction(scale), Fraction(0), registry=self)

    def _canonical_name(self, dimension: Dimension) -> str:
        names = []
        for i in range(7):
            base = self._canonical.get(Dimension.base(BaseDimension(i)))
            names.append(base.name if base is not None else _ORDERED_SI_NAMES[i])
        return _canonical_composite_name(dimension, names)

    def make(self, value, unit) -> Measurement:
        """Construct a measurement; the unit must belong to this registry."""
        if isinstance(unit, str):
            unit = self.resolve(unit)
        elif unit.name not in self._units or self._units[unit.name] != unit:
            raise UnknownUnitError(f"unit {unit.name!r} is not in this registry")
        if isinstance(value, int):
            value = DecValue.from_int(value)
        elif isinstance(value, str):
            value = DecValue.parse(value)
        return Measurement(value, unit)


def standard_registry() -> UnitRegistry:
    return UnitRegistry.standard()


def default_registry() -> UnitRegistry:
    """The standard SI registry extended with the bundled everyday units."""
    reg = UnitRegistry.standard()
    mass = Dimension.base(BaseDimension.MASS)
    length = Dimension.base(BaseDimension.LENGTH)
    time = Dimension.base(BaseDimension.TIME)
    temperature = Dimension.base(BaseDimension.TEMPERATURE)

    reg.register("gram", mass, Fraction(1, 1000))
    # Statute definitions: 1 lb = 453.59237 g, 1 mile = 1609.344 m, 1 in = 2.54 cm.
    reg.register("pound", mass, Fraction(45359237, 100000000))
    reg.register("centimetre", length, Fraction(1, 100))
    reg.register("kilometre", length, 1000)
    reg.register("mile", length, Fraction(1609344, 1000))
    reg.register("inch", length, Fraction(254, 10000))
    reg.register("decisecond", time, Fraction(1, 10))
    reg.register("millisecond", time, Fraction(1, 1000))
    reg.register("minute", time, 60)
    reg.register("hour", time, 3600)
    reg.register("celsius", temperature, 1, offset=Fraction(27315, 100))
    # K = (F + 459.67) * 5/9, i.e. v -> (5/9) v + 45967/180.
    reg.register("fahrenheit", temperature, Fraction(5, 9), offset=Fraction(45967, 180))
    reg.derive("mps", ["Metre"], ["Second"])
    reg.derive("kph", ["kilometre"], ["hour"])
    reg.derive("mph", ["mile"], ["hour"])
    reg.derive("ipms", ["inch"], ["millisecond"])
    return reg


def load_registry(text: str) -> UnitRegistry:
    """Build a registry from the line-oriented registry file format.

    Lines: ``base <Name> <BaseDimension>``,
    ``unit <name> : <dimension-expr> scale <rational> [offset <rational>]``,
    ``derive <name> = <unit> {('*'|'/') <unit>}``.
    Blank lines and ``#`` comments are ignored.
    """
    reg = UnitRegistry()
    one = Unit("1", DIMENSIONLESS, Fraction(1), Fraction(0), canonical=True, registry=reg)
    reg._units["1"] = one
    reg._canonical[DIMENSIONLESS] = one
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            _apply_registry_line(reg, tokens)
        except UnitError as exc:
            if isinstance(exc, RegistryParseError):
                raise
            raise RegistryParseError(str(exc), lineno) from exc
        except (ValueError, IndexError) as exc:
            raise RegistryParseError(str(exc), lineno) from exc
    return reg


def _apply_registry_line(reg: UnitRegistry, tokens: list[str]):
    keyword = tokens[0]
    if keyword == "base":
        if len(tokens) != 3:
            raise ValueError("expected: base <Name> <BaseDimension>")
        dim = parse_dimension(tokens[2])
        for b in BaseDimension:
            if dim == Dimension.base(b):
                reg.register_base(tokens[1], b)
                return
        raise ValueError(f"{tokens[2]!r} is not a base dimension")
    if keyword == "unit":
        if len(tokens) < 6 or tokens[2] != ":":
            raise ValueError("expected: unit <name> : <dim-expr> scale <rational> [offset <rational>]")
        try:
            scale_at = tokens.index("scale")
        except ValueError:
            raise ValueError("missing 'scale'") from None
        dim = parse_dimension(" ".join(tokens[3:scale_at]))
        scale = as_fraction(tokens[scale_at + 1])
        offset = Fraction(0)
        rest = tokens[scale_at + 2 :]
        if rest:
            if rest[0] != "offset" or len(rest) != 2:
                raise ValueError("expected: offset <rational>")
            offset = as_fraction(rest[1])
        reg.register(tokens[1], dim, scale, offset)
        return
    if keyword == "derive":
        if len(tokens) < 4 or tokens[2] != "=":
            raise ValueError("expected: derive <name> = <unit> {('*'|'/') <unit>}")
        num = [tokens[3]]
        den = []
        rest = tokens[4:]
        while rest:
            if len(rest) < 2 or rest[0] not in ("*", "/"):
                raise ValueError("expected '*' or '/' between units")
            (num if rest[0] == "*" else den).append(rest[1])
            rest = rest[2:]
        reg.derive(tokens[1], num, den)
        return
    raise ValueError(f"unknown directive {keyword!r}")
