"""Exact decimal values stored as (significand, power-of-ten) pairs.

A ``DecValue`` denotes ``significand`` read with the decimal point after its
first digit, times ``10**exponent`` -- scientific notation with an integer
significand of arbitrary width.  The stored pair is kept in a normal form
(no trailing zeros on the significand, canonical zero) so that two values
are numerically equal exactly when their fields are equal.

All arithmetic is performed exactly on integers or rationals and rounded
once at the end, to the number of significant digits given by a
:class:`PrecisionContext` (round-half-even).  Division routes through
:class:`fractions.Fraction` so conversion chains stay exact until the final
rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "DecValue",
    "PrecisionContext",
    "DEFAULT_CONTEXT",
    "ExponentOverflowError",
    "DecimalParseError",
    "ZERO",
    "ONE",
    "ulp",
    "within_ulps",
]

# Stored scientific exponents must stay inside this bound; exceeding it is
# an error, never saturation.
EXPONENT_BOUND = 2 ** 31


class ExponentOverflowError(OverflowError):
    """The magnitude is not representable within the exponent bound."""


class DecimalParseError(ValueError):
    """Malformed decimal literal; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class PrecisionContext:
    """Rounding policy: keep ``significant_digits`` digits, round half to even."""

    significant_digits: int = 34
    rounding: str = "half-even"

    def __post_init__(self):
        if self.significant_digits < 1:
            raise ValueError("significant_digits must be >= 1")
        if self.rounding != "half-even":
            raise ValueError(f"unsupported rounding mode: {self.rounding!r}")


DEFAULT_CONTEXT = PrecisionContext()


def _ndigits(n: int) -> int:
    return len(str(abs(n)))


def _div_half_even(num: int, den: int) -> int:
    """Round num/den to the nearest integer, ties to even.  num >= 0, den > 0."""
    q, r = divmod(num, den)
    r2 = 2 * r
    if r2 > den or (r2 == den and q & 1):
        q += 1
    return q


@dataclass(frozen=True, order=False)
class DecValue:
    """An exact decimal number in lead-digit normal form.

    ``significand`` carries the sign and all significant digits;
    ``exponent`` is the power of ten applied after placing the decimal
    point behind the first digit.  Construct through :meth:`make_float`,
    :meth:`from_int`, :meth:`parse` or :meth:`from_rational` rather than
    directly, so the normal form is established.
    """

    significand: int
    exponent: int

    # -- constructors ---------------------------------------------------

    @classmethod
    def make_float(cls, significand: int, exponent: int) -> "DecValue":
        """Build the value ``significand`` (lead-digit form) times ``10**exponent``."""
        if significand == 0:
            return ZERO
        while significand % 10 == 0:
            significand //= 10
        _check_exponent(exponent)
        return cls(significand, exponent)

    @classmethod
    def from_int(cls, n: int) -> "DecValue":
        return cls._from_coeff(n, 0)

    @classmethod
    def from_rational(cls, r: Fraction, ctx: PrecisionContext | None = None) -> "DecValue":
        """Round an exact rational to the context precision (half-even)."""
        prec = (ctx or DEFAULT_CONTEXT).significant_digits
        p = r.numerator
        q = r.denominator
        if p == 0:
            return ZERO
        sign = -1 if p < 0 else 1
        p = abs(p)
        e = _floor_log10(p, q)
        shift = prec - 1 - e
        if shift >= 0:
            m = _div_half_even(p * 10 ** shift, q)
        else:
            m = _div_half_even(p, q * 10 ** -shift)
        if m >= 10 ** prec:  # carry out of the top digit (e.g. 999.96 -> 1000)
            m //= 10
            e += 1
        return cls._from_coeff(sign * m, e - prec + 1)

    @classmethod
    def parse(cls, text: str) -> "DecValue":
        """Parse ``['-'] digits ['.' digits] [('e'|'E') ['-'] digits]`` exactly."""
        i = 0
        n = len(text)
        sign = 1
        if i < n and text[i] == "-":
            sign = -1
            i += 1
        start = i
        while i < n and text[i].isdigit():
            i += 1
        if i == start:
            raise DecimalParseError("expected digit", i)
        int_part = text[start:i]
        frac_part = ""
        if i < n and text[i] == ".":
            i += 1
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if i == start:
                raise DecimalParseError("expected digit after decimal point", i)
            frac_part = text[start:i]
        exp = 0
        if i < n and text[i] in "eE":
            i += 1
            esign = 1
            if i < n and text[i] == "-":
                esign = -1
                i += 1
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if i == start:
                raise DecimalParseError("expected digit in exponent", i)
            exp = esign * int(text[start:i])
        if i != n:
            raise DecimalParseError(f"unexpected character {text[i]!r}", i)
        coeff = sign * int(int_part + frac_part)
        return cls._from_coeff(coeff, exp - len(frac_part))

    @classmethod
    def _from_coeff(cls, coeff: int, tens: int) -> "DecValue":
        """Normalize ``coeff * 10**tens`` into lead-digit form."""
        if coeff == 0:
            return ZERO
        while coeff % 10 == 0:
            coeff //= 10
            tens += 1
        exponent = tens + _ndigits(coeff) - 1
        _check_exponent(exponent)
        return cls(coeff, exponent)

    # -- views ----------------------------------------------------------

    def _coeff(self) -> tuple[int, int]:
        """The value as ``(coeff, tens)`` with value = coeff * 10**tens."""
        return self.significand, self.exponent - _ndigits(self.significand) + 1

    def to_rational(self) -> Fraction:
        coeff, tens = self._coeff()
        if tens >= 0:
            return Fraction(coeff * 10 ** tens)
        return Fraction(coeff, 10 ** -tens)

    def is_zero(self) -> bool:
        return self.significand == 0

    @property
    def digits(self) -> int:
        """Number of significant digits (1 for zero)."""
        return _ndigits(self.significand)

    # -- arithmetic ------------------------------------------------------

    def add(self, other: "DecValue | int", ctx: PrecisionContext | None = None) -> "DecValue":
        other = _coerce(other)
        c1, t1 = self._coeff()
        c2, t2 = other._coeff()
        t = min(t1, t2)
        coeff = c1 * 10 ** (t1 - t) + c2 * 10 ** (t2 - t)
        return _rounded(coeff, t, ctx)

    def sub(self, other: "DecValue | int", ctx: PrecisionContext | None = None) -> "DecValue":
        return self.add(-_coerce(other), ctx)

    def mul(self, other: "DecValue | int", ctx: PrecisionContext | None = None) -> "DecValue":
        other = _coerce(other)
        c1, t1 = self._coeff()
        c2, t2 = other._coeff()
        return _rounded(c1 * c2, t1 + t2, ctx)

    def div(self, other: "DecValue | int", ctx: PrecisionContext | None = None) -> "DecValue":
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("decimal division by zero")
        return DecValue.from_rational(self.to_rational() / other.to_rational(), ctx)

    def compare(self, other: "DecValue | int") -> int:
        """Total-order comparison on the denoted reals: -1, 0, or 1."""
        other = _coerce(other)
        sa = _sign(self.significand)
        sb = _sign(other.significand)
        if sa != sb:
            return -1 if sa < sb else 1
        if sa == 0:
            return 0
        if self.exponent != other.exponent:
            return sa if self.exponent > other.exponent else -sa
        ca = abs(self.significand)
        cb = abs(other.significand)
        da = _ndigits(ca)
        db = _ndigits(cb)
        if da < db:
            ca *= 10 ** (db - da)
        else:
            cb *= 10 ** (da - db)
        if ca == cb:
            return 0
        return sa if ca > cb else -sa

    # -- operators (default context) ------------------------------------

    def __add__(self, other):
        return self.add(other)

    __radd__ = __add__

    def __sub__(self, other):
        return self.sub(other)

    def __rsub__(self, other):
        return _coerce(other).sub(self)

    def __mul__(self, other):
        return self.mul(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.div(other)

    def __rtruediv__(self, other):
        return _coerce(other).div(self)

    def __neg__(self):
        if self.significand == 0:
            return self
        return DecValue(-self.significand, self.exponent)

    def __abs__(self):
        return -self if self.significand < 0 else self

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __bool__(self):
        return self.significand != 0

    # -- rendering -------------------------------------------------------

    def __str__(self):
        if self.significand == 0:
            return "0"
        sign = "-" if self.significand < 0 else ""
        digits = str(abs(self.significand))
        n = len(digits)
        e = self.exponent
        if e >= n - 1:
            plain = digits + "0" * (e - n + 1)
        elif e >= 0:
            plain = digits[: e + 1] + "." + digits[e + 1 :]
        else:
            plain = "0." + "0" * (-e - 1) + digits
        sci = digits[0] + ("." + digits[1:] if n > 1 else "") + "e" + str(e)
        return sign + (plain if len(plain) <= len(sci) else sci)

    def __repr__(self):
        return f"DecValue({self.significand}, {self.exponent})"


def _sign(n: int) -> int:
    return (n > 0) - (n < 0)


def _coerce(x: "DecValue | int") -> DecValue:
    if isinstance(x, DecValue):
        return x
    if isinstance(x, int):
        return DecValue.from_int(x)
    raise TypeError(f"cannot treat {type(x).__name__} as a DecValue")


def _check_exponent(exponent: int):
    if not -EXPONENT_BOUND <= exponent <= EXPONENT_BOUND:
        raise ExponentOverflowError(f"exponent {exponent} outside representable range")


def _floor_log10(p: int, q: int) -> int:
    """floor(log10(p/q)) for p, q > 0, computed exactly."""
    e = _ndigits(p) - _ndigits(q)
    if e >= 0:
        if p < q * 10 ** e:
            e -= 1
    else:
        if p * 10 ** -e < q:
            e -= 1
    return e


def _rounded(coeff: int, tens: int, ctx: PrecisionContext | None) -> DecValue:
    """Round ``coeff * 10**tens`` to the context precision, half to even."""
    prec = (ctx or DEFAULT_CONTEXT).significant_digits
    if coeff == 0:
        return ZERO
    n = _ndigits(coeff)
    if n > prec:
        drop = n - prec
        sign = -1 if coeff < 0 else 1
        coeff = sign * _div_half_even(abs(coeff), 10 ** drop)
        tens += drop
    return DecValue._from_coeff(coeff, tens)


ZERO = DecValue(0, 0)
ONE = DecValue(1, 0)


def ulp(x: DecValue, ctx: PrecisionContext | None = None) -> Fraction:
    """One unit in the last place of x at the context's working precision."""
    ctx = ctx or DEFAULT_CONTEXT
    return Fraction(10) ** (x.exponent - (ctx.significant_digits - 1))


def within_ulps(a: DecValue, b: DecValue, n: int = 1, ctx: PrecisionContext | None = None) -> bool:
    """Whether a and b differ by at most n last-place units (the wider scale)."""
    ctx = ctx or DEFAULT_CONTEXT
    step = max(ulp(a, ctx), ulp(b, ctx))
    diff = a.to_rational() - b.to_rational()
    return abs(diff) <= n * step
