"""Arithmetic backends and exact interval enclosures.

Two backends are supported:

* ``NumericBackend.Float(bits)`` -- binary floating point through gmpy2/MPFR
  at a fixed precision (default 256 bits).
* ``NumericBackend.Rational()`` -- exact arithmetic with :class:`fractions.Fraction`.

Enclosures always carry :class:`~fractions.Fraction` endpoints, so interval
operations on them never round.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

import gmpy2
from gmpy2 import mpfr

from .errors import BackendError, DomainError

Number = Union[Fraction, Any]  # Fraction or gmpy2.mpfr

_MPFR = type(mpfr(0))
_MPQ = type(gmpy2.mpq(0))
_MPZ = type(gmpy2.mpz(0))


def parse_number(text: str) -> Fraction:
    """Parse ``"1/3"``, ``"0.95"``, ``"-2"`` or ``"1e-3"`` into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse number {text!r}") from exc


def to_fraction(value: Any) -> Fraction:
    """Exact conversion of ints, floats, strings, Fractions and gmpy2 numbers."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, int, _MPZ)):
        return Fraction(int(value))
    if isinstance(value, _MPFR):
        if not gmpy2.is_finite(value):
            raise DomainError(f"non-finite value {value}")
        num, den = value.as_integer_ratio()
        return Fraction(int(num), int(den))
    if isinstance(value, _MPQ):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"non-finite value {value}")
        return Fraction(value)
    if isinstance(value, str):
        return parse_number(value)
    raise TypeError(f"unsupported numeric type {type(value).__name__}")


def round_dyadic(x: Fraction, bits: int, up: bool) -> Fraction:
    """Round ``x`` to ``bits`` significant bits, toward +inf if ``up`` else toward -inf."""
    if x == 0:
        return x
    n, d = x.numerator, x.denominator
    shift = bits - (abs(n).bit_length() - d.bit_length())
    if shift >= 0:
        m, rem = divmod(n << shift, d)
    else:
        m, rem = divmod(n, d << -shift)
    if up and rem:
        m += 1
    if shift >= 0:
        return Fraction(m, 1 << shift)
    return Fraction(m << -shift)


@dataclass(frozen=True)
class NumericBackend:
    """Arithmetic selector: ``kind`` is ``"float"`` or ``"rational"``."""

    kind: str = "float"
    precision_bits: int = 256

    def __post_init__(self) -> None:
        if self.kind not in ("float", "rational"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.kind == "float" and self.precision_bits < 53:
            raise ValueError("float backend needs precision_bits >= 53")
        if self.kind == "rational":
            # precision is irrelevant for exact arithmetic; pin it so equal backends hash equal
            object.__setattr__(self, "precision_bits", 0)

    @classmethod
    def Float(cls, precision_bits: int = 256) -> "NumericBackend":
        return cls("float", precision_bits)

    @classmethod
    def Rational(cls) -> "NumericBackend":
        return cls("rational")

    @property
    def is_exact(self) -> bool:
        return self.kind == "rational"

    def describe(self) -> str:
        return "rational" if self.is_exact else f"float-{self.precision_bits}"

    def context(self):
        """Context manager that installs this backend's working precision."""
        if self.is_exact:
            return contextlib.nullcontext()
        return gmpy2.context(precision=self.precision_bits)

    def convert(self, value: Any) -> Number:
        if self.is_exact:
            return to_fraction(value)
        if isinstance(value, _MPFR) and value.precision == self.precision_bits:
            return value
        return mpfr(to_fraction(value), self.precision_bits)

    def zero(self) -> Number:
        return self.convert(0)

    def one(self) -> Number:
        return self.convert(1)

    def power(self, base: Number, exponent: Fraction) -> Number:
        """``base ** exponent`` for a real exponent; Rational needs an integer exponent."""
        exponent = to_fraction(exponent)
        if self.is_exact:
            if exponent.denominator != 1:
                raise BackendError(
                    f"rational backend needs integer exponents, got {exponent}"
                )
            return base ** exponent.numerator
        with self.context():
            if exponent.denominator == 1:
                return self.convert(base) ** int(exponent.numerator)
            return self.convert(base) ** mpfr(exponent, self.precision_bits)

    @property
    def unit_roundoff(self) -> Fraction:
        if self.is_exact:
            return Fraction(0)
        return Fraction(1, 1 << (self.precision_bits - 1))

    def is_finite(self, value: Number) -> bool:
        if self.is_exact:
            return True
        return bool(gmpy2.is_finite(value))

    def round_outward(self, value: Fraction, up: bool) -> Fraction:
        """Shorten an exact endpoint to the backend precision, rounding outward."""
        if self.is_exact:
            return value
        return round_dyadic(value, self.precision_bits, up)


@dataclass(frozen=True)
class Enclosure:
    """Closed interval ``[lower, upper]`` with exact rational endpoints."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError(f"empty enclosure [{self.lower}, {self.upper}]")

    @classmethod
    def point(cls, value: Any) -> "Enclosure":
        v = to_fraction(value)
        return cls(v, v)

    @classmethod
    def around(cls, value: Any, radius: Any) -> "Enclosure":
        v, r = to_fraction(value), to_fraction(radius)
        if r < 0:
            raise ValueError("negative radius")
        return cls(v - r, v + r)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def contains(self, value: Any) -> bool:
        v = to_fraction(value)
        return self.lower <= v <= self.upper

    def excludes_zero(self) -> bool:
        return self.lower > 0 or self.upper < 0

    def __neg__(self) -> "Enclosure":
        return Enclosure(-self.upper, -self.lower)

    def __add__(self, other: "Enclosure") -> "Enclosure":
        other = _as_enclosure(other)
        return Enclosure(self.lower + other.lower, self.upper + other.upper)

    def __sub__(self, other: "Enclosure") -> "Enclosure":
        other = _as_enclosure(other)
        return Enclosure(self.lower - other.upper, self.upper - other.lower)

    def __mul__(self, other: "Enclosure") -> "Enclosure":
        other = _as_enclosure(other)
        if self.lower >= 0 and other.lower >= 0:
            return Enclosure(self.lower * other.lower, self.upper * other.upper)
        products = (
            self.lower * other.lower,
            self.lower * other.upper,
            self.upper * other.lower,
            self.upper * other.upper,
        )
        return Enclosure(min(products), max(products))

    def __truediv__(self, other: "Enclosure") -> "Enclosure":
        other = _as_enclosure(other)
        if not other.excludes_zero():
            raise ZeroDivisionError(f"divisor enclosure {other} contains zero")
        return self * Enclosure(1 / other.upper, 1 / other.lower)

    def square(self) -> "Enclosure":
        lo, hi = abs(self.lower), abs(self.upper)
        if self.lower <= 0 <= self.upper:
            return Enclosure(Fraction(0), max(lo, hi) ** 2)
        return Enclosure(min(lo, hi) ** 2, max(lo, hi) ** 2)

    def rounded(self, backend: NumericBackend) -> "Enclosure":
        return Enclosure(
            backend.round_outward(self.lower, up=False),
            backend.round_outward(self.upper, up=True),
        )


def _as_enclosure(value: Any) -> Enclosure:
    if isinstance(value, Enclosure):
        return value
    return Enclosure.point(value)
