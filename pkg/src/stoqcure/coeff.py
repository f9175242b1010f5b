"""Complex scalar with exact rational parts.

`Coeff` stores a real and an imaginary part, each either a `Fraction`
(exact) or a `float`.  Arithmetic between exact parts stays exact; as soon
as a float enters, the affected part degrades to float.  This gives the
two coefficient regimes used throughout the package for free: signed
permutations (Clifford conjugation) never leave the rationals, while
generic rotation angles produce float coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Scalar = Union[int, float, Fraction]


def _part(value: Scalar) -> Fraction | float:
    if isinstance(value, (Fraction, float)):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"unsupported scalar type {type(value).__name__}")


class Coeff:
    """A complex number ``re + im*i`` with independently exact/float parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Scalar = 0, im: Scalar = 0):
        object.__setattr__(self, "re", _part(re))
        object.__setattr__(self, "im", _part(im))

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Coeff is immutable")

    def __reduce__(self):
        return (Coeff, (self.re, self.im))

    @classmethod
    def parse(cls, re: str, im: str = "0") -> "Coeff":
        """Parse decimal or 'p/q' strings exactly as rationals."""
        return cls(Fraction(re), Fraction(im))

    @property
    def is_exact(self) -> bool:
        return isinstance(self.re, Fraction) and isinstance(self.im, Fraction)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> "Coeff":
        return Coeff(self.re, -self.im)

    def times_i_power(self, k: int) -> "Coeff":
        """Multiply by i**k exactly."""
        k %= 4
        if k == 0:
            return self
        if k == 1:
            return Coeff(-self.im, self.re)
        if k == 2:
            return Coeff(-self.re, -self.im)
        return Coeff(self.im, -self.re)

    def abs2(self) -> Fraction | float:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Coeff(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Coeff(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self) -> "Coeff":
        return Coeff(-self.re, -self.im)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Coeff(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        # Fraction(1), 1 and 1.0 hash identically, so mixed-exactness
        # multisets compare consistently with __eq__.
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if self.im == 0:
            return f"Coeff({self.re!s})"
        return f"Coeff({self.re!s}, {self.im!s})"


def _coerce(value) -> Coeff:
    if isinstance(value, Coeff):
        return value
    if isinstance(value, (int, Fraction, float)):
        return Coeff(value)
    if isinstance(value, complex):
        return Coeff(value.real, value.imag)
    return NotImplemented


ZERO = Coeff(0)
ONE = Coeff(1)
