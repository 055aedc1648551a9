"""Exact scalars: arbitrary-precision rationals and complex rationals.

``Q`` is ``gmpy2.mpq`` when gmpy2 is importable and ``fractions.Fraction``
otherwise; both behave identically for the operations used here.
"""
from __future__ import annotations

from fractions import Fraction

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as _mpq

    Q = _mpq
    RATIONAL_TYPES: tuple = (type(_mpq(0)), Fraction, int)
except ImportError:  # pragma: no cover
    Q = Fraction
    RATIONAL_TYPES = (Fraction, int)


def to_q(x) -> "Q":
    """Coerce int, Fraction, mpq or a ``"p/q"`` string to ``Q``."""
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("refusing to coerce a float to an exact rational")
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    return Q(x)


def parse_rational(s: str) -> "Q":
    s = s.strip()
    if "/" in s:
        p, q = s.split("/")
        return Q(int(p), int(q))
    return Q(int(s))


def format_rational(x) -> str:
    """Canonical ``"p/q"`` form with ``q >= 1`` and the fraction reduced."""
    x = to_q(x)
    return f"{int(x.numerator)}/{int(x.denominator)}"


class ComplexRational:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Q else to_q(re)
        self.im = im if type(im) is Q else to_q(im)

    @classmethod
    def coerce(cls, x) -> "ComplexRational":
        if isinstance(x, ComplexRational):
            return x
        if isinstance(x, complex):
            raise TypeError("refusing to coerce a complex float to ComplexRational")
        return cls(x, 0)

    def conj(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        if isinstance(other, ComplexRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, RATIONAL_TYPES):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, ComplexRational):
            return ComplexRational(self.re + other.re, self.im + other.im)
        if isinstance(other, RATIONAL_TYPES):
            return ComplexRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ComplexRational):
            return ComplexRational(self.re - other.re, self.im - other.im)
        if isinstance(other, RATIONAL_TYPES):
            return ComplexRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ComplexRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if b == 0:
                return ComplexRational(a * c, a * d)
            if d == 0:
                return ComplexRational(a * c, b * c)
            return ComplexRational(a * c - b * d, a * d + b * c)
        if isinstance(other, RATIONAL_TYPES):
            return ComplexRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RATIONAL_TYPES):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return ComplexRational(self.re / other, self.im / other)
        if isinstance(other, ComplexRational):
            den = other.abs2()
            if den == 0:
                raise ZeroDivisionError("division by zero")
            num = self * other.conj()
            return ComplexRational(num.re / den, num.im / den)
        return NotImplemented

    def __rtruediv__(self, other):
        return ComplexRational.coerce(other) / self

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"CR({format_rational(self.re)})"
        return f"CR({format_rational(self.re)}, {format_rational(self.im)})"


ZERO = ComplexRational(0, 0)
ONE = ComplexRational(1, 0)
I_UNIT = ComplexRational(0, 1)
