"""Exact scalars: rationals, and Gaussian rationals a + b*i when enabled."""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class GaussianRational:
    """a + b*i with rational a, b.  Values with b == 0 are never produced;
    arithmetic collapses them back to ``Fraction``."""

    __slots__ = ("re", "im")

    def __init__(self, re, im) -> None:
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def make(re, im) -> "Scalar":
        im = Fraction(im)
        if im == 0:
            return Fraction(re)
        return GaussianRational(re, im)

    @staticmethod
    def _parts(other):
        if isinstance(other, GaussianRational):
            return other.re, other.im
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def __add__(self, other):
        p = GaussianRational._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational.make(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        p = GaussianRational._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational.make(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = GaussianRational._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational.make(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = GaussianRational._parts(other)
        if p is None:
            return NotImplemented
        a, b = p
        return GaussianRational.make(self.re * a - self.im * b, self.re * b + self.im * a)

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        return GaussianRational.make(self.re / n, -self.im / n)

    def __truediv__(self, other):
        p = GaussianRational._parts(other)
        if p is None:
            return NotImplemented
        if p[1] == 0:
            return GaussianRational.make(self.re / p[0], self.im / p[0])
        return self * GaussianRational(*p).inverse()

    def __rtruediv__(self, other):
        p = GaussianRational._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational.make(*p) * self.inverse()

    def __pow__(self, n: int):
        out: Scalar = Fraction(1)
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, other) -> bool:
        p = GaussianRational._parts(other)
        if p is None:
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __repr__(self) -> str:
        return f"GaussianRational({self.re}, {self.im})"


Scalar = Union[Fraction, GaussianRational]

I = GaussianRational(0, 1)


def as_scalar(value) -> Scalar:
    if isinstance(value, GaussianRational):
        return GaussianRational.make(value.re, value.im)
    return Fraction(value)


def is_gaussian(value) -> bool:
    return isinstance(value, GaussianRational)


def format_scalar(c: Scalar) -> str:
    """Rational as ``p`` or ``p/q``; Gaussian as ``(a+b*i)`` or ``b*i``."""
    if isinstance(c, GaussianRational):
        im = _fmt_frac(c.im)
        if c.re == 0:
            if abs(c.im) == 1:
                return "i" if c.im > 0 else "-i"
            return f"{im}*i"
        sign = "+" if c.im > 0 else "-"
        mag = _fmt_frac(abs(c.im))
        mag = "i" if abs(c.im) == 1 else f"{mag}*i"
        return f"({_fmt_frac(c.re)}{sign}{mag})"
    return _fmt_frac(c)


def _fmt_frac(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_scalar(text: str) -> Fraction:
    return Fraction(text.strip())
