"""Exact rational interval arithmetic, real and rectangular-complex."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .polynomial import as_fraction

__all__ = ["Interval", "ComplexBox", "sqrt_enclosure", "nth_root_enclosure"]


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        x = as_fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: "Interval") -> bool:
        return not (self.hi < other.lo or other.hi < self.lo)

    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        return Interval.point(other)

    def __add__(self, other):
        o = self._coerce(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        return Interval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def sqr(self) -> "Interval":
        if self.lo >= 0:
            return Interval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return Interval(self.hi * self.hi, self.lo * self.lo)
        return Interval(Fraction(0), max(self.lo * self.lo, self.hi * self.hi))

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def __pow__(self, k: int) -> "Interval":
        if k == 2:
            return self.sqr()
        out = Interval.point(1)
        for _ in range(k):
            out = out * self
        return out

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def relative_width(self) -> Fraction:
        if self.lo <= 0:
            raise ZeroDivisionError("relative width needs a positive lower bound")
        return self.width / self.lo

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


def _isqrt_floor_fraction(x: Fraction, bits: int) -> Fraction:
    scale = 1 << (2 * bits)
    n = (x.numerator * scale) // x.denominator
    return Fraction(isqrt(n), 1 << bits)


def _isqrt_ceil_fraction(x: Fraction, bits: int) -> Fraction:
    scale = 1 << (2 * bits)
    n = -((-x.numerator * scale) // x.denominator)
    r = isqrt(n)
    if r * r < n:
        r += 1
    return Fraction(r, 1 << bits)


def _exact_sqrt(x: Fraction) -> Fraction | None:
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def sqrt_enclosure(iv: Interval, bits: int = 64) -> Interval:
    """Rational enclosure of sqrt over a nonnegative interval, padded by 2**-bits."""
    if iv.lo < 0:
        raise ValueError("square root of an interval reaching below zero")
    lo = _exact_sqrt(iv.lo)
    if lo is None:
        lo = _isqrt_floor_fraction(iv.lo, bits)
    hi = _exact_sqrt(iv.hi)
    if hi is None:
        hi = _isqrt_ceil_fraction(iv.hi, bits)
    return Interval(lo, hi)


def nth_root_enclosure(x: Fraction, n: int, bits: int = 64) -> Interval:
    """Enclosure of the positive real n-th root of ``x >= 0`` with dyadic endpoints."""
    x = as_fraction(x)
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return Interval.point(0)
    scale = 1 << (n * bits)
    target = (x.numerator * scale) // x.denominator
    r = _integer_nth_root(target, n)
    lo = Fraction(r, 1 << bits)
    if lo**n == x:
        return Interval(lo, lo)
    return Interval(lo, Fraction(r + 1, 1 << bits))


def _integer_nth_root(m: int, n: int) -> int:
    """floor(m ** (1/n)) for m >= 0."""
    if m < 2:
        return m
    r = 1 << ((m.bit_length() + n - 1) // n)
    while True:
        s = ((n - 1) * r + m // r ** (n - 1)) // n
        if s >= r:
            break
        r = s
    while r**n > m:
        r -= 1
    while (r + 1) ** n <= m:
        r += 1
    return r


@dataclass(frozen=True)
class ComplexBox:
    """Axis-aligned rectangle ``[re_lo, re_hi] x [im_lo, im_hi]`` in the complex plane."""

    re_lo: Fraction
    re_hi: Fraction
    im_lo: Fraction
    im_hi: Fraction

    @classmethod
    def from_intervals(cls, re: Interval, im: Interval) -> "ComplexBox":
        return cls(re.lo, re.hi, im.lo, im.hi)

    @property
    def re(self) -> Interval:
        return Interval(self.re_lo, self.re_hi)

    @property
    def im(self) -> Interval:
        return Interval(self.im_lo, self.im_hi)

    @property
    def width(self) -> Fraction:
        return max(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    @property
    def is_real(self) -> bool:
        return self.im_lo == 0 and self.im_hi == 0

    def conjugate(self) -> "ComplexBox":
        return ComplexBox(self.re_lo, self.re_hi, -self.im_hi, -self.im_lo)

    def disjoint(self, other: "ComplexBox") -> bool:
        return not (self.re.overlaps(other.re) and self.im.overlaps(other.im))

    def contains(self, re, im=0) -> bool:
        return self.re.contains(re) and self.im.contains(im)

    def abs_sq(self) -> Interval:
        return self.re.sqr() + self.im.sqr()


def complex_mul(a: tuple[Interval, Interval], b: tuple[Interval, Interval]):
    ar, ai = a
    br, bi = b
    return (ar * br - ai * bi, ar * bi + ai * br)


def eval_on_box(coeffs, box: ComplexBox) -> tuple[Interval, Interval]:
    """Interval Horner evaluation of an integer polynomial over a complex box."""
    z = (box.re, box.im)
    acc = (Interval.point(0), Interval.point(0))
    for c in reversed(coeffs):
        acc = complex_mul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc
