"""Small values of |x^3 - y^2| and of binary cubic forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .intervals import Interval, nth_root_enclosure
from .partition import Partition
from .polynomial import DomainError, IntPolynomial, as_fraction

__all__ = [
    "HallRecord",
    "ThueRecord",
    "ThueScan",
    "hall_delta",
    "hall_scan",
    "merge_hall",
    "hall_bridge",
    "thue_eval",
    "thue_scan",
    "merge_thue",
]

RATIO_BITS = 64


@dataclass(frozen=True)
class HallRecord:
    x: int
    y: int
    delta: int
    ratio: Interval  # encloses sqrt(x) / delta

    def sort_key(self):
        return (-self.ratio.lo, -self.ratio.hi, self.x)


def _sqrt_ratio(x: int, delta: int) -> Interval:
    root = isqrt(x)
    if root * root == x:
        return Interval.point(Fraction(root, delta))
    scaled = isqrt(x << (2 * RATIO_BITS))
    lo = Fraction(scaled, (1 << RATIO_BITS) * delta)
    hi = Fraction(scaled + 1, (1 << RATIO_BITS) * delta)
    return Interval(lo, hi)


def hall_delta(x: int) -> HallRecord | None:
    """Closest square to ``x**3``; ``None`` when ``x**3`` is itself a square."""
    if x < 1:
        raise DomainError("x must be positive")
    cube = x**3
    y0 = isqrt(cube)
    if y0 * y0 == cube:
        return None
    # |cube - y^2| is decreasing in y up to sqrt(cube) and increasing after,
    # so the minimiser is y0 or y0 + 1; the extra window members are harmless.
    best = None
    for y in (y0 - 1, y0, y0 + 1, y0 + 2):
        if y < 1:
            continue
        d = abs(cube - y * y)
        if best is None or d < best[1]:
            best = (y, d)
    y, delta = best
    return HallRecord(x, y, delta, _sqrt_ratio(x, delta))


def _below_power(delta: int, x: int, expo: Fraction) -> bool:
    """delta < x**expo for expo = m/n >= 0, decided with integers."""
    m, n = expo.numerator, expo.denominator
    return delta**n < x**m


def hall_scan(x_max: int, epsilon=0, partition: Partition | None = None) -> list[HallRecord]:
    """All x <= x_max with 0 < |x^3 - y^2| < x^(1/2 - epsilon), largest ratio first."""
    eps = as_fraction(epsilon)
    if x_max < 2:
        raise DomainError("x_max must be at least 2")
    if not 0 <= eps < Fraction(1, 2):
        raise DomainError("epsilon must lie in [0, 1/2)")
    expo = Fraction(1, 2) - eps
    partition = partition or Partition()
    out = []
    for x in partition.select(range(1, x_max + 1)):
        rec = hall_delta(x)
        if rec is not None and _below_power(rec.delta, x, expo):
            out.append(rec)
    out.sort(key=HallRecord.sort_key)
    return out


def merge_hall(parts: list[list[HallRecord]]) -> list[HallRecord]:
    out = [rec for part in parts for rec in part]
    out.sort(key=HallRecord.sort_key)
    return out


def hall_bridge(p: int, q: int) -> tuple[int, int]:
    """Both sides of |27*16*(4p^3 + 27q^2)| = |(108q)^2 - (-12p)^3|."""
    return abs(27 * 16 * (4 * p**3 + 27 * q**2)), abs((108 * q) ** 2 - (-12 * p) ** 3)


def thue_eval(a, p: int, q: int) -> int:
    """F_a(p, q) = a3 p^3 + a2 p^2 q + a1 p q^2 + a0 q^3 for a = (a0, a1, a2, a3)."""
    if p == 0 and q == 0:
        raise DomainError("(p, q) must be nonzero")
    a0, a1, a2, a3 = a
    return a3 * p**3 + a2 * p * p * q + a1 * p * q * q + a0 * q**3


def cubic_of(a) -> IntPolynomial:
    """The cubic a3 x^3 + a2 x^2 + a1 x + a0 with coefficient vector ``a``."""
    return IntPolynomial(tuple(a))


@dataclass(frozen=True)
class ThueRecord:
    a: tuple[int, int, int, int]
    p: int
    q: int
    value: int
    score: Interval  # |value| * |a|^(4+2eps) / q^(1/2-eps)
    score_power: Fraction  # score ** (2 * den(eps)), exact

    def sort_key(self):
        return (self.score_power, self.a, self.p, self.q)


@dataclass
class ThueScan:
    records: list[ThueRecord]
    minimum: ThueRecord | None
    checked: int


def _score_power(value: int, norm: int, q: int, eps: Fraction) -> tuple[Fraction, int]:
    """score^(2b) as an exact rational, with b the denominator of eps."""
    b = eps.denominator
    a = eps.numerator
    # score = |F| * N^((4b + 2a)/b) / q^((b - 2a)/(2b))
    k = 2 * b
    return Fraction(abs(value) ** k * norm ** (8 * b + 4 * a), q ** (b - 2 * a)), k


def _score_interval(power: Fraction, k: int) -> Interval:
    return nth_root_enclosure(power, k, RATIO_BITS)


def thue_scan(a_max: int, q_max: int, epsilon, partition: Partition | None = None) -> ThueScan:
    """Every (a, p, q) with |a| <= a_max, q <= q_max and normalised score below 1."""
    eps = as_fraction(epsilon)
    if a_max < 1 or q_max < 1:
        raise DomainError("a_max and q_max must be positive")
    if not 0 < eps < Fraction(1, 2):
        raise DomainError("epsilon must lie in (0, 1/2)")
    partition = partition or Partition()
    rng = range(-a_max, a_max + 1)
    vectors = [(a0, a1, a2, a3) for a3 in rng for a2 in rng for a1 in rng for a0 in rng]
    vectors = [v for v in vectors if any(v)]
    records: list[ThueRecord] = []
    best: tuple | None = None
    checked = 0
    for a in partition.select(vectors):
        norm = max(abs(c) for c in a)
        for q in range(1, q_max + 1):
            bound = 2 * q * (1 + a_max)
            for p in range(-bound, bound + 1):
                if gcd(p, q) != 1:
                    continue
                value = thue_eval(a, p, q)
                if value == 0:
                    continue
                checked += 1
                power, k = _score_power(value, norm, q, eps)
                key = (power, a, p, q)
                if best is None or key < best[0]:
                    best = (key, value, k)
                if power < 1:
                    records.append(ThueRecord(a, p, q, value, _score_interval(power, k), power))
    records.sort(key=ThueRecord.sort_key)
    minimum = None
    if best is not None:
        (power, a, p, q), value, k = best
        minimum = ThueRecord(a, p, q, value, _score_interval(power, k), power)
    return ThueScan(records, minimum, checked)


def merge_thue(parts: list[ThueScan]) -> ThueScan:
    records = sorted((r for part in parts for r in part.records), key=ThueRecord.sort_key)
    mins = [part.minimum for part in parts if part.minimum is not None]
    minimum = min(mins, key=ThueRecord.sort_key) if mins else None
    return ThueScan(records, minimum, sum(part.checked for part in parts))
