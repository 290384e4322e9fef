"""Certified root enclosures, root separation and depressed cubics.

The complex roots of a cubic with one real root ``r`` are recovered from
the quadratic cofactor ``P(x) / (x - r)``; every quantity is an exact
rational interval in ``r``, so the enclosures are certified once ``r`` is.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import log2

from .intervals import ComplexBox, Interval, nth_root_enclosure, sqrt_enclosure
from .partition import Partition
from .polynomial import (
    DomainError,
    IntPolynomial,
    RealRootInterval,
    as_fraction,
    is_irreducible_cubic,
    isolate_real_roots,
    poly_discriminant,
    _require_cubic,
)

__all__ = [
    "DoubleRootError",
    "SepEnclosure",
    "DepressedCubic",
    "SurveyRecord",
    "SurveyResult",
    "root_enclosures",
    "separation",
    "depress",
    "sep_survey",
    "merge_surveys",
    "canonical_cubic",
]


class DoubleRootError(DomainError):
    pass


@dataclass(frozen=True)
class SepEnclosure:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not 0 < self.lo <= self.hi:
            raise ValueError(f"invalid separation enclosure [{self.lo}, {self.hi}]")

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)


def _check_simple(P: IntPolynomial) -> int:
    _require_cubic(P)
    disc = poly_discriminant(P)
    if disc == 0:
        raise DoubleRootError(f"{P} has a repeated root")
    return disc


def _real_intervals(P: IntPolynomial, bits: int) -> list[RealRootInterval]:
    return [iv.refine_bits(bits) for iv in isolate_real_roots(P)]


def _quadratic_range(c0: int, c1: int, c2: int, r: Interval) -> Interval:
    """Exact range of c0 + c1 x + c2 x^2 over ``r``."""

    def at(x: Fraction) -> Fraction:
        n, d = x.numerator, x.denominator
        return Fraction(c0 * d * d + c1 * n * d + c2 * n * n, d * d)

    lo_v, hi_v = at(r.lo), at(r.hi)
    vals = [lo_v, hi_v]
    if c2:
        vertex = Fraction(-c1, 2 * c2)
        if r.lo < vertex < r.hi:
            vals.append(at(vertex))
    return Interval(min(vals), max(vals))


def _complex_pair_parts(P: IntPolynomial, r: Interval) -> tuple[Interval, Interval]:
    """Real part and 4*Im^2 of the conjugate pair, as intervals over the real root ``r``."""
    a0, a1, a2, a3 = P.coeffs
    re = Interval((Fraction(-a2, a3) - r.hi) / 2, (Fraction(-a2, a3) - r.lo) / 2)
    g = _quadratic_range(4 * a1 * a3 - a2 * a2, 2 * a2 * a3, 3 * a3 * a3, r)
    inv = Fraction(1, a3 * a3)
    return re, Interval(g.lo * inv, g.hi * inv)


def root_enclosures(P: IntPolynomial, precision_bits: int = 53) -> tuple[ComplexBox, ComplexBox, ComplexBox]:
    """Three disjoint boxes, each holding one root of the cubic ``P``.

    Real roots come first in increasing order; for a negative
    discriminant the conjugate pair follows, upper half-plane first.
    """
    disc = _check_simple(P)
    bits = precision_bits
    while True:
        reals = _real_intervals(P, bits + 2)
        if disc > 0:
            boxes = tuple(ComplexBox(iv.lo, iv.hi, Fraction(0), Fraction(0)) for iv in reals)
            return boxes  # type: ignore[return-value]
        (rv,) = reals
        r = Interval(rv.lo, rv.hi)
        re, four_im_sq = _complex_pair_parts(P, r)
        if four_im_sq.lo > 0:
            im = sqrt_enclosure(four_im_sq, bits + 4) * Fraction(1, 2)
            mag = 1 + max(abs(re.lo), abs(re.hi)) + im.hi
            limit = Fraction(1, 1 << precision_bits) * mag
            if re.width <= limit and im.width <= limit:
                real_box = ComplexBox(r.lo, r.hi, Fraction(0), Fraction(0))
                upper = ComplexBox.from_intervals(re, im)
                return real_box, upper, upper.conjugate()
        bits += max(8, precision_bits // 2)


def _min_interval(ivs: list[Interval]) -> Interval:
    return Interval(min(iv.lo for iv in ivs), min(iv.hi for iv in ivs))


def _sep_at(P: IntPolynomial, disc: int, bits: int) -> Interval | None:
    reals = _real_intervals(P, bits)
    if disc > 0:
        r = [Interval(iv.lo, iv.hi) for iv in reals]
        gaps = [r[1] - r[0], r[2] - r[1]]
        out = _min_interval(gaps)
        return out if out.lo > 0 else None
    (rv,) = reals
    r = Interval(rv.lo, rv.hi)
    _, four_im_sq = _complex_pair_parts(P, r)
    # |r - z|^2 = P'(r) / a3 for the conjugate pair z, z-bar.
    a0, a1, a2, a3 = P.coeffs
    cross = _quadratic_range(a1, 2 * a2, 3 * a3, r) * Fraction(1, a3)
    sq = _min_interval([cross, four_im_sq])
    if sq.lo <= 0:
        return None
    return sqrt_enclosure(sq, bits + 8)


def separation(P: IntPolynomial, precision_bits: int = 53) -> SepEnclosure:
    """Enclosure of the minimum distance between two roots of the cubic ``P``."""
    disc = _check_simple(P)
    target = Fraction(1, 1 << precision_bits)
    bits = precision_bits + 4
    while True:
        enc = _sep_at(P, disc, bits)
        if enc is not None:
            if enc.width <= target * enc.lo:
                return SepEnclosure(enc.lo, enc.hi)
            # Aim the next root width at a fraction of the wanted absolute width.
            need = precision_bits + 6 - int(log2(enc.lo)) if enc.lo < 1 else precision_bits + 6
            bits = max(bits + 4, need + P.height.bit_length())
        else:
            bits *= 2


@dataclass(frozen=True)
class DepressedCubic:
    """``rstar = 27 b3^3 x^3 + 3 b3 P_dep x + Q_dep`` for a source cubic with leading ``b3``."""

    rstar: IntPolynomial
    P_dep: int
    Q_dep: int
    b3: int


def depress(R: IntPolynomial) -> DepressedCubic:
    """Shift away the quadratic term: ``27 b3^2 R(x - b2/(3 b3))``."""
    _require_cubic(R)
    b0, b1, b2, b3 = R.coeffs
    h = Fraction(b2, 3 * b3)
    scale = 27 * b3 * b3
    # Exact expansion of R(x - h) over the rationals, then scaling.
    shifted = [Fraction(c) for c in R.coeffs]
    n = 3
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            shifted[j] -= h * shifted[j + 1]
    scaled = [c * scale for c in shifted]
    if any(c.denominator != 1 for c in scaled):
        raise ArithmeticError("depressed cubic is not integral")
    rstar = IntPolynomial(tuple(int(c) for c in scaled))
    P_dep = 9 * b3 * b1 - 3 * b2 * b2
    Q_dep = 2 * b2**3 - 9 * b3 * b2 * b1 + 27 * b3 * b3 * b0
    expected = IntPolynomial((Q_dep, 3 * b3 * P_dep, 0, 27 * b3**3))
    if rstar != expected:
        raise ArithmeticError("depressed cubic disagrees with the closed form")
    d_star = poly_discriminant(rstar)
    if d_star != scale**4 * poly_discriminant(R):
        raise ArithmeticError("discriminant scaling identity failed")
    if d_star != 27**2 * b3**6 * (-4 * P_dep**3 - 27 * Q_dep**2):
        raise ArithmeticError("depressed discriminant identity failed")
    return DepressedCubic(rstar, P_dep, Q_dep, b3)


def canonical_cubic(coeffs_leading_first) -> tuple[int, int, int, int]:
    """Representative of {P, -P, P(-x), -P(-x)} with b3 > 0 and the larger (b2, b0)."""
    b3, b2, b1, b0 = coeffs_leading_first
    if b3 < 0:
        b3, b2, b1, b0 = -b3, -b2, -b1, -b0
    alt = (b3, -b2, b1, -b0)
    return max((b3, b2, b1, b0), alt)


@dataclass(frozen=True)
class SurveyRecord:
    poly: IntPolynomial
    B: int
    A: Fraction
    sep_lo: Fraction
    sep_hi: Fraction
    score_lo: Fraction
    score_hi: Fraction

    def sort_key(self):
        return (self.score_lo, self.score_hi, self.poly.leading_first())

    def row(self) -> list:
        b3, b2, b1, b0 = self.poly.leading_first()
        return [b3, b2, b1, b0, self.B, self.A, self.sep_lo, self.sep_hi, self.score_lo, self.score_hi]


SURVEY_COLUMNS = ["b3", "b2", "b1", "b0", "B", "A", "sep_lo", "sep_hi", "score_lo", "score_hi"]


@dataclass
class SurveyResult:
    """k smallest records plus running minima; merges associatively."""

    records: list[SurveyRecord] = field(default_factory=list)
    count: int = 0
    min_score: Interval | None = None
    min_sep_h2: Interval | None = None
    k: int = 20

    def add(self, rec: SurveyRecord) -> None:
        self.count += 1
        score = Interval(rec.score_lo, rec.score_hi)
        h2 = rec.poly.height ** 2
        scaled = Interval(rec.sep_lo * h2, rec.sep_hi * h2)
        self.min_score = score if self.min_score is None else _min_interval([self.min_score, score])
        self.min_sep_h2 = scaled if self.min_sep_h2 is None else _min_interval([self.min_sep_h2, scaled])
        self.records.append(rec)
        if len(self.records) > 4 * self.k:
            self._trim()

    def _trim(self) -> None:
        self.records = heapq.nsmallest(self.k, self.records, key=SurveyRecord.sort_key)

    def finish(self) -> "SurveyResult":
        self._trim()
        return self


def merge_surveys(parts: list[SurveyResult]) -> SurveyResult:
    out = SurveyResult(k=parts[0].k if parts else 20)
    for part in parts:
        out.count += part.count
        out.records.extend(part.records)
        for name in ("min_score", "min_sep_h2"):
            cur, new = getattr(out, name), getattr(part, name)
            if new is not None:
                setattr(out, name, new if cur is None else _min_interval([cur, new]))
    return out.finish()


def _exponent_factor(B: int, H: int, s: Fraction, t: Fraction, bits: int) -> Interval:
    """Enclosure of B^(2+s) * A^(2-t) = B^(s+t) * H^(2-t)."""

    def power(base: int, e: Fraction) -> Interval:
        if e >= 0:
            return nth_root_enclosure(Fraction(base) ** e.numerator, e.denominator, bits)
        return 1 / nth_root_enclosure(Fraction(base) ** (-e.numerator), e.denominator, bits)

    return power(B, s + t) * power(H, 2 - t)


def sep_survey(
    B_max: int,
    H_max: int,
    s,
    t,
    partition: Partition | None = None,
    k: int = 20,
    precision_bits: int = 16,
) -> SurveyResult:
    """Exhaustive sep * B^(2+s) * A^(2-t) over irreducible cubics of bounded height.

    Cubics are enumerated up to x -> -x and P -> -P.  Outer blocks
    ``(b3, b2)`` are dealt round-robin to ``partition``.
    """
    s, t = as_fraction(s), as_fraction(t)
    if B_max < 1 or H_max < B_max:
        raise DomainError("need 1 <= B_max <= H_max")
    if s < 0 or t < 0:
        raise DomainError("s and t must be nonnegative")
    partition = partition or Partition()
    result = SurveyResult(k=k)
    factors: dict[tuple[int, int], Interval] = {}
    blocks = ((b3, b2) for b3 in range(1, B_max + 1) for b2 in range(-H_max, H_max + 1))
    rng = range(-H_max, H_max + 1)
    for b3, b2 in partition.select(blocks):
        for b1 in rng:
            for b0 in rng:
                if b0 == 0:
                    continue
                if (b2, b0) < (-b2, -b0):
                    continue
                P = IntPolynomial((b0, b1, b2, b3))
                if poly_discriminant(P) == 0 or not is_irreducible_cubic(P):
                    continue
                H = P.height
                sep = separation(P, precision_bits)
                key = (b3, H)
                if key not in factors:
                    factors[key] = _exponent_factor(b3, H, s, t, 64)
                f = factors[key]
                result.add(
                    SurveyRecord(P, b3, P.A, sep.lo, sep.hi, sep.lo * f.lo, sep.hi * f.hi)
                )
    return result.finish()
