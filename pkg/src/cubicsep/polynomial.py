"""Dense integer polynomials, exact evaluation and real root isolation.

Everything here works on Python integers and :class:`fractions.Fraction`;
no floating point is involved anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "IntPolynomial",
    "RealRootInterval",
    "DomainError",
    "parse_poly",
    "as_fraction",
    "poly_discriminant",
    "eval_scaled",
    "isolate_real_roots",
    "is_irreducible_cubic",
    "sign_at",
]


class DomainError(ValueError):
    """Raised when an input violates an operation's precondition."""


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and strings such as ``"584/403"`` or ``"0.49"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a number here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial stored densely, ``coeffs[i]`` is the coefficient of x**i."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = [int(c) for c in self.coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [0]
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_leading(cls, coeffs: Iterable[int]) -> "IntPolynomial":
        """Build from coefficients listed leading first (a3, a2, a1, a0)."""
        return cls(tuple(reversed([int(c) for c in coeffs])))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    @property
    def lead(self) -> int:
        return self.coeffs[-1]

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coeffs)

    @property
    def B(self) -> int:
        """Absolute value of the leading coefficient."""
        return abs(self.lead)

    @property
    def A(self) -> Fraction:
        """Height divided by ``B``, so that ``A * B == height``."""
        return Fraction(self.height, self.B)

    @property
    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def leading_first(self) -> tuple[int, ...]:
        return tuple(reversed(self.coeffs))

    def primitive(self) -> "IntPolynomial":
        """Primitive part with a positive leading coefficient."""
        g = self.content
        if g == 0:
            return self
        if self.lead < 0:
            g = -g
        return IntPolynomial(tuple(c // g for c in self.coeffs))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def derivative(self) -> "IntPolynomial":
        if self.degree == 0:
            return IntPolynomial((0,))
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def shift(self, k: int) -> "IntPolynomial":
        """Return P(x + k)."""
        return IntPolynomial(tuple(_taylor_shift(list(self.coeffs), k)))

    def reflect(self) -> "IntPolynomial":
        """Return P(-x)."""
        return IntPolynomial(tuple(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)))

    def reversal(self) -> "IntPolynomial":
        """Return x**deg * P(1/x)."""
        return IntPolynomial(tuple(reversed(self.coeffs)))

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.leading_first())


def parse_poly(text: str) -> IntPolynomial:
    """Parse the ``"a3,a2,a1,a0"`` text format (leading coefficient first)."""
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(p == "" for p in parts):
        raise DomainError(f"malformed polynomial {text!r}")
    try:
        coeffs = [int(p) for p in parts]
    except ValueError as exc:
        raise DomainError(f"malformed polynomial {text!r}") from exc
    poly = IntPolynomial.from_leading(coeffs)
    if poly.is_zero:
        raise DomainError("zero polynomial")
    return poly


def _taylor_shift(cs: list[int], k) -> list:
    """Coefficients of P(x + k), in place on a copy (Horner-style synthetic division)."""
    cs = list(cs)
    n = len(cs) - 1
    if k == 0:
        return cs
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            cs[j] += k * cs[j + 1]
    return cs


def _require_cubic(P: IntPolynomial) -> None:
    if P.degree != 3:
        raise DomainError(f"expected a cubic, got degree {P.degree}")


def poly_discriminant(P: IntPolynomial) -> int:
    """Discriminant of a cubic, 18abcd - 4b^3 d + b^2 c^2 - 4ac^3 - 27a^2 d^2."""
    _require_cubic(P)
    d, c, b, a = P.coeffs
    return 18 * a * b * c * d - 4 * b**3 * d + b * b * c * c - 4 * a * c**3 - 27 * a * a * d * d


def eval_scaled(P: IntPolynomial, x) -> int:
    """Exact integer ``q**deg(P) * P(p/q)`` for a rational ``x = p/q``."""
    x = as_fraction(x)
    p, q = x.numerator, x.denominator
    acc = 0
    qpow = 1
    # Homogenised Horner: after step j, acc = sum_{i >= n-j} c_i p^(i-n+j) q^(n-i).
    for c in reversed(P.coeffs):
        acc = acc * p + c * qpow
        qpow *= q
    return acc


def sign_at(coeffs: Sequence[int], num: int, den: int = 1) -> int:
    """Sign of the polynomial with ``coeffs`` (low first) at ``num/den``, den > 0."""
    acc = 0
    dpow = 1
    for c in reversed(coeffs):
        acc = acc * num + c * dpow
        dpow *= den
    return (acc > 0) - (acc < 0)


def _fraction_sign(P: IntPolynomial, x: Fraction) -> int:
    return sign_at(P.coeffs, x.numerator, x.denominator)


@dataclass(frozen=True)
class RealRootInterval:
    """Closed interval ``[lo, hi]`` holding exactly one real root of ``poly``.

    When ``lo < hi`` neither endpoint is a root, so the sign of the
    polynomial differs at the two ends.
    """

    lo: Fraction
    hi: Fraction
    poly: IntPolynomial

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def bisect(self) -> "RealRootInterval":
        if self.is_exact:
            return self
        mid = (self.lo + self.hi) / 2
        s_mid = _fraction_sign(self.poly, mid)
        if s_mid == 0:
            return RealRootInterval(mid, mid, self.poly)
        if s_mid == _fraction_sign(self.poly, self.lo):
            return RealRootInterval(mid, self.hi, self.poly)
        return RealRootInterval(self.lo, mid, self.poly)

    def refine(self, width) -> "RealRootInterval":
        """Bisect until the interval is no wider than ``width``."""
        width = as_fraction(width)
        if width <= 0:
            raise DomainError("refinement width must be positive")
        if self.is_exact or self.width <= width:
            return self
        # Bisect on integer numerators over a shared denominator that doubles each step.
        coeffs = self.poly.coeffs
        den = self.lo.denominator * self.hi.denominator
        a = self.lo.numerator * self.hi.denominator
        b = self.hi.numerator * self.lo.denominator
        s_lo = sign_at(coeffs, a, den)
        w_num, w_den = width.numerator, width.denominator
        while (b - a) * w_den > w_num * den:
            a, b, den = 2 * a, 2 * b, 2 * den
            mid = (a + b) // 2
            s = sign_at(coeffs, mid, den)
            if s == 0:
                m = Fraction(mid, den)
                return RealRootInterval(m, m, self.poly)
            if s == s_lo:
                a = mid
            else:
                b = mid
        return RealRootInterval(Fraction(a, den), Fraction(b, den), self.poly)

    def refine_bits(self, bits: int) -> "RealRootInterval":
        return self.refine(Fraction(1, 1 << bits))

    def excluding(self, x) -> "RealRootInterval":
        """Refine until ``x`` lies outside the interval (``x`` must not be the root)."""
        x = as_fraction(x)
        cur = self
        while cur.contains(x):
            if cur.is_exact:
                raise DomainError("point is the root itself")
            cur = cur.bisect()
        return cur

    def floor(self) -> int:
        """Exact integer part of the isolated root."""
        lo_floor = self.lo.numerator // self.lo.denominator
        if self.is_exact:
            return lo_floor
        first = -((-self.lo.numerator) // self.lo.denominator)
        last = self.hi.numerator // self.hi.denominator
        if first > last:
            return lo_floor
        coeffs = self.poly.coeffs
        s_lo = _fraction_sign(self.poly, self.lo)
        # m < root  <=>  sign P(m) == sign P(lo), for integers m inside [lo, hi].
        if sign_at(coeffs, first) != s_lo:
            return first if sign_at(coeffs, first) == 0 else first - 1
        a, b = first, last + 1  # P(a) on the left of the root; b past the last candidate
        while b - a > 1:
            m = (a + b) // 2
            s = sign_at(coeffs, m)
            if s == 0:
                return m
            if s == s_lo:
                a = m
            else:
                b = m
        return a


def _sign_variations(seq: Iterable[int]) -> int:
    count = 0
    prev = 0
    for c in seq:
        if c == 0:
            continue
        if prev and (c > 0) != (prev > 0):
            count += 1
        prev = c
    return count


def _descartes_01(cs: list[int]) -> int:
    """Descartes bound for roots of ``cs`` in the open interval (0, 1)."""
    t = _taylor_shift(list(reversed(cs)), 1)
    # Roots at x = 1 of cs map to zeros at 0 after the transform; drop them.
    i = 0
    while i < len(t) and t[i] == 0:
        i += 1
    return _sign_variations(t[i:])


def _isolate_unit(cs: list[int]) -> list[tuple[Fraction, Fraction]]:
    """Vincent-Collins-Akritas bisection for the roots of ``cs`` inside [0, 1).

    ``cs`` must be squarefree.  Returns (lo, hi) pairs; a pair with lo == hi
    is an exact dyadic root.
    """
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(cs, 0, 0)]
    while stack:
        c, k, j = stack.pop()
        left = Fraction(j, 1 << k)
        if c[0] == 0:
            out.append((left, left))
            c = c[1:]
            if len(c) == 1:
                continue
        v = _descartes_01(c)
        if v == 0:
            continue
        right = Fraction(j + 1, 1 << k)
        if v == 1:
            out.append((left, right))
            continue
        n = len(c) - 1
        c_left = [ci << (n - i) for i, ci in enumerate(c)]
        c_right = _taylor_shift(c_left, 1)
        stack.append((c_right, k + 1, 2 * j + 1))
        stack.append((c_left, k + 1, 2 * j))
    return out


def _squarefree(P: IntPolynomial) -> bool:
    if P.degree <= 1:
        return True
    if P.degree == 3:
        return poly_discriminant(P) != 0
    return _fraction_poly_gcd_degree(list(P.coeffs), list(P.derivative().coeffs)) == 0


def _fraction_poly_gcd_degree(a: list, b: list) -> int:
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]

    def trim(p):
        while len(p) > 1 and p[-1] == 0:
            p.pop()
        return p

    a, b = trim(a), trim(b)
    while not (len(b) == 1 and b[0] == 0):
        r = list(a)
        while len(r) >= len(b) and not (len(r) == 1 and r[0] == 0):
            f = r[-1] / b[-1]
            shift = len(r) - len(b)
            for i, bc in enumerate(b):
                r[i + shift] -= f * bc
            r.pop()
            if not r:
                r = [Fraction(0)]
            trim(r)
        a, b = b, r
    return len(a) - 1


def _root_bound_exponent(P: IntPolynomial) -> int:
    """Smallest K with 2**K >= 1 + H/|lead|, which bounds every root."""
    bound = 1 + Fraction(P.height, abs(P.lead))
    k = 0
    while (1 << k) < bound:
        k += 1
    return k


def isolate_real_roots(P: IntPolynomial) -> list[RealRootInterval]:
    """Disjoint isolating intervals for all real roots of a squarefree ``P``, sorted."""
    if P.degree < 1:
        return []
    if not _squarefree(P):
        raise DomainError("polynomial is not squarefree")
    K = _root_bound_exponent(P)
    cs = list(P.coeffs)
    found: list[tuple[Fraction, Fraction]] = []
    if cs[0] == 0:
        found.append((Fraction(0), Fraction(0)))
        cs = cs[1:]
    if len(cs) > 1:
        scale = 1 << K
        pos = [c * scale**i for i, c in enumerate(cs)]
        neg = [c * (-scale) ** i for i, c in enumerate(cs)]
        for lo, hi in _isolate_unit(pos):
            if lo == 0 and hi == 0:
                continue
            found.append((lo * scale, hi * scale))
        for lo, hi in _isolate_unit(neg):
            if lo == 0 and hi == 0:
                continue
            found.append((-hi * scale, -lo * scale))
    found.sort()
    out = []
    for lo, hi in found:
        iv = _tighten(P, lo, hi)
        while iv.width > 1:
            iv = iv.bisect()
        out.append(iv)
    # Closed intervals may still share an endpoint; pull neighbours apart.
    for i in range(len(out) - 1):
        while out[i].hi >= out[i + 1].lo:
            if out[i].width >= out[i + 1].width:
                out[i] = out[i].bisect()
            else:
                out[i + 1] = out[i + 1].bisect()
    return out


def _tighten(P: IntPolynomial, lo: Fraction, hi: Fraction) -> RealRootInterval:
    """Shrink an open isolating interval so that neither endpoint is a root."""
    if lo == hi:
        return RealRootInterval(lo, hi, P)
    s_lo = _fraction_sign(P, lo)
    if s_lo == 0:
        # Sign of P just right of a simple root is the sign of P' there.
        s_lo = _fraction_sign(P.derivative(), lo)
    while _fraction_sign(P, lo) == 0 or _fraction_sign(P, hi) == 0:
        mid = (lo + hi) / 2
        s_mid = _fraction_sign(P, mid)
        if s_mid == 0:
            return RealRootInterval(mid, mid, P)
        if s_mid != s_lo:
            hi = mid
        else:
            lo = mid
    return RealRootInterval(lo, hi, P)


@lru_cache(maxsize=4096)
def _divisors(n: int) -> tuple[int, ...]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


_SMALL_DIVISOR_LIMIT = 10**8


def _has_rational_root_by_divisors(P: IntPolynomial) -> bool:
    a0, a3 = P.coeffs[0], P.coeffs[-1]
    if a0 == 0:
        return True
    for q in _divisors(a3):
        for p in _divisors(a0):
            if gcd(p, q) != 1:
                continue
            if sign_at(P.coeffs, p, q) == 0 or sign_at(P.coeffs, -p, q) == 0:
                return True
    return False


def _has_rational_root_by_isolation(P: IntPolynomial) -> bool:
    # A rational root p/q of a primitive P has q | lead, so lead*root is an integer.
    lead = abs(P.lead)
    for iv in isolate_real_roots(P):
        iv = iv.refine(Fraction(1, 2 * lead))
        lo, hi = iv.lo * lead, iv.hi * lead
        m = -((-lo.numerator) // lo.denominator)  # ceil(lo)
        while m <= hi:
            if sign_at(P.coeffs, m, lead) == 0:
                return True
            m += 1
    return False


def is_irreducible_cubic(P: IntPolynomial) -> bool:
    """True iff the primitive part of the cubic ``P`` has no rational root."""
    _require_cubic(P)
    P = P.primitive()
    if P.coeffs[0] == 0:
        return False
    if poly_discriminant(P) == 0:
        # A repeated root of a rational cubic is itself rational.
        return False
    if max(abs(P.coeffs[0]), abs(P.coeffs[-1])) <= _SMALL_DIVISOR_LIMIT:
        return not _has_rational_root_by_divisors(P)
    return not _has_rational_root_by_isolation(P)
