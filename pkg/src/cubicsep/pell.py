"""A Pell-built family of cubics with unusually close rational approximations.

The family is indexed by the convergents v_n/u_n of sqrt(2).  Each member
P_n comes with a rational p_n/q_n satisfying |q_n^3 P_n(p_n/q_n)| = 2, and
the continued fraction of the root near sqrt(2) follows a fixed template
containing one very large partial quotient A_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .contfrac import AlgebraicReal, cf_expand
from .intervals import Interval, complex_mul
from .polynomial import DomainError, IntPolynomial, eval_scaled, is_irreducible_cubic
from .roots import root_enclosures

__all__ = [
    "PellPair",
    "FamilyMember",
    "pell_seq",
    "family_member",
    "verify_family_identity",
    "predicted_cf_prefix",
    "verify_cf_pattern",
    "closeness_exponents",
    "family_root",
]


@dataclass(frozen=True)
class PellPair:
    n: int
    u: int
    v: int

    @property
    def norm(self) -> int:
        """2u^2 - v^2, which is +-1."""
        return 2 * self.u**2 - self.v**2


def pell_seq(n_max: int) -> list[PellPair]:
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    us, vs = [1, 2], [1, 3]
    while len(us) <= n_max:
        us.append(2 * us[-1] + us[-2])
        vs.append(2 * vs[-1] + vs[-2])
    return [PellPair(n, us[n], vs[n]) for n in range(n_max + 1)]


def _pell_at(n: int) -> tuple[PellPair, PellPair]:
    seq = pell_seq(max(n, 1))
    return seq[n - 1], seq[n]


@dataclass(frozen=True)
class FamilyMember:
    n: int
    poly: IntPolynomial
    approx: Fraction
    A_n: int
    u: int
    v: int
    approx_gcd: int = 1
    irreducible: bool = True

    @property
    def scaled_value(self) -> int:
        return eval_scaled(self.poly, self.approx)


def family_member(n: int) -> FamilyMember:
    if n < 1:
        raise DomainError("the family starts at n = 1")
    prev, cur = _pell_at(n)
    u, v, u1 = cur.u, cur.v, prev.u
    poly = IntPolynomial.from_leading([u, 5 * u + u1, -2 * (3 * v - u1), -2 * v])
    p = 4 * u**3 + 16 * u * u * v + 14 * u * v * v + 4 * v**3
    q = 8 * u**3 + 14 * u * u * v + 8 * u * v * v + v**3
    g = gcd(p, q)
    A_n = 2 + 4 * u * v * (14 * u * u + 20 * u * v + 7 * v * v)
    return FamilyMember(n, poly, Fraction(p, q), A_n, u, v, g, is_irreducible_cubic(poly))


def family_root(m: FamilyMember) -> AlgebraicReal:
    """The root of P_n near sqrt(2), isolated in [5/4, 3/2]."""
    # The limiting cubic x^3 + (4+sqrt2)x^2 - (4sqrt2+2)x - 2sqrt2 has roots
    # sqrt(2), -0.307.. and -6.52..; only the first lies in the window.
    return AlgebraicReal.from_window(m.poly, Fraction(5, 4), Fraction(3, 2))


@dataclass
class IdentityCheck:
    n: int
    value: int
    passed: bool
    product: tuple[Interval, Interval] | None = None
    product_ok: bool = True


def verify_family_identity(n_max: int, with_roots: bool = True) -> list[IdentityCheck]:
    """Exact q^3 P(p/q) per member plus the root-product cross-check."""
    out = []
    for n in range(1, n_max + 1):
        m = family_member(n)
        value = m.scaled_value
        check = IdentityCheck(n, value, abs(value) == 2)
        if with_roots:
            check.product, check.product_ok = _root_product(m, value)
        out.append(check)
    return out


def _root_product(m: FamilyMember, value: int):
    """q^3 u prod(p/q - xi_i) over enclosures; it must contain ``value``."""
    q = m.approx.denominator
    bits = 3 * q.bit_length() + 32
    boxes = root_enclosures(m.poly, bits)
    r = m.approx
    acc = (Interval.point(q**3 * m.u), Interval.point(0))
    for b in boxes:
        acc = complex_mul(acc, (r - b.re, -b.im))
    ok = acc[0].contains(value) and acc[1].contains(0)
    return acc, ok


def predicted_cf_prefix(n: int, A_n: int | None = None) -> list[int]:
    if n < 1:
        raise DomainError("n must be at least 1")
    if A_n is None:
        A_n = family_member(n).A_n
    twos = [2] * (2 * n + 1)
    return [1] + [2] * n + [4] + twos + [3, A_n, 1, 1] + twos + [1, 1, 1] + twos + [1, 1]


@dataclass
class PatternMatch:
    n: int
    expected: list[int]
    actual: list[int]
    first_mismatch: int | None

    @property
    def full_match(self) -> bool:
        return self.first_mismatch is None


def verify_cf_pattern(n: int) -> PatternMatch:
    m = family_member(n)
    expected = predicted_cf_prefix(n, m.A_n)
    x = family_root(m)
    actual = list(cf_expand(x, len(expected) - 1).partial_quotients)
    mismatch = next((i for i, (a, b) in enumerate(zip(expected, actual)) if a != b), None)
    return PatternMatch(n, expected, actual, mismatch)


@dataclass
class ClosenessRow:
    n: int
    ratio: Interval  # |xi - p/q| * q^3 * v
    height_ratio: Fraction  # H(P_n) / v_n
    q_over_v3: Fraction
    samples: list[tuple[Fraction, Fraction]] = field(default_factory=list)


def closeness_exponents(n_max: int, bits: int = 32) -> list[ClosenessRow]:
    """Normalised distance |xi_{1,n} - p_n/q_n| q_n^3 v_n for each member."""
    rows = []
    samples = [(10 - 3 * v, v) for v in (Fraction(2), Fraction(5, 2), Fraction(3))]
    for n in range(1, n_max + 1):
        m = family_member(n)
        x = family_root(m)
        q = m.approx.denominator
        iv = x.root.excluding(m.approx)
        # Absolute width well below the distance, which is about q^-3 v^-1.
        iv = iv.refine_bits(3 * q.bit_length() + m.v.bit_length() + bits)
        d = Interval(iv.lo - m.approx, iv.hi - m.approx).abs()
        ratio = d * (q**3 * m.v)
        rows.append(
            ClosenessRow(n, ratio, Fraction(m.poly.height, m.v), Fraction(q, m.v**3), list(samples))
        )
    return rows
