"""Continued fractions of real algebraic numbers and the convergent transforms.

An algebraic real is carried as (minimal polynomial, isolating interval).
One continued-fraction step takes the exact integer part ``a`` and
replaces the polynomial by the reversal of ``P(x + a)``; the isolating
interval is mapped through ``x -> 1/(x - a)``, which keeps it isolating.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterator

from .intervals import Interval
from .polynomial import (
    DomainError,
    IntPolynomial,
    RealRootInterval,
    as_fraction,
    eval_scaled,
    is_irreducible_cubic,
    isolate_real_roots,
    poly_discriminant,
    sign_at,
)
from .roots import root_enclosures

__all__ = [
    "AlgebraicReal",
    "CFExpansion",
    "PairParameters",
    "cf_expand",
    "iter_cf",
    "is_convergent",
    "convergent_transform",
    "recenter",
    "pair_parameters",
    "roots_in",
]


def roots_in(P: IntPolynomial, lo, hi) -> list[RealRootInterval]:
    """Isolating intervals of the real roots of ``P`` lying in ``[lo, hi]``."""
    lo, hi = as_fraction(lo), as_fraction(hi)
    if lo > hi:
        raise DomainError("empty root window")
    out = []
    for iv in isolate_real_roots(P):
        while True:
            if iv.hi < lo or iv.lo > hi:
                break
            if lo <= iv.lo and iv.hi <= hi:
                out.append(iv)
                break
            iv = iv.bisect()
    return out


def _is_irreducible(P: IntPolynomial) -> bool:
    if P.degree == 2:
        c, b, a = P.coeffs
        d = b * b - 4 * a * c
        return d < 0 or isqrt(d) ** 2 != d
    if P.degree == 3:
        return is_irreducible_cubic(P)
    # Higher degrees: only rational roots are ruled out here.
    lead = abs(P.lead)
    for iv in isolate_real_roots(P):
        iv = iv.refine(Fraction(1, 2 * lead))
        m = -((-(iv.lo * lead).numerator) // (iv.lo * lead).denominator)
        while m <= iv.hi * lead:
            if sign_at(P.coeffs, m, lead) == 0:
                return False
            m += 1
    return True


@dataclass(frozen=True)
class AlgebraicReal:
    """A real root of an irreducible integer polynomial, selected by an isolating interval."""

    minpoly: IntPolynomial
    root: RealRootInterval

    @classmethod
    def from_window(cls, P: IntPolynomial, lo, hi) -> "AlgebraicReal":
        P = P.primitive()
        if P.degree < 2:
            raise DomainError("rational numbers have no infinite continued fraction")
        if not _is_irreducible(P):
            raise DomainError(f"{P} is reducible over the rationals")
        found = roots_in(P, lo, hi)
        if len(found) != 1:
            raise DomainError(f"window [{lo}, {hi}] holds {len(found)} roots of {P}, expected 1")
        return cls(P, found[0])

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def height(self) -> int:
        return self.minpoly.height

    def enclosure(self, bits: int) -> Interval:
        iv = self.root.refine_bits(bits)
        return Interval(iv.lo, iv.hi)


@dataclass(frozen=True)
class CFExpansion:
    partial_quotients: tuple[int, ...]
    convergents: tuple[Fraction, ...]

    @property
    def numerators(self) -> list[int]:
        return [c.numerator for c in self.convergents]

    @property
    def denominators(self) -> list[int]:
        return [c.denominator for c in self.convergents]


def _normalize(P: IntPolynomial) -> IntPolynomial:
    return P.primitive()


def iter_cf(x: AlgebraicReal) -> Iterator[tuple[int, int, int]]:
    """Yield ``(a_k, p_k, q_k)`` indefinitely."""
    P = x.minpoly
    iv = x.root
    # Seed so that the first recurrence step yields p_0 = a_0, q_0 = 1.
    p_prev, p, q_prev, q = 0, 1, 1, 0
    while True:
        if iv.is_exact:
            raise DomainError("expansion terminated: the number is rational")
        a = iv.floor()
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        yield a, p, q
        if sign_at(P.coeffs, a) == 0:
            raise DomainError("expansion terminated: the number is rational")
        while iv.lo <= a:
            iv = iv.bisect()
            if iv.is_exact:
                raise DomainError("expansion terminated: the number is rational")
        P = _normalize(P.shift(a).reversal())
        iv = RealRootInterval(1 / (iv.hi - a), 1 / (iv.lo - a), P)


def cf_expand(x: AlgebraicReal, n: int) -> CFExpansion:
    """First ``n + 1`` partial quotients ``a_0 .. a_n`` and their convergents."""
    if n < 0:
        raise DomainError("depth must be nonnegative")
    quotients: list[int] = []
    convs: list[Fraction] = []
    for k, (a, p, q) in enumerate(iter_cf(x)):
        quotients.append(a)
        convs.append(Fraction(p, q))
        if k == n:
            break
    return CFExpansion(tuple(quotients), tuple(convs))


def _convergent_index(x: AlgebraicReal, r: Fraction, depth: int | None = None) -> tuple[int | None, list]:
    """Index of ``r`` among the convergents, scanning until q_k exceeds its denominator."""
    seen = []
    for k, (a, p, q) in enumerate(iter_cf(x)):
        seen.append((a, p, q))
        if p == r.numerator and q == r.denominator:
            return k, seen
        if q > r.denominator:
            return None, seen
        if depth is not None and k >= depth:
            return None, seen
    return None, seen  # pragma: no cover


def is_convergent(x: AlgebraicReal, r, depth: int = 10_000) -> bool:
    r = as_fraction(r)
    idx, _ = _convergent_index(x, r, depth)
    return idx is not None


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def mobius_transform(P: IntPolynomial, p0: int, p1: int, q0: int, q1: int) -> IntPolynomial:
    """sum a_i (p0 x - p1)^i (q0 x - q1)^(d-i)."""
    d = P.degree
    lin_p = [-p1, p0]
    lin_q = [-q1, q0]
    pows_p = [[1]]
    pows_q = [[1]]
    for _ in range(d):
        pows_p.append(_poly_mul(pows_p[-1], lin_p))
        pows_q.append(_poly_mul(pows_q[-1], lin_q))
    total = [0] * (d + 1)
    for i, a in enumerate(P.coeffs):
        term = _poly_mul(pows_p[i], pows_q[d - i])
        for j, c in enumerate(term):
            total[j] += a * c
    return IntPolynomial(tuple(total))


def convergent_transform(P: IntPolynomial, x: AlgebraicReal, n: int) -> IntPolynomial:
    """Polynomial whose roots are (q_{n+1} xi - p_{n+1}) / (q_n xi - p_n) over the roots xi of ``P``."""
    if P.degree != 3:
        raise DomainError("convergent transform is defined for cubics")
    if n < 0:
        raise DomainError("index must be nonnegative")
    exp = cf_expand(x, n + 1)
    pn, qn = exp.numerators[n], exp.denominators[n]
    pn1, qn1 = exp.numerators[n + 1], exp.denominators[n + 1]
    Q = mobius_transform(P, pn, pn1, qn, qn1)
    if poly_discriminant(Q) != poly_discriminant(P):
        raise ArithmeticError("unimodular transform changed the discriminant")
    if Q.lead != eval_scaled(P, Fraction(pn, qn)):
        raise ArithmeticError("leading coefficient differs from q^3 P(p/q)")
    return Q


def _smallest_root(Q: IntPolynomial, bits: int):
    """Box of the root of least modulus (upper member of a conjugate pair)."""
    max_bits = bits + 4096
    while True:
        boxes = root_enclosures(Q, bits)
        # A conjugate pair counts once; keep its upper member.
        cands = [b for b in boxes if b.im_lo >= 0]
        mods = [(b.abs_sq(), b) for b in cands]
        mods.sort(key=lambda mb: (mb[0].lo, mb[1].re_lo))
        best, rest = mods[0], mods[1:]
        if all(best[0].hi < m.lo for m, _ in rest) or bits >= max_bits:
            return best[1], bits
        bits *= 2


def _nearest_integer(re: Interval) -> int | None:
    """Nearest integer if every point of ``re`` rounds the same way, else None."""
    lo_k = (re.lo + Fraction(1, 2)).__floor__()
    hi_k = (re.hi + Fraction(1, 2)).__floor__()
    if lo_k == hi_k and re.hi + Fraction(1, 2) != hi_k:
        return lo_k
    return None


def recenter(Q: IntPolynomial, precision_bits: int = 32) -> tuple[IntPolynomial, int]:
    """Shift ``Q`` by an integer so its least-modulus root has real part in [-1/2, 1/2].

    Returns ``(R, k)`` with ``R(x) = Q(x + k)``.  An exact half-integer real
    part is resolved towards the smaller ``|k|``.
    """
    if Q.degree != 3:
        raise DomainError("recenter expects a cubic")
    bits = max(precision_bits, 8)
    box, bits = _smallest_root(Q, bits)
    for _ in range(64):
        k = _nearest_integer(box.re)
        if k is not None:
            break
        tie = _half_integer_tie(Q, box)
        if tie is not None:
            k = tie
            break
        bits *= 2
        box, bits = _smallest_root(Q, bits)
    else:
        raise ArithmeticError("could not decide the rounding of the root's real part")
    R = Q.shift(k)
    return R, k


def _half_integer_tie(Q: IntPolynomial, box) -> int | None:
    """If the real part is exactly j + 1/2, return the tie-broken shift."""
    lo_j = (box.re_lo - Fraction(1, 2)).__floor__()
    hi_j = (box.re_hi - Fraction(1, 2)).__ceil__()
    a0, a1, a2, a3 = Q.coeffs
    for j in range(lo_j, hi_j + 1):
        h = Fraction(2 * j + 1, 2)
        if not box.re.contains(h):
            continue
        if box.is_real:
            exact = sign_at(Q.coeffs, h.numerator, h.denominator) == 0
        else:
            # Re of the pair is (-a2/a3 - r)/2 with r the real root.
            r = Fraction(-a2, a3) - 2 * h
            exact = sign_at(Q.coeffs, r.numerator, r.denominator) == 0
        if exact:
            cands = [j, j + 1]
            cands.sort(key=lambda k: (abs(k), k))
            return cands[0]
    return None


@dataclass(frozen=True)
class PairParameters:
    """Quantities attached to a cubic irrational and one of its convergents."""

    A: Interval
    B: int
    n: int
    q_next: int
    tau: Fraction | None
    flags: dict = field(default_factory=dict)


def _distance(x: AlgebraicReal, r: Fraction, bits: int) -> Interval:
    iv = x.root.excluding(r).refine_bits(bits)
    d = Interval(iv.lo - r, iv.hi - r)
    if d.lo < 0:
        d = -d
    return d


def pair_parameters(x: AlgebraicReal, r, target_uv=None, bits: int = 64) -> PairParameters:
    """A = 1/(q^2 |xi - p/q|), B = |lead(Q)| and the inequality checks around them."""
    r = as_fraction(r)
    if x.degree != 3:
        raise DomainError("pair parameters are defined for cubic irrationals")
    idx, _ = _convergent_index(x, r)
    if idx is None:
        raise DomainError(f"{r} is not a convergent")
    q = r.denominator
    Q = convergent_transform(x.minpoly, x, idx)
    B = abs(Q.lead)
    q_next = cf_expand(x, idx + 1).denominators[idx + 1]
    H = x.height

    w = bits + 2 * q.bit_length() + 8
    while True:
        d = _distance(x, r, w)
        A = Interval(1 / (q * q * d.hi), 1 / (q * q * d.lo))
        if A.width * (1 << bits) <= A.lo:
            break
        w += bits
    lead_ok = _decide(x, r, lambda A_: B * A_ <= 7 * q * H * H, w)
    between = _decide(x, r, lambda A_: (A_ - 1) * q <= q_next <= A_ * q, w)
    disc_ok = abs(poly_discriminant(x.minpoly)) <= 54 * H**4
    tau = None
    if target_uv is not None:
        tau = as_fraction(target_uv[1]) - 2
    flags = {"lead_bound": lead_ok, "q_next_between": between, "disc_bound": disc_ok}
    return PairParameters(A, B, idx, q_next, tau, flags)


def _decide(x: AlgebraicReal, r: Fraction, pred, w: int) -> bool:
    """Evaluate a predicate of A that is constant on a small enough enclosure of A."""
    q = r.denominator
    for _ in range(40):
        d = _distance(x, r, w)
        A = Interval(1 / (q * q * d.hi), 1 / (q * q * d.lo))
        at_lo, at_hi = pred(A.lo), pred(A.hi)
        if at_lo == at_hi:
            return at_lo
        w *= 2
    raise ArithmeticError("predicate undecided at the working precision")
