import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from cubicsep.contfrac import (
    AlgebraicReal,
    cf_expand,
    convergent_transform,
    is_convergent,
    pair_parameters,
    recenter,
    roots_in,
)
from cubicsep.polynomial import DomainError, IntPolynomial, eval_scaled, isolate_real_roots, poly_discriminant
from cubicsep.roots import root_enclosures
from conftest import random_cubic

SQRT2 = AlgebraicReal.from_window(IntPolynomial.from_leading([1, 0, -2]), 1, 2)
CBRT2 = AlgebraicReal.from_window(IntPolynomial.from_leading([1, 0, 0, -2]), 1, 2)
P1 = IntPolynomial.from_leading([2, 11, -16, -6])
XI1 = AlgebraicReal.from_window(P1, Fraction(5, 4), Fraction(3, 2))


def mp_cf(value, n):
    out = []
    for _ in range(n + 1):
        a = int(mpmath.floor(value))
        out.append(a)
        value = 1 / (value - a)
    return out


def test_cf_sqrt2():
    assert cf_expand(SQRT2, 5).partial_quotients == (1, 2, 2, 2, 2, 2)


def test_cf_cube_root_of_two():
    exp = cf_expand(CBRT2, 4)
    assert exp.partial_quotients == (1, 3, 1, 5, 1)
    assert exp.convergents[:3] == (Fraction(1), Fraction(4, 3), Fraction(5, 4))


def test_cf_first_family_member():
    assert cf_expand(XI1, 8).partial_quotients == (1, 2, 4, 2, 2, 2, 3, 5738, 1)


def test_cf_against_numeric_oracle():
    mpmath.mp.dps = 400
    rng = random.Random(21)
    done = 0
    while done < 40:
        P = random_cubic(rng, 30)
        if poly_discriminant(P) == 0 or not P.primitive() == P:
            continue
        try:
            ivs = isolate_real_roots(P)
            x = AlgebraicReal.from_window(P, ivs[0].lo, ivs[0].hi)
        except DomainError:
            continue
        roots = [r for r in mpmath.polyroots(list(P.leading_first()), maxsteps=500, extraprec=1500)
                 if abs(mpmath.im(r)) < mpmath.mpf(10) ** -300]
        xi = min(roots, key=lambda r: mpmath.re(r))
        assert list(cf_expand(x, 25).partial_quotients) == mp_cf(mpmath.re(xi), 25)
        done += 1


def test_rejects_rational_and_bad_windows():
    with pytest.raises(DomainError):
        AlgebraicReal.from_window(IntPolynomial.from_leading([1, -2]), 1, 3)
    with pytest.raises(DomainError):
        AlgebraicReal.from_window(IntPolynomial.from_leading([1, 0, -1, 0]), -2, 2)
    with pytest.raises(DomainError):
        AlgebraicReal.from_window(IntPolynomial.from_leading([1, 0, -3, 1]), -3, 3)
    with pytest.raises(DomainError):
        cf_expand(SQRT2, -1)


def test_is_convergent_examples():
    assert is_convergent(SQRT2, Fraction(7, 5))
    assert not is_convergent(SQRT2, Fraction(4, 3))
    assert is_convergent(CBRT2, Fraction(4, 3))
    assert is_convergent(XI1, Fraction(584, 403))


def test_is_convergent_matches_legendre_brute_force():
    # Every p/q with |x - p/q| < 1/(2q^2) is a convergent; checked the other way round too.
    exp = cf_expand(CBRT2, 12)
    convs = set(exp.convergents)
    x = CBRT2.enclosure(200)
    for q in range(1, 60):
        for p in range(q, 2 * q + 1):
            r = Fraction(p, q)
            if r.denominator != q:
                continue
            if r in convs:
                assert is_convergent(CBRT2, r)
            elif max(abs(x.lo - r), abs(x.hi - r)) < Fraction(1, 2 * q * q):
                pytest.fail(f"{r} is Legendre-close but not a convergent")
            else:
                assert not is_convergent(CBRT2, r)


def test_transform_examples():
    Q = convergent_transform(CBRT2.minpoly, CBRT2, 0)
    assert Q == IntPolynomial.from_leading([-1, 6, -6, -10])
    assert poly_discriminant(Q) == -108
    assert abs(Q.lead) == 1
    Q = convergent_transform(P1, XI1, 2)
    assert poly_discriminant(Q) == 129816


def test_transform_invariants_random():
    rng = random.Random(22)
    done = 0
    while done < 40:
        P = random_cubic(rng, 40).primitive()
        if poly_discriminant(P) == 0:
            continue
        try:
            iv = isolate_real_roots(P)[-1]
            x = AlgebraicReal.from_window(P, iv.lo, iv.hi)
        except DomainError:
            continue
        exp = cf_expand(x, 9)
        for n in range(9):
            Q = convergent_transform(P, x, n)
            assert poly_discriminant(Q) == poly_discriminant(P)
            assert Q.lead == eval_scaled(P, exp.convergents[n])
        done += 1


def test_recenter_examples():
    Q = IntPolynomial.from_leading([1, -3, 2, 0])
    assert recenter(Q) == (Q, 0)
    # Roots 23/10 +- i/10 and 100: least-modulus pair has real part 2.3.
    Q = IntPolynomial.from_leading([100, -10460, 46530, -53000])
    R, k = recenter(Q)
    assert k == 2 and R == Q.shift(2)
    Q = IntPolynomial.from_leading([-1, 6, -6, -10])
    R, k = recenter(Q)
    box = min((b for b in root_enclosures(R, 40) if b.im_lo >= 0), key=lambda b: b.abs_sq().lo)
    assert -Fraction(1, 2) <= box.re_lo and box.re_hi <= Fraction(1, 2)
    assert poly_discriminant(R) == poly_discriminant(Q) and R.lead == Q.lead


def test_recenter_half_integer_tie_prefers_smaller_shift():
    # Roots 1/2 +- i and 10: exact tie between k = 0 and k = 1.
    Q = IntPolynomial.from_leading([4, -44, 45, -50])
    assert recenter(Q)[1] == 0
    # Roots -1/2 +- i and 10: tie between -1 and 0.
    Q = IntPolynomial.from_leading([4, -36, -35, -50])
    assert recenter(Q)[1] == 0
    # Roots -3/2 +- i and 10: tie between -2 and -1.
    Q = IntPolynomial.from_leading([4, -28, -107, -130])
    assert recenter(Q)[1] == -1


def test_recenter_invariants_random():
    rng = random.Random(23)
    done = 0
    while done < 100:
        Q = random_cubic(rng, 1000)
        if poly_discriminant(Q) == 0:
            continue
        R, k = recenter(Q)
        assert R == Q.shift(k) and R.lead == Q.lead
        assert poly_discriminant(R) == poly_discriminant(Q)
        done += 1


def test_pair_parameters_examples():
    pp = pair_parameters(CBRT2, Fraction(4, 3))
    d = CBRT2.enclosure(300)
    q = 3
    assert pp.A.lo * q * q * (Fraction(4, 3) - d.hi) <= 1 <= pp.A.hi * q * q * (Fraction(4, 3) - d.lo)
    pp = pair_parameters(XI1, Fraction(584, 403))
    assert pp.flags == {"lead_bound": True, "q_next_between": True, "disc_bound": True}
    assert pp.q_next == 2312532 and pp.B == 2
    assert pair_parameters(XI1, Fraction(584, 403), target_uv=(4, Fraction(5, 2))).tau == Fraction(1, 2)


def test_pair_parameters_errors():
    with pytest.raises(DomainError):
        pair_parameters(SQRT2, Fraction(7, 5))
    with pytest.raises(DomainError):
        pair_parameters(CBRT2, Fraction(3, 2))


def test_pair_parameters_flags_hold_on_all_convergents():
    exp = cf_expand(CBRT2, 15)
    for r in exp.convergents[1:]:
        assert all(pair_parameters(CBRT2, r).flags.values())


def test_roots_in_window():
    P = IntPolynomial.from_leading([1, 0, -3, 1])
    assert len(roots_in(P, -3, 3)) == 3
    assert len(roots_in(P, 0, 1)) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 30), st.integers(0, 30))
def test_determinant_and_prefix_invariants(n, m):
    x = XI1 if n % 2 else CBRT2
    exp = cf_expand(x, n)
    p, q = exp.numerators, exp.denominators
    for k in range(1, n + 1):
        assert p[k - 1] * q[k] - p[k] * q[k - 1] == (-1) ** k
        assert exp.partial_quotients[k] >= 1
    m = min(m, n)
    short = cf_expand(x, m)
    assert short.partial_quotients == exp.partial_quotients[: m + 1]
    assert short.convergents == exp.convergents[: m + 1]
