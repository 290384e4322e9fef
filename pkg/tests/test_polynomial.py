import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicsep.polynomial import (
    DomainError,
    IntPolynomial,
    eval_scaled,
    is_irreducible_cubic,
    isolate_real_roots,
    parse_poly,
    poly_discriminant,
    sign_at,
)
from conftest import random_cubic

X = sympy.Symbol("x")
P1 = IntPolynomial.from_leading([2, 11, -16, -6])


def to_sympy(P):
    return sympy.Poly(list(P.leading_first()), X)


def test_parse_and_render():
    P = parse_poly("2, 11,-16,-6")
    assert P == P1
    assert str(P) == "2,11,-16,-6"
    assert P.degree == 3 and P.lead == 2 and P.height == 16
    assert P.B == 2 and P.A == 8 and P.A * P.B == P.height
    for bad in ["", "1,,2", "a,b", "0,0"]:
        with pytest.raises(DomainError):
            parse_poly(bad)


def test_trailing_zeros_trimmed():
    assert IntPolynomial((1, 2, 0, 0)).degree == 1
    assert IntPolynomial(()).is_zero


@pytest.mark.parametrize(
    "lead_first, expected",
    [([1, 0, -1, 0], 4), ([1, 0, 0, -2], -108), ([2, 11, -16, -6], 129816), ([1, 3, 0, 1], -135)],
)
def test_discriminant_examples(lead_first, expected):
    assert poly_discriminant(IntPolynomial.from_leading(lead_first)) == expected


def test_discriminant_rejects_other_degrees():
    with pytest.raises(DomainError):
        poly_discriminant(IntPolynomial.from_leading([1, 0, -2]))


def test_discriminant_matches_sympy_on_random_cubics():
    rng = random.Random(1)
    for _ in range(1000):
        P = random_cubic(rng, 1000)
        assert poly_discriminant(P) == sympy.discriminant(to_sympy(P))


def test_discriminant_matches_resultant_formula():
    # Delta = -Res(P, P') / a3 for a cubic.
    rng = random.Random(2)
    for _ in range(200):
        P = random_cubic(rng, 50)
        res = sympy.resultant(to_sympy(P), to_sympy(P).diff(X))
        assert poly_discriminant(P) * P.lead == -res


def test_discriminant_is_product_of_root_differences():
    import mpmath

    mpmath.mp.dps = 40
    for lead_first, expected in [([1, 0, 0, -2], -108), ([2, 11, -16, -6], 129816)]:
        roots = mpmath.polyroots(lead_first, maxsteps=200, extraprec=200)
        prod = mpmath.mpf(lead_first[0]) ** 4
        for i in range(3):
            for j in range(i + 1, 3):
                prod *= (roots[i] - roots[j]) ** 2
        assert abs(prod - expected) < mpmath.mpf(10) ** -20


def test_eval_scaled_examples():
    assert eval_scaled(IntPolynomial.from_leading([1, 0, 0, -2]), Fraction(4, 3)) == 10
    assert eval_scaled(IntPolynomial.from_leading([1, 0, -1, 0]), Fraction(1)) == 0
    assert eval_scaled(P1, Fraction(584, 403)) == -2


@given(
    st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=6),
    st.integers(-10**6, 10**6),
    st.integers(1, 10**6),
)
def test_eval_scaled_is_direct_sum(cs, p, q):
    P = IntPolynomial(tuple(cs))
    r = Fraction(p, q)
    d = P.degree
    direct = sum(a * r.numerator**i * r.denominator ** (d - i) for i, a in enumerate(P.coeffs))
    assert eval_scaled(P, r) == direct
    assert sign_at(P.coeffs, r.numerator, r.denominator) == (direct > 0) - (direct < 0)


def test_isolation_examples():
    (iv,) = isolate_real_roots(IntPolynomial.from_leading([1, 0, 0, -2]))
    assert 1 <= iv.lo and iv.hi <= 2
    ivs = isolate_real_roots(IntPolynomial.from_leading([1, 0, -1, 0]))
    assert len(ivs) == 3
    for iv, root in zip(ivs, (-1, 0, 1)):
        assert iv.contains(root)
        assert sum(other.contains(root) for other in ivs) == 1
    ivs = isolate_real_roots(IntPolynomial.from_leading([1, 0, -3, 1]))
    refined = [iv.refine_bits(20) for iv in ivs]
    assert all(iv.width <= Fraction(1, 2**20) for iv in refined)
    for iv, approx in zip(refined, (-1.8793852, 0.3472964, 1.5320889)):
        assert abs(float(iv.lo) - approx) < 1e-6


def test_isolation_rejects_repeated_roots():
    with pytest.raises(DomainError):
        isolate_real_roots(IntPolynomial.from_leading([1, -2, 1, 0]))


def test_isolation_matches_sturm_oracle():
    rng = random.Random(3)
    done = 0
    while done < 500:
        P = random_cubic(rng, 100)
        if poly_discriminant(P) == 0:
            continue
        ivs = isolate_real_roots(P)
        assert len(ivs) == to_sympy(P).count_roots()
        for a, b in zip(ivs, ivs[1:]):
            assert a.hi < b.lo
        for iv in ivs:
            if not iv.is_exact:
                assert sign_at(P.coeffs, iv.lo.numerator, iv.lo.denominator) != sign_at(
                    P.coeffs, iv.hi.numerator, iv.hi.denominator
                )
        done += 1


@settings(max_examples=60)
@given(st.lists(st.integers(-30, 30), min_size=4, max_size=4).filter(lambda c: c[3] != 0))
def test_interval_count_matches_sympy(cs):
    P = IntPolynomial(tuple(cs))
    if poly_discriminant(P) == 0:
        return
    assert len(isolate_real_roots(P)) == to_sympy(P).count_roots()


def test_refine_keeps_root():
    P = IntPolynomial.from_leading([1, 0, 0, -2])
    (iv,) = isolate_real_roots(P)
    iv = iv.refine_bits(60)
    assert iv.lo ** 3 <= 2 <= iv.hi ** 3


@pytest.mark.parametrize(
    "lead_first, expected",
    [([1, 0, 0, -2], True), ([1, 0, -1, 0], False), ([2, 11, -16, -6], True), ([6, 0, 0, 0], False),
     ([2, 4, 4, 2], False), ([4, 0, 0, 2], True)],
)
def test_irreducibility_examples(lead_first, expected):
    assert is_irreducible_cubic(IntPolynomial.from_leading(lead_first)) is expected


def test_irreducibility_matches_sympy():
    rng = random.Random(4)
    for _ in range(400):
        P = random_cubic(rng, 60)
        factors = sympy.factor_list(to_sympy(P))[1]
        expected = all(f.degree() in (0, 3) for f, _ in factors) and not any(
            f.degree() == 3 and m > 1 for f, m in factors
        )
        assert is_irreducible_cubic(P) is expected


def test_reducible_has_a_rational_root():
    rng = random.Random(5)
    for _ in range(300):
        P = random_cubic(rng, 20)
        if is_irreducible_cubic(P):
            continue
        Pp = P.primitive()
        lead, const = Pp.coeffs[-1], Pp.coeffs[0]
        cands = [Fraction(0)] if const == 0 else [
            Fraction(s * a, b)
            for a in range(1, abs(const) + 1) if const % a == 0
            for b in range(1, abs(lead) + 1) if lead % b == 0
            for s in (1, -1)
        ]
        assert any(eval_scaled(P, c) == 0 for c in cands)


def test_irreducibility_large_coefficients_use_isolation():
    # Coefficients beyond the divisor-enumeration limit.
    big = 10**9 + 7
    assert is_irreducible_cubic(IntPolynomial.from_leading([1, 0, 0, -2 * big])) is True
    assert is_irreducible_cubic(IntPolynomial.from_leading([big, -big * big, 1, -big])) is False


def test_shift_reflect_reversal():
    P = IntPolynomial.from_leading([1, 0, 0, -2])
    assert P.shift(1) == IntPolynomial.from_leading([1, 3, 3, -1])
    assert P.reflect() == IntPolynomial.from_leading([-1, 0, 0, -2])
    assert P.reversal() == IntPolynomial.from_leading([-2, 0, 0, 1])
    assert P.derivative() == IntPolynomial.from_leading([3, 0, 0])
