import random
from fractions import Fraction

import mpmath
import pytest
import sympy

from cubicsep.intervals import eval_on_box
from cubicsep.partition import Partition
from cubicsep.polynomial import IntPolynomial, isolate_real_roots, poly_discriminant
from cubicsep.roots import (
    DoubleRootError,
    canonical_cubic,
    depress,
    merge_surveys,
    root_enclosures,
    sep_survey,
    separation,
)
from conftest import random_cubic

mpmath.mp.dps = 50


def numeric_roots(P):
    return mpmath.polyroots(list(P.leading_first()), maxsteps=300, extraprec=300)


def to_fraction(x):
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    return (-1) ** sign * Fraction(int(man)) * Fraction(2) ** int(exp)


def box_contains(box, z, tol=Fraction(1, 10**40)):
    # The oracle's roots carry ~1e-45 noise, e.g. a stray imaginary part on real roots.
    re, im = to_fraction(z.real), to_fraction(z.imag)
    return (box.re_lo - tol <= re <= box.re_hi + tol) and (box.im_lo - tol <= im <= box.im_hi + tol)


def assert_boxes_match_oracle(P, boxes):
    roots = numeric_roots(P)
    for z in roots:
        z = mpmath.mpc(z)
        assert sum(box_contains(b, z) for b in boxes) == 1
    for i in range(3):
        for j in range(i + 1, 3):
            assert boxes[i].disjoint(boxes[j])


def test_enclosures_three_real_roots():
    P = IntPolynomial.from_leading([1, 0, -1, 0])
    boxes = root_enclosures(P, 20)
    for b, r in zip(boxes, (-1, 0, 1)):
        assert b.contains(r) and b.im_lo == b.im_hi == 0
        assert b.width <= Fraction(1, 2**20) * (1 + abs(r))


def test_enclosures_cube_root_of_two():
    P = IntPolynomial.from_leading([1, 0, 0, -2])
    real, upper, lower = root_enclosures(P, 20)
    assert abs(float(real.re_lo) - 1.259921) < 1e-5
    assert abs(float(upper.re_lo) + 0.629961) < 1e-5 and abs(float(upper.im_lo) - 1.091123) < 1e-5
    assert lower == upper.conjugate()
    assert_boxes_match_oracle(P, (real, upper, lower))


def test_enclosures_negative_discriminant_example():
    # x^3 + 3x^2 + 1 has discriminant -135: one real root and a conjugate pair.
    P = IntPolynomial.from_leading([1, 3, 0, 1])
    assert poly_discriminant(P) == -135
    boxes = root_enclosures(P, 30)
    assert sum(b.is_real for b in boxes) == 1
    assert_boxes_match_oracle(P, boxes)


def test_enclosures_reject_double_root():
    with pytest.raises(DoubleRootError):
        root_enclosures(IntPolynomial.from_leading([1, -2, 1, 0]))
    with pytest.raises(DoubleRootError):
        separation(IntPolynomial.from_leading([1, 0, -3, 2]))


def test_enclosures_certified_by_interval_evaluation():
    rng = random.Random(11)
    done = 0
    while done < 150:
        P = random_cubic(rng, 200)
        if poly_discriminant(P) == 0:
            continue
        boxes = root_enclosures(P, 24)
        for b in boxes:
            re, im = eval_on_box(P.coeffs, b)
            assert re.contains(0) and im.contains(0)
        assert_boxes_match_oracle(P, boxes)
        done += 1


def oracle_sep(P):
    r = numeric_roots(P)
    return to_fraction(min(abs(r[i] - r[j]) for i in range(3) for j in range(i + 1, 3)))


@pytest.mark.parametrize(
    "lead_first, approx",
    [([1, 0, -1, 0], 1.0), ([1, 0, 0, -2], 2.1822472719434427), ([1, 0, -3, 1], 1.1847925)],
)
def test_separation_examples(lead_first, approx):
    P = IntPolynomial.from_leading(lead_first)
    enc = separation(P, 40)
    assert enc.lo <= oracle_sep(P) <= enc.hi
    assert abs(float(enc.lo) - approx) < 1e-6
    assert enc.hi - enc.lo <= enc.lo / 2**40


def test_separation_exact_for_equally_spaced_roots():
    enc = separation(IntPolynomial.from_leading([1, 0, -1, 0]), 53)
    assert enc.lo <= 1 <= enc.hi


def test_separation_against_oracle_random():
    rng = random.Random(12)
    done = 0
    while done < 200:
        P = random_cubic(rng, 100)
        if poly_discriminant(P) == 0:
            continue
        enc = separation(P, 30)
        s = oracle_sep(P)
        slack = Fraction(1, 10**30)
        assert enc.lo <= s * (1 + slack) and s <= enc.hi * (1 + slack)
        done += 1


def test_separation_agrees_with_isolation_for_real_roots():
    rng = random.Random(13)
    done = 0
    while done < 100:
        P = random_cubic(rng, 60)
        if poly_discriminant(P) <= 0:
            continue
        ivs = [iv.refine_bits(60) for iv in isolate_real_roots(P)]
        gaps = [ivs[1].lo - ivs[0].hi, ivs[2].lo - ivs[1].hi]
        gaps_hi = [ivs[1].hi - ivs[0].lo, ivs[2].hi - ivs[1].lo]
        enc = separation(P, 30)
        assert enc.lo <= min(gaps_hi) and min(gaps) <= enc.hi
        done += 1


def test_depress_examples():
    d = depress(IntPolynomial.from_leading([1, 0, 1, 0]))
    assert d.rstar == IntPolynomial.from_leading([27, 0, 27, 0]) and (d.P_dep, d.Q_dep) == (9, 0)
    d = depress(IntPolynomial.from_leading([1, 3, 0, 1]))
    assert d.rstar == IntPolynomial.from_leading([27, 0, -81, 81]) and (d.P_dep, d.Q_dep) == (-27, 81)
    assert poly_discriminant(d.rstar) == 729 * -98415 == 27**4 * -135
    P1 = IntPolynomial.from_leading([2, 11, -16, -6])
    d = depress(P1)
    assert d.rstar.lead == 216
    assert poly_discriminant(d.rstar) == (27 * 4) ** 4 * 129816


def test_depress_identities_random():
    rng = random.Random(14)
    for _ in range(1000):
        R = random_cubic(rng, 100)
        d = depress(R)
        b3 = R.lead
        assert d.rstar.coeffs[2] == 0
        assert d.rstar == IntPolynomial((d.Q_dep, 3 * b3 * d.P_dep, 0, 27 * b3**3))
        disc = poly_discriminant(d.rstar)
        assert disc == (27 * b3 * b3) ** 4 * poly_discriminant(R)
        assert disc == 27**2 * b3**6 * (-4 * d.P_dep**3 - 27 * d.Q_dep**2)


def test_depress_matches_symbolic_shift():
    x = sympy.Symbol("x")
    R = IntPolynomial.from_leading([3, 5, -7, 2])
    b0, b1, b2, b3 = R.coeffs
    expr = sympy.expand(27 * b3**2 * sum(c * (x - sympy.Rational(b2, 3 * b3)) ** i for i, c in enumerate(R.coeffs)))
    assert sympy.Poly(expr, x).all_coeffs() == list(depress(R).rstar.leading_first())


def test_canonical_cubic_symmetries():
    P = IntPolynomial.from_leading([2, -3, 1, 5])
    variants = [P, -P, P.reflect(), -P.reflect()]
    assert len({canonical_cubic(v.leading_first()) for v in variants}) == 1
    assert canonical_cubic(P.leading_first())[0] > 0


def test_survey_small_range():
    res = sep_survey(1, 2, Fraction(1, 2), Fraction(1, 2))
    assert res.count > 0 and res.records
    assert res.min_score.lo > 0
    for rec in res.records:
        assert rec.B == rec.poly.lead and rec.A * rec.B == rec.poly.height
        assert 0 < rec.sep_lo <= rec.sep_hi and rec.score_lo <= rec.score_hi


def brute_force_survey_min(H):
    # Every cubic with b3 = 1 and height <= H, no symmetry reduction.
    best = None
    rng = range(-H, H + 1)
    for b2 in rng:
        for b1 in rng:
            for b0 in rng:
                P = IntPolynomial((b0, b1, b2, 1))
                f = sympy.factor_list(sympy.Poly(list(P.leading_first()), sympy.Symbol("x")))[1]
                if any(g.degree() < 3 for g, _ in f):
                    continue
                v = oracle_sep(P) * P.height**2
                best = v if best is None or v < best else best
    return best


def test_survey_sep_h2_minimum_matches_brute_force():
    res = sep_survey(1, 4, 0, 0)
    expected = brute_force_survey_min(4)
    assert res.min_sep_h2.lo <= expected <= res.min_sep_h2.hi
    assert res.min_sep_h2.lo > 0


def test_survey_counts_match_enumeration():
    # Counting symmetry classes: each class of irreducible cubics has 2 members with b3 > 0.
    rng = range(-3, 4)
    total = 0
    for b3 in (1, 2):
        for b2 in rng:
            for b1 in rng:
                for b0 in rng:
                    P = IntPolynomial((b0, b1, b2, b3))
                    f = sympy.factor_list(sympy.Poly(list(P.leading_first()), sympy.Symbol("x")))[1]
                    if all(g.degree() == 3 for g, _ in f) and b0 != 0:
                        total += 1
    assert sep_survey(2, 3, 0, 0).count * 2 == total


def test_survey_partitions_merge_to_single_run():
    single = sep_survey(2, 5, Fraction(1, 3), Fraction(1, 4))
    for n in (2, 3):
        merged = merge_surveys([sep_survey(2, 5, Fraction(1, 3), Fraction(1, 4), p) for p in Partition.all(n)])
        assert merged.count == single.count
        assert merged.records == single.records
        assert merged.min_score == single.min_score and merged.min_sep_h2 == single.min_sep_h2


def test_survey_empty_and_invalid():
    from cubicsep.polynomial import DomainError

    with pytest.raises(DomainError):
        sep_survey(3, 2, 0, 0)
    with pytest.raises(DomainError):
        sep_survey(1, 2, -1, 0)
