"""Cubic irrationals in Q((1/t)): series roots, continued fractions, Riccati equations.

A cubic over Q[t] is stored as four :class:`TPoly` coefficients.  Its height
is the largest coefficient norm, so log2 of the height is the largest degree
in t; most comparisons below are therefore done on exponents of 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

from .laurent import T, LaurentSeries, PrecisionError, TPoly, gcd_many
from .polynomial import DomainError, as_fraction

__all__ = [
    "TPolyCubic",
    "RamifiedBranchError",
    "KCFTemplate",
    "RiccatiCoeffs",
    "newton_polygon_edges",
    "rational_branches",
    "newton_root",
    "poly_cf_expand",
    "poly_convergents",
    "kcf_convergents",
    "kcf_cubic",
    "kcf_root",
    "derive_riccati",
    "ff_approx_check",
    "distance_valuation",
    "normalize_unit",
    "chain_42",
]

MAX_TERMS = 4096


class RamifiedBranchError(DomainError):
    """The requested root is not a Laurent series in 1/t (fractional exponents)."""


def _x_eval(coeffs: Sequence, x):
    out = LaurentSeries.coerce(0)
    for c in reversed(coeffs):
        out = out * x + LaurentSeries.coerce(c)
    return out


@dataclass(frozen=True)
class TPolyCubic:
    """a3 x^3 + a2 x^2 + a1 x + a0 with ``coeffs = (a0, a1, a2, a3)`` in Q[t]."""

    coeffs: tuple[TPoly, TPoly, TPoly, TPoly]

    def __post_init__(self):
        cs = tuple(TPoly.coerce(c) for c in self.coeffs)
        if len(cs) != 4 or cs[3].is_zero:
            raise DomainError("need four coefficients with a nonzero x^3 term")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_lists(cls, *coeffs) -> "TPolyCubic":
        """Each argument lists the t-coefficients (low first) of a0, a1, a2, a3."""
        return cls(tuple(TPoly(tuple(c)) for c in coeffs))

    @property
    def height_degree(self) -> int:
        return max(c.degree for c in self.coeffs)

    @property
    def height(self) -> Fraction:
        return Fraction(2) ** self.height_degree

    def __call__(self, x):
        return _x_eval(self.coeffs, x)

    def dx(self) -> tuple[TPoly, ...]:
        a0, a1, a2, a3 = self.coeffs
        return (a1, 2 * a2, 3 * a3)

    def dt(self) -> tuple[TPoly, ...]:
        return tuple(c.derivative() for c in self.coeffs)

    def substitute_t(self, r: TPoly) -> "TPolyCubic":
        return TPolyCubic(tuple(c.compose(r) for c in self.coeffs))

    def reversal(self) -> "TPolyCubic":
        """x^3 P(1/x), whose roots are the reciprocals."""
        return TPolyCubic(tuple(reversed(self.coeffs)))

    def shift_x(self, k) -> "TPolyCubic":
        """P(x + k), whose roots are those of P minus k."""
        k = as_fraction(k)
        a0, a1, a2, a3 = self.coeffs
        return TPolyCubic((
            a0 + a1.scale(k) + a2.scale(k * k) + a3.scale(k**3),
            a1 + a2.scale(2 * k) + a3.scale(3 * k * k),
            a2 + a3.scale(3 * k),
            a3,
        ))

    def primitive(self) -> "TPolyCubic":
        """Divide out the common polynomial factor and the rational content."""
        g = gcd_many(self.coeffs)
        cs = [c.exact_div(g) for c in self.coeffs]
        return TPolyCubic(tuple(_integer_normalize(cs)))

    def to_sympy(self):
        import sympy

        x, t = sympy.symbols("x t")
        expr = sum(
            sympy.Rational(c.numerator, c.denominator) * t**j * x**i
            for i, a in enumerate(self.coeffs)
            for j, c in enumerate(a.coeffs)
        )
        return expr, x, t

    def is_irreducible(self) -> bool:
        """Irreducible in x over Q(t) (Gauss: no factor of x-degree 1 or 2 over Q[t])."""
        import sympy

        expr, x, t = self.to_sympy()
        _, factors = sympy.factor_list(expr, x, t)
        return not any(0 < sympy.degree(f, x) < 3 for f, _ in factors)

    def depends_on_t(self) -> bool:
        return any(c.degree > 0 for c in self.coeffs)

    def __str__(self) -> str:
        return "; ".join(str(c) for c in reversed(self.coeffs))


def _integer_normalize(polys: Sequence[TPoly]) -> list[TPoly]:
    """Scale so all coefficients are coprime integers, last nonzero lead positive."""
    dens = [c.denominator for p in polys for c in p.coeffs]
    m = lcm(*dens) if dens else 1
    nums = [int(c * m) for p in polys for c in p.coeffs]
    g = 0
    for n in nums:
        g = gcd(g, n)
    g = g or 1
    lead = next(p.lead for p in reversed(polys) if not p.is_zero)
    if lead < 0:
        g = -g
    return [p.scale(Fraction(m, g)) for p in polys]


# ---- Newton polygon and series roots ----


def newton_polygon_edges(P: TPolyCubic) -> list[tuple[Fraction, list[int]]]:
    """Edges of the upper Newton polygon as (slope m, indices on the edge).

    A root of size |t^m| exists for each edge, where m makes deg a_i + i m
    maximal at two or more indices.
    """
    pts = {i: c.degree for i, c in enumerate(P.coeffs) if not c.is_zero}
    slopes = set()
    idx = sorted(pts)
    for a in idx:
        for b in idx:
            if a < b:
                slopes.add(Fraction(pts[a] - pts[b], b - a))
    edges = []
    for m in sorted(slopes, reverse=True):
        vals = {i: pts[i] + i * m for i in idx}
        top = max(vals.values())
        on = [i for i in idx if vals[i] == top]
        if len(on) >= 2:
            edges.append((m, on))
    return edges


def _edge_roots(P: TPolyCubic, on: list[int]) -> dict[Fraction, int]:
    import sympy

    y = sympy.Symbol("y")
    expr = sum(
        sympy.Rational(P.coeffs[i].lead.numerator, P.coeffs[i].lead.denominator) * y**i for i in on
    )
    poly = sympy.Poly(expr, y, domain="QQ")
    out = {}
    for r, mult in poly.ground_roots().items():
        if r != 0:
            out[Fraction(int(r.p), int(r.q))] = mult
    return out


def rational_branches(P: TPolyCubic) -> list[tuple[int, Fraction]]:
    """Leading terms lambda t^m of roots in Q((1/t)) found by the polygon."""
    out = []
    for m, on in newton_polygon_edges(P):
        if m.denominator != 1:
            continue
        for lam, mult in sorted(_edge_roots(P, on).items()):
            if mult == 1:
                out.append((int(m), lam))
    return out


def _resolve_branch(P: TPolyCubic, branch) -> tuple[int, Fraction]:
    edges = newton_polygon_edges(P)
    if branch is None:
        found = rational_branches(P)
        if len(found) == 1:
            return found[0]
        if not found and any(m.denominator != 1 for m, _ in edges):
            raise RamifiedBranchError("no unramified rational branch")
        raise DomainError(f"branch is ambiguous or missing: {found}")
    if isinstance(branch, TPoly):
        m, lam = branch.degree, branch.lead
    elif isinstance(branch, tuple):
        m, lam = branch
    else:
        m, lam = branch, None
    m = as_fraction(m)
    edge = next((on for mm, on in edges if mm == m), None)
    if edge is None:
        raise DomainError(f"no Newton polygon edge of slope {m}")
    if m.denominator != 1:
        raise RamifiedBranchError(f"slope {m} gives fractional exponents")
    roots = _edge_roots(P, edge)
    if lam is None:
        simple = [r for r, k in roots.items() if k == 1]
        if len(simple) != 1:
            raise DomainError("leading coefficient not determined by the slope")
        lam = simple[0]
    lam = as_fraction(lam)
    if lam not in roots:
        raise DomainError(f"{lam} is not a leading coefficient of a root")
    if roots[lam] > 1:
        raise DomainError("repeated leading coefficient; the branch is not simple")
    return int(m), lam


def newton_root(P: TPolyCubic, branch=None, terms: int = 20) -> LaurentSeries:
    """The root lambda t^m + ... of P as a series, correct through ``terms`` terms.

    ``branch`` is (m, lambda), a slope m, or a leading term such as ``T``.
    The result is certified by Hensel's lemma on the rescaled polynomial
    Q(y) = t^-N P(t^m y), whose coefficients all have norm <= 1.
    """
    if terms < 1:
        raise DomainError("terms must be positive")
    m, lam = _resolve_branch(P, branch)
    N = max(c.degree + i * m for i, c in enumerate(P.coeffs) if not c.is_zero)
    qs = [c.to_series().shift(i * m - N) for i, c in enumerate(P.coeffs)]
    dqs = [i * q for i, q in enumerate(qs)][1:]
    work = terms + 2
    y = LaurentSeries.monomial(lam, 0)
    for _ in range(64):
        r = _x_eval(qs, y)
        if r.is_zero:
            return LaurentSeries.from_terms(y.shift(m).terms(), None)
        e = r.valuation
        d = _x_eval(dqs, y)
        if e >= 0 or d.valuation != 0:
            raise DomainError("Newton iteration left the basin of the branch")
        if e <= -terms:
            hook = lambda n, P=P, b=(m, lam): newton_root(P, b, n)
            order = max(e + m, m - terms)
            return LaurentSeries.from_terms(y.shift(m).terms(), order, recompute=hook)
        step = r * d.inverse(work)
        y = LaurentSeries.from_terms((y - step).terms(), None).truncate(-work)
        y = LaurentSeries.from_terms(y.terms(), None)
    raise DomainError("Newton iteration did not converge")


# ---- regular continued fractions over Q[t] ----


def _cf_once(x: LaurentSeries, n: int) -> list[TPoly]:
    out = []
    cur = x
    for i in range(n + 1):
        a = cur.polynomial_part()
        out.append(a)
        if i == n:
            break
        rest = cur - a
        if rest.is_zero:
            raise DomainError("the series is rational; its expansion terminates")
        cur = rest.inverse()
    return out


def poly_cf_expand(x: LaurentSeries, n: int, max_terms: int = MAX_TERMS) -> list[TPoly]:
    """Partial quotients a_0..a_n, extending precision through the hook if needed."""
    if n < 0:
        raise DomainError("n must be non-negative")
    while True:
        try:
            return _cf_once(x, n)
        except PrecisionError:
            if x.recompute is None or x.precision >= max_terms:
                raise
            x = x.extend(min(2 * x.precision, max_terms))


def poly_convergents(quotients: Sequence[TPoly]) -> list[tuple[TPoly, TPoly]]:
    p0, p1 = TPoly.const(1), quotients[0]
    q0, q1 = TPoly(), TPoly.const(1)
    out = [(p1, q1)]
    for a in quotients[1:]:
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
        out.append((p1, q1))
    return out


# ---- the K-type continued fraction ----


@dataclass(frozen=True)
class KCFTemplate:
    """Head r(t), then per period k the four (numerator, denominator) entries.

    With r = t the entries are (2(3k+1)c, 3(4k+1)t), ((6k+1)c, t),
    (2(3k+2)c^2, 3(4k+3)t(t^2+2c)), ((6k'-1)c^2, t) with k' = k + last_shift.
    The default shift of 1 is the one that reproduces the series root;
    ``last_shift=0`` reads the fourth entry with the same k as the others.
    """

    c: Fraction
    r: TPoly = T
    last_shift: int = 1  # the fourth numerator is (6(k + last_shift) - 1) c^2

    def __post_init__(self):
        object.__setattr__(self, "c", as_fraction(self.c))
        if self.c == 0:
            raise DomainError("c must be nonzero")
        if self.r.degree < 1:
            raise DomainError("the substituted polynomial must be non-constant")

    @property
    def head(self) -> TPoly:
        return self.r

    def period(self, k: int) -> list[tuple[TPoly, TPoly]]:
        c, r = self.c, self.r
        return [
            (TPoly.const(2 * (3 * k + 1) * c), r.scale(3 * (4 * k + 1))),
            (TPoly.const((6 * k + 1) * c), r),
            (TPoly.const(2 * (3 * k + 2) * c * c), r.scale(3 * (4 * k + 3)) * (r * r + 2 * c)),
            (TPoly.const((6 * (k + self.last_shift) - 1) * c * c), r),
        ]

    def entries(self, count: int) -> list[tuple[TPoly, TPoly]]:
        out = []
        k = 0
        while len(out) < count:
            out.extend(self.period(k))
            k += 1
        return out[:count]


def kcf_convergents(tmpl: KCFTemplate, count: int) -> list[tuple[TPoly, TPoly]]:
    """(P_k, Q_k) for k = 0..count from P_k = b_k P_{k-1} + a_k P_{k-2}, gcd-reduced."""
    if count < 1:
        raise DomainError("count must be at least 1")
    p0, p1 = TPoly.const(1), tmpl.head
    q0, q1 = TPoly(), TPoly.const(1)
    out = [(p1, q1)]
    for a, b in tmpl.entries(count):
        p0, p1 = p1, b * p1 + a * p0
        q0, q1 = q1, b * q1 + a * q0
        g = gcd_many([p1, q1])
        out.append((p1.exact_div(g), q1.exact_div(g)))
    return out


def kcf_cubic(tmpl: KCFTemplate) -> TPolyCubic:
    """3x^3 - 3r x^2 - 3c x + c r."""
    c, r = tmpl.c, tmpl.r
    return TPolyCubic((r.scale(c), TPoly.const(-3 * c), r.scale(-3), TPoly.const(3)))


def kcf_root(tmpl: KCFTemplate, terms: int = 60) -> LaurentSeries:
    """The root of :func:`kcf_cubic` whose leading term is r(t)."""
    return newton_root(kcf_cubic(tmpl), (tmpl.r.degree, tmpl.r.lead), terms)


def distance_valuation(alpha: LaurentSeries, p: TPoly, q: TPoly, max_terms: int = MAX_TERMS) -> int:
    """deg of alpha - p/q, so |alpha - p/q| = 2**result."""
    while True:
        rel = alpha.precision + p.degree + q.degree + 8
        diff = alpha - p.to_series().divide(q.to_series(), rel)
        try:
            return diff.valuation
        except PrecisionError:
            if alpha.recompute is None or alpha.precision >= max_terms:
                raise
            alpha = alpha.extend(min(2 * alpha.precision, max_terms))


@dataclass
class ApproxRow:
    k: int
    distance_deg: int  # |alpha - P_k/Q_k| = 2**distance_deg
    q_deg: int
    height_deg: int
    convergent: bool  # |alpha - P/Q| < |Q|^-2
    passed: bool  # |alpha - P/Q| <= H^-3 |Q|^-2
    informational: bool  # index not of the form 4i + 2


def ff_approx_check(P: TPolyCubic, tmpl: KCFTemplate, indices: Sequence[int],
                    alpha: Optional[LaurentSeries] = None, terms: int = 60) -> list[ApproxRow]:
    """Compare |alpha - P_k/Q_k| with H(alpha)^-3 |Q_k|^-2 at the given indices.

    The height of the approximation is taken as |Q_k|.
    """
    if alpha is None:
        alpha = kcf_root(tmpl, terms)
    convs = kcf_convergents(tmpl, max(max(indices), 1))
    h = P.height_degree
    rows = []
    for k in indices:
        p, q = convs[k]
        d = distance_valuation(alpha, p, q)
        rows.append(ApproxRow(k, d, q.degree, h, d < -2 * q.degree, d <= -3 * h - 2 * q.degree, k % 4 != 2))
    return rows


# ---- Riccati equation ----


def _vec_mul_alpha(v, a):
    """a3 * alpha * v in the basis (1, alpha, alpha^2)."""
    a0, a1, a2, a3 = a
    c0, c1, c2 = v
    return (-(c2 * a0), a3 * c0 - c2 * a1, a3 * c1 - c2 * a2)


def _det3(m) -> TPoly:
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


@dataclass(frozen=True)
class RiccatiCoeffs:
    """D alpha' = A + B alpha + C alpha^2."""

    A: TPoly
    B: TPoly
    C: TPoly
    D: TPoly

    def as_tuple(self) -> tuple[TPoly, TPoly, TPoly, TPoly]:
        return (self.A, self.B, self.C, self.D)

    @property
    def max_degree(self) -> int:
        return max(p.degree for p in self.as_tuple())

    def max_norm(self) -> Fraction:
        return max(p.norm for p in self.as_tuple())

    def residual(self, alpha: LaurentSeries) -> LaurentSeries:
        return self.D * alpha.derivative() - self.A - self.B * alpha - self.C * alpha * alpha


@dataclass
class RiccatiResult:
    coeffs: RiccatiCoeffs
    identity_ok: bool
    bound_ok: bool  # max norm <= H^4
    height_degree: int


def _xpoly_mul(f: list[TPoly], g: list[TPoly]) -> list[TPoly]:
    out = [TPoly() for _ in range(len(f) + len(g) - 1)]
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return out


def _pseudo_remainder(f: list[TPoly], P: TPolyCubic) -> list[TPoly]:
    f = list(f)
    a3 = P.coeffs[3]
    while len(f) > 3:
        lc = f[-1]
        shift = len(f) - 4
        f = [c * a3 for c in f]
        for i, c in enumerate(P.coeffs):
            f[shift + i] = f[shift + i] - lc * c
        while f and f[-1].is_zero:
            f.pop()
    return f


def riccati_identity_holds(P: TPolyCubic, rc: RiccatiCoeffs) -> bool:
    """-D P_t(x) - (A + Bx + Cx^2) P_x(x) vanishes modulo P."""
    lhs = [-(rc.D * c) for c in P.dt()]
    rhs = _xpoly_mul([rc.A, rc.B, rc.C], list(P.dx()))
    n = max(len(lhs), len(rhs))
    lhs += [TPoly()] * (n - len(lhs))
    rhs += [TPoly()] * (n - len(rhs))
    f = [a - b for a, b in zip(lhs, rhs)]
    while f and f[-1].is_zero:
        f.pop()
    return all(c.is_zero for c in _pseudo_remainder(f, P))


def derive_riccati(P: TPolyCubic, check_irreducible: bool = True) -> RiccatiResult:
    """Solve P_x(alpha) * alpha' = -P_t(alpha) in the basis (1, alpha, alpha^2).

    Works with a3^2 P_x(alpha) so every matrix entry lies in Q[t], then uses
    Cramer's rule; the result is reduced to coprime integer coefficients.
    """
    if check_irreducible and not P.is_irreducible():
        raise DomainError("the cubic is reducible over Q(t)")
    if not P.depends_on_t():
        raise DomainError("coefficients are constant in t; the root is constant")
    a = P.coeffs
    a0, a1, a2, a3 = a
    cols = []
    for j in range(3):
        w = tuple(TPoly.const(1) if i == j else TPoly() for i in range(3))
        u1 = _vec_mul_alpha(w, a)
        u2 = _vec_mul_alpha(u1, a)
        cols.append(tuple(3 * a3 * u2[i] + 2 * a2 * a3 * u1[i] + a1 * a3 * a3 * w[i] for i in range(3)))
    da = P.dt()
    b1 = tuple(-(da[3] * (-a[i]) + a3 * da[i]) for i in range(3))
    rhs = tuple(a3 * b for b in b1)
    M = [[cols[j][i] for j in range(3)] for i in range(3)]
    D = _det3(M)
    nums = []
    for j in range(3):
        Mj = [[rhs[i] if jj == j else M[i][jj] for jj in range(3)] for i in range(3)]
        nums.append(_det3(Mj))
    polys = nums + [D]
    g = gcd_many(polys)
    polys = _integer_normalize([p.exact_div(g) for p in polys])
    # D is last; make its leading coefficient positive.
    if polys[3].lead < 0:
        polys = [-p for p in polys]
    rc = RiccatiCoeffs(*polys)
    h = P.height_degree
    return RiccatiResult(rc, riccati_identity_holds(P, rc), rc.max_degree <= 4 * h, h)


# ---- normalisation |alpha| = 1 and the (4, 2) chain ----


@dataclass
class Normalized:
    poly: TPolyCubic
    alpha: LaurentSeries
    steps: list[str] = field(default_factory=list)


def normalize_unit(P: TPolyCubic, alpha: LaurentSeries) -> Normalized:
    """Replace alpha by 1/alpha if |alpha| > 1, then by alpha + 1 if |alpha| < 1."""
    steps = []
    if alpha.valuation > 0:
        P, alpha = P.reversal(), alpha.inverse()
        steps.append("invert")
    if alpha.valuation < 0:
        P, alpha = P.shift_x(-1), alpha + 1
        steps.append("add_one")
    return Normalized(P.primitive(), alpha, steps)


@dataclass
class ChainRow:
    k: int
    distance_deg: int
    q_deg: int
    riccati_deg: int  # log2 of max{|B|, |C|, |D|/2}
    height_deg: int
    riccati_bound_ok: bool  # |alpha - p/q| >= (max{|B|,|C|,|D|/2} |q|^2)^-1
    height_bound_ok: bool  # ... >= (H^4 |q|^2)^-1


def chain_42(P: TPolyCubic, alpha: LaurentSeries, n: int) -> list[ChainRow]:
    """Check both lower bounds at the first n regular convergents of alpha (|alpha| = 1)."""
    if alpha.valuation != 0:
        raise DomainError("normalise alpha to norm 1 first")
    rc = derive_riccati(P, check_irreducible=False).coeffs
    degs = [p.degree for p in (rc.B, rc.C) if not p.is_zero]
    if not rc.D.is_zero:
        degs.append(rc.D.degree - 1)
    M = max(degs)
    h = P.height_degree
    rows = []
    quotients = poly_cf_expand(alpha, n)
    for k, (p, q) in enumerate(poly_convergents(quotients)):
        d = distance_valuation(alpha, p, q)
        rows.append(ChainRow(k, d, q.degree, M, h, d >= -(M + 2 * q.degree), d >= -(4 * h + 2 * q.degree)))
    return rows
