"""Polynomials in t and truncated Laurent series in 1/t over the rationals.

The absolute value on both is |x| = 2**deg, where deg is the exponent of
the leading term; the zero element has norm 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .polynomial import DomainError, as_fraction

__all__ = ["TPoly", "LaurentSeries", "PrecisionError", "laurent_norm", "poly_gcd", "gcd_many", "T"]


class PrecisionError(ArithmeticError):
    """A truncated series does not determine the requested quantity."""


def _trim(cs: list[Fraction]) -> tuple[Fraction, ...]:
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class TPoly:
    """Polynomial in t with rational coefficients, ``coeffs[i]`` multiplies t**i."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim([as_fraction(c) for c in self.coeffs]))

    @classmethod
    def const(cls, c) -> "TPoly":
        return cls((c,))

    @classmethod
    def coerce(cls, x) -> "TPoly":
        return x if isinstance(x, TPoly) else cls.const(x)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree in t; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def norm(self) -> Fraction:
        return Fraction(0) if self.is_zero else Fraction(2) ** self.degree

    def __add__(self, other):
        if isinstance(other, LaurentSeries):
            return NotImplemented
        other = TPoly.coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return TPoly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return TPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-TPoly.coerce(other))

    def __rsub__(self, other):
        return TPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return NotImplemented
        other = TPoly.coerce(other)
        if self.is_zero or other.is_zero:
            return TPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return TPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = TPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        other = TPoly.coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / other.lead
            if c:
                quot[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return TPoly(tuple(quot)), TPoly(tuple(rem[:dq]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "TPoly":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ArithmeticError("division is not exact")
        return q

    def scale(self, c) -> "TPoly":
        c = as_fraction(c)
        return TPoly(tuple(c * a for a in self.coeffs))

    def monic(self) -> "TPoly":
        return self if self.is_zero else self.scale(1 / self.lead)

    def derivative(self) -> "TPoly":
        return TPoly(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def compose(self, r: "TPoly") -> "TPoly":
        """self(r(t))."""
        out = TPoly()
        for c in reversed(self.coeffs):
            out = out * r + c
        return out

    def __call__(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def to_series(self) -> "LaurentSeries":
        return LaurentSeries.from_terms({i: c for i, c in enumerate(self.coeffs)})

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and abs(c) == 1:
                s = ("-" if c < 0 else "") + mono
            elif mono:
                s = f"({c})*{mono}" if c.denominator != 1 else f"{c}*{mono}"
            else:
                s = str(c)
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")


T = TPoly((0, 1))


def poly_gcd(a: TPoly, b: TPoly) -> TPoly:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def gcd_many(polys: Iterable[TPoly]) -> TPoly:
    g = TPoly()
    for p in polys:
        g = poly_gcd(g, p)
    return g


@dataclass(frozen=True)
class LaurentSeries:
    """Truncated series sum c_k t^k over k <= top_degree.

    ``coeffs[i]`` is the coefficient of t**(top_degree - i).  When
    ``exact`` is false the value is only known up to terms t**e with
    e <= :attr:`order`; when true the stored terms are the whole value.
    """

    top_degree: int
    coeffs: tuple[Fraction, ...]
    exact: bool = False
    recompute: Optional[Callable[[int], "LaurentSeries"]] = field(default=None, compare=False, repr=False)

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    @property
    def order(self) -> Optional[int]:
        """Largest exponent that may still be wrong; None for exact values."""
        return None if self.exact else self.top_degree - len(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return self.exact and not self.coeffs

    @classmethod
    def from_terms(cls, terms: dict, order: Optional[int] = None, recompute=None) -> "LaurentSeries":
        """Build from {exponent: coefficient}; ``order=None`` means exact."""
        keys = [k for k, c in terms.items() if c != 0 and (order is None or k > order)]
        if not keys:
            if order is None:
                return cls(0, (), True, recompute)
            return cls(order, (), False, recompute)
        top = max(keys)
        low = min(keys) if order is None else order + 1
        cs = tuple(as_fraction(terms.get(k, 0)) for k in range(top, low - 1, -1))
        return cls(top, cs, order is None, recompute)

    @classmethod
    def monomial(cls, c, k: int) -> "LaurentSeries":
        return cls.from_terms({k: as_fraction(c)})

    @classmethod
    def coerce(cls, x) -> "LaurentSeries":
        if isinstance(x, LaurentSeries):
            return x
        if isinstance(x, TPoly):
            return x.to_series()
        return cls.from_terms({0: as_fraction(x)})

    def terms(self) -> dict[int, Fraction]:
        return {self.top_degree - i: c for i, c in enumerate(self.coeffs) if c}

    def coefficient(self, k: int) -> Fraction:
        if not self.exact and k <= self.order:
            raise PrecisionError(f"coefficient of t^{k} is beyond the known precision")
        i = self.top_degree - k
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    @property
    def valuation(self) -> int:
        """Exponent of the leading term (the d in |x| = 2**d)."""
        if not self.coeffs:
            if self.exact:
                raise DomainError("the zero series has no leading term")
            raise PrecisionError("no nonzero term is known")
        return self.top_degree

    @property
    def norm(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return Fraction(2) ** self.valuation

    def _upper(self) -> Optional[int]:
        """An upper bound for the exponents present (None for exact zero)."""
        if self.coeffs:
            return self.top_degree
        return None if self.exact else self.order

    def __add__(self, other):
        other = LaurentSeries.coerce(other)
        known = [o for o in (self.order, other.order) if o is not None]
        order = max(known) if known else None
        terms = self.terms()
        for k, c in other.terms().items():
            terms[k] = terms.get(k, 0) + c
        return LaurentSeries.from_terms(terms, order)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.top_degree, tuple(-c for c in self.coeffs), self.exact)

    def __sub__(self, other):
        return self + (-LaurentSeries.coerce(other))

    def __rsub__(self, other):
        return LaurentSeries.coerce(other) - self

    def __mul__(self, other):
        other = LaurentSeries.coerce(other)
        if self.is_zero or other.is_zero:
            return LaurentSeries.from_terms({})
        orders = []
        if self.order is not None:
            orders.append(self.order + other._upper())
        if other.order is not None:
            orders.append(other.order + self._upper())
        order = max(orders) if orders else None
        out: dict[int, Fraction] = {}
        for i, a in self.terms().items():
            for j, b in other.terms().items():
                k = i + j
                if order is None or k > order:
                    out[k] = out.get(k, 0) + a * b
        return LaurentSeries.from_terms(out, order)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = LaurentSeries.coerce(1)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by t**k."""
        return LaurentSeries(self.top_degree + k, self.coeffs, self.exact)

    def truncate(self, order: int) -> "LaurentSeries":
        """Forget every term with exponent <= order."""
        o = order if self.order is None else max(order, self.order)
        return LaurentSeries.from_terms(self.terms(), o)

    def inverse(self, rel_prec: Optional[int] = None) -> "LaurentSeries":
        """1/x to ``rel_prec`` terms (default: the precision carried by x)."""
        v = self.valuation
        if self.exact and len(self.coeffs) == 1:
            return LaurentSeries.from_terms({-v: 1 / self.coeffs[0]})
        if self.exact:
            if rel_prec is None:
                raise PrecisionError("inverse of a multi-term value needs rel_prec")
            n = rel_prec
        else:
            n = self.precision if rel_prec is None else min(rel_prec, self.precision)
        if n < 1:
            raise PrecisionError("no relative precision left")
        lead = self.coeffs[0]
        u = [c / lead for c in self.coeffs[:n]] + [Fraction(0)] * max(0, n - len(self.coeffs))
        w = [Fraction(1)]
        for k in range(1, n):
            w.append(-sum(u[i] * w[k - i] for i in range(1, k + 1)))
        terms = {-v - i: c / lead for i, c in enumerate(w)}
        return LaurentSeries.from_terms(terms, -v - n)

    def __truediv__(self, other):
        return self.divide(other)

    def divide(self, other, rel_prec: Optional[int] = None) -> "LaurentSeries":
        other = LaurentSeries.coerce(other)
        if rel_prec is None and other.exact and len(other.coeffs) > 1:
            if self.exact:
                raise PrecisionError("quotient of exact values needs rel_prec")
            rel_prec = self.precision
        return self * other.inverse(rel_prec)

    def derivative(self) -> "LaurentSeries":
        """d/dt, term by term."""
        terms = {k - 1: k * c for k, c in self.terms().items()}
        return LaurentSeries.from_terms(terms, None if self.order is None else self.order - 1)

    def polynomial_part(self) -> TPoly:
        if not self.exact and self.order >= 0:
            raise PrecisionError("polynomial part not determined at this precision")
        terms = self.terms()
        top = max([k for k in terms if k >= 0], default=-1)
        return TPoly(tuple(terms.get(i, 0) for i in range(top + 1)))

    def extend(self, terms: int) -> "LaurentSeries":
        if self.recompute is None:
            raise PrecisionError("series carries no recompute hook")
        return self.recompute(terms)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        body = ", ".join(str(c) for c in self.coeffs)
        tail = "" if self.exact else (", ..." if body else "...")
        return f"{self.top_degree}: {body}{tail}"


def laurent_norm(x) -> Fraction:
    """|x| = 2**d for leading exponent d; 0 for the zero series."""
    return LaurentSeries.coerce(x).norm
