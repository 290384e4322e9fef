"""Exact exponent pairs (u, v) for cubic-versus-rational distances."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .polynomial import DomainError, as_fraction

__all__ = [
    "ExponentPair",
    "RegionRow",
    "liouville_pair",
    "st_to_uv",
    "hall_family_uv",
    "outer_bound_u",
    "region_report",
]

Provenance = Literal["liouville", "sep_map", "hall_family", "outer_bound"]


@dataclass(frozen=True)
class ExponentPair:
    u: Fraction
    v: Fraction
    provenance: Provenance

    def __post_init__(self):
        if self.u <= 0 or self.v <= 0:
            raise ValueError("exponents must be positive")


def liouville_pair(d: int, r: int) -> tuple[ExponentPair, Fraction]:
    """Liouville's pair (r, d) for degrees (d, r) with constant (d+1)^-r (r+1)^-d."""
    if d < 1 or r < 1 or d == r:
        raise DomainError("need distinct positive degrees")
    const = Fraction(1, (d + 1) ** r * (r + 1) ** d)
    return ExponentPair(Fraction(r), Fraction(d), "liouville"), const


def st_to_uv(s, t) -> ExponentPair:
    """(2(1+s)/(s+t), 2 + s/(s+t)) from a separation bound with exponents (s, t)."""
    s, t = as_fraction(s), as_fraction(t)
    if s <= 0 or t <= 0:
        raise DomainError("s and t must be positive")
    return ExponentPair(2 * (1 + s) / (s + t), 2 + s / (s + t), "sep_map")


def hall_family_uv(epsilon, r) -> ExponentPair:
    """(2r + 2(1-r)/(1/2 - eps), 2 + r) for 1/2 + eps <= r <= 1."""
    eps, r = as_fraction(epsilon), as_fraction(r)
    if not 0 < eps < Fraction(1, 2):
        raise DomainError("epsilon must lie in (0, 1/2)")
    if not Fraction(1, 2) + eps <= r <= 1:
        raise DomainError(f"r = {r} outside [1/2 + eps, 1]")
    return ExponentPair(2 * r + 2 * (1 - r) / (Fraction(1, 2) - eps), 2 + r, "hall_family")


def outer_bound_u(v) -> Fraction:
    """Smallest admissible u for a given v in [2, 3]: u >= 10 - 3v."""
    v = as_fraction(v)
    if not 2 <= v <= 3:
        raise DomainError("v must lie in [2, 3]")
    return 10 - 3 * v


@dataclass(frozen=True)
class RegionRow:
    v: Fraction
    outer_u: Fraction
    inner_u: Fraction | None
    provenance: str

    @property
    def consistent(self) -> bool:
        return self.inner_u is None or self.inner_u >= self.outer_u


def region_report(epsilon, grid_points: int) -> list[RegionRow]:
    """Outer bound and conditional inner point on an even grid of v over [2, 3]."""
    eps = as_fraction(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise DomainError("epsilon must lie in (0, 1/2)")
    if grid_points < 2:
        raise DomainError("need at least two grid points")
    rows = []
    for i in range(grid_points):
        v = 2 + Fraction(i, grid_points - 1)
        outer = outer_bound_u(v)
        tags = ["outer_bound"]
        inner = None
        if v >= Fraction(5, 2) + eps:
            inner = hall_family_uv(eps, v - 2).u
            tags.append("hall_family")
        if v == 3:
            tags.append("liouville")
        rows.append(RegionRow(v, outer, inner, ";".join(tags)))
    return rows
