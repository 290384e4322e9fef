"""Exact tools for distances between cubic irrationals and rationals."""

__version__ = "0.1.0"

from .polynomial import (  # noqa: E402
    DomainError,
    IntPolynomial,
    eval_scaled,
    is_irreducible_cubic,
    isolate_real_roots,
    parse_poly,
    poly_discriminant,
)

__all__ = [
    "__version__",
    "DomainError",
    "IntPolynomial",
    "eval_scaled",
    "is_irreducible_cubic",
    "isolate_real_roots",
    "parse_poly",
    "poly_discriminant",
]
