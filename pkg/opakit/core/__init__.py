"""
Core functionality for opakit.

Exact scalars over Q(sqrt 2) + i Q(sqrt 2), sparse polynomials in deglex
order, the polynomial text grammar, the supported function spaces and exact
linear algebra.
"""

from .errors import (
    ConsistencyError,
    ConvergenceError,
    DegenerateConfigurationError,
    DomainError,
    FixtureIntegrityError,
    ModeError,
    OpakitError,
    ParseError,
    SingularMatrixError,
)
from .linalg import HermitianLDL, determinant_exact, solve_hermitian_exact, solve_hermitian_float
from .mpoly import MPoly, deglex_rank, deglex_unrank, diag_threshold, monomial_count, monomials_upto
from .scalar import ExactScalar, QuadExt, to_complex, to_exact
from .spaces import SpaceSpec, inner_product, kernel_eval, monomial_weight, norm_squared
from .text import format_poly, format_scalar, parse_poly, parse_scalar

__all__ = [
    # Scalars and polynomials
    "ExactScalar",
    "QuadExt",
    "to_exact",
    "to_complex",
    "MPoly",
    "deglex_rank",
    "deglex_unrank",
    "diag_threshold",
    "monomial_count",
    "monomials_upto",
    # Text
    "parse_poly",
    "parse_scalar",
    "format_poly",
    "format_scalar",
    # Spaces
    "SpaceSpec",
    "inner_product",
    "norm_squared",
    "monomial_weight",
    "kernel_eval",
    # Linear algebra
    "HermitianLDL",
    "determinant_exact",
    "solve_hermitian_exact",
    "solve_hermitian_float",
    # Errors
    "OpakitError",
    "ParseError",
    "ModeError",
    "DomainError",
    "DegenerateConfigurationError",
    "SingularMatrixError",
    "ConsistencyError",
    "ConvergenceError",
    "FixtureIntegrityError",
]
