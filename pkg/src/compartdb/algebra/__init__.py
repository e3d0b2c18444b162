"""Exact arithmetic kernels: fields, sparse polynomials, Groebner bases."""

from .fields import CONFIRM_PRIME, DEFAULT_PRIME, QQ, FpElement, PrimeField, is_prime
from .groebner import (
    buchberger,
    is_algebraic,
    is_groebner,
    is_zero_dimensional,
    minimal_polynomial,
    normal_form,
    spoly,
    standard_monomials,
)
from .linalg import det_bareiss_fp, in_row_space, matrix_rank_fp
from .poly import GREVLEX, LEX, MonomialOrder, MultiPoly, PolyRing
from .univariate import squarefree_part

__all__ = [
    "CONFIRM_PRIME",
    "DEFAULT_PRIME",
    "QQ",
    "FpElement",
    "PrimeField",
    "is_prime",
    "buchberger",
    "is_algebraic",
    "is_groebner",
    "is_zero_dimensional",
    "minimal_polynomial",
    "normal_form",
    "spoly",
    "standard_monomials",
    "det_bareiss_fp",
    "in_row_space",
    "matrix_rank_fp",
    "GREVLEX",
    "LEX",
    "MonomialOrder",
    "MultiPoly",
    "PolyRing",
    "squarefree_part",
]
