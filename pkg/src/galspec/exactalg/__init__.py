"""Exact integer and polynomial arithmetic."""
from .finite_field import ModPolyFactorization, factor_mod_p, is_squarefree_mod_p, roots_mod_p
from .integers import (
    SquarefreeVerdict,
    factorize,
    is_prime,
    next_prime,
    primes_up_to,
    squarefree_integer,
    squarefree_kernel,
    valuation,
)
from .poly import BiPoly, UniPoly, content_primitive
from .resultant import discriminant, discriminant_in_X, poly_gcd, resultant, squarefree_part

__all__ = [
    "BiPoly", "UniPoly", "content_primitive", "resultant", "discriminant", "discriminant_in_X",
    "squarefree_part", "poly_gcd", "factor_mod_p", "roots_mod_p", "is_squarefree_mod_p",
    "ModPolyFactorization", "SquarefreeVerdict", "squarefree_integer", "squarefree_kernel",
    "factorize", "is_prime", "next_prime", "primes_up_to", "valuation",
]
