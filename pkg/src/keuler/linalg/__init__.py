"""Exact rational linear algebra."""

from keuler.linalg.exact import (
    complement_basis,
    echelon,
    image_basis,
    independent_columns,
    inverse,
    kernel_basis,
    nullity,
    rank,
    rank_fraction,
    rref,
    solve,
)
from keuler.linalg.modular import BACKEND, chain_ranks, exact_rank
from keuler.linalg.rmatrix import Rational, RMatrix, as_rational, hstack, vstack

__all__ = [
    "BACKEND",
    "RMatrix",
    "Rational",
    "as_rational",
    "chain_ranks",
    "complement_basis",
    "echelon",
    "exact_rank",
    "hstack",
    "image_basis",
    "independent_columns",
    "inverse",
    "kernel_basis",
    "nullity",
    "rank",
    "rank_fraction",
    "rref",
    "solve",
    "vstack",
]
