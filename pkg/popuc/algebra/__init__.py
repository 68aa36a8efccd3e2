from popuc.algebra.poly import ComplexPoly, poly_derivative, poly_eval, reversed_star
from popuc.algebra.ratfun import (
    RationalFn,
    RatOp,
    common_denominator,
    partial_fractions,
    rat_combine,
    rat_derivative,
    rational,
    wronskian,
)
from popuc.algebra.roots import RootOptions, cluster_roots, factored_roots, poly_roots

__all__ = [
    "ComplexPoly",
    "RatOp",
    "RationalFn",
    "RootOptions",
    "cluster_roots",
    "common_denominator",
    "factored_roots",
    "partial_fractions",
    "poly_derivative",
    "poly_eval",
    "poly_roots",
    "rat_combine",
    "rat_derivative",
    "rational",
    "reversed_star",
    "wronskian",
]
