"""Symmetric-square L-functions of modular eigenforms.

Complex-analytic evaluation (direct Dirichlet series, approximate
functional equation, Petersson norms by rigorous quadrature), exact
cyclotomic/quadratic arithmetic, p-adic interpolation multipliers and
Kubota-Leopoldt values, and the Galois-theoretic bookkeeping needed to
turn L-value valuations into Selmer-group predictions.
"""

from .balls import BallComplex, BallReal, DEFAULT_PREC, certified_digits, agree_digits
from .cyclotomic import Cyclotomic, QuadraticNumber
from .exactpoly import ExactPoly
from .padics import GroupRingElt, PadicEmbedding, PadicNumber, hensel_root

__all__ = [
    "BallComplex",
    "BallReal",
    "DEFAULT_PREC",
    "Cyclotomic",
    "QuadraticNumber",
    "ExactPoly",
    "GroupRingElt",
    "PadicEmbedding",
    "PadicNumber",
    "hensel_root",
    "certified_digits",
    "agree_digits",
]

__version__ = "0.1.0"
