"""Exact analysis of block strategies for symmetric rendezvous search on
the complete graph K4."""
from .kernels import BACKEND
from .numerics import Polynomial, QuadraticNumber, RationalFunction, to_decimal
from .patterns import PatternDistribution, uniform_pattern_distribution, y_distribution

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Polynomial",
    "QuadraticNumber",
    "RationalFunction",
    "to_decimal",
    "PatternDistribution",
    "uniform_pattern_distribution",
    "y_distribution",
]
