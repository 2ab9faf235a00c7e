"""Exact symbolic calculus for coupling Poisson structures near a symplectic leaf.

A chart carries leaf coordinates x1..x2s and fiber coordinates y1..yn.
The library represents 2-vector fields with exact rational-function
coefficients, converts them to geometric data (Ehresmann connection,
vertical bivector, leaf 2-form), verifies the coupling Poisson
conditions against a brute-force Schouten-bracket oracle, applies gauge
transformations, and linearizes vertical parts degree by degree with
graded Poisson-cohomology obstruction reporting.
"""

from .chart import ChartSpec
from .errors import (
    ChartMismatchError,
    DataDegeneracyError,
    HorizontalDegeneracyError,
    InternalInvariantError,
    LeafPoissonError,
    MalformedTargetError,
    NonPolynomialJetError,
    ParseError,
    SingularRestrictionError,
    UsageError,
)
from .ratfield import Poly, Q, RatFunc, parse_poly, parse_ratfunc

__version__ = "0.1.0"

__all__ = [
    "ChartSpec",
    "Poly",
    "Q",
    "RatFunc",
    "parse_poly",
    "parse_ratfunc",
    "LeafPoissonError",
    "UsageError",
    "ChartMismatchError",
    "ParseError",
    "SingularRestrictionError",
    "HorizontalDegeneracyError",
    "DataDegeneracyError",
    "NonPolynomialJetError",
    "MalformedTargetError",
    "InternalInvariantError",
    "__version__",
]
