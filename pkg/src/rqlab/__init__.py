"""rqlab: spectral laboratory for clamped higher-order Rayleigh-quotient problems.

Computes the eigenvalue spectra of the quotient
``<(u^(n))^2> / <(u^(n-p))^2>`` over functions on [-1, 1] clamped to order
n-1 at both endpoints, and verifies the stone/moment identity apparatus and
spectral-disjointness facts on the computed eigenpairs at machine precision.
"""

__version__ = "0.1.0"

from .exppoly import ExpPoly, SigmaPolynomial, inner_product, l2_norm_sq
from .problem import ProblemSpec, RootSystem, SolutionBasis, build_operator, root_system, solution_basis
from .ritz import RitzSystem, assemble, ritz_values
from .solver import (
    EigenPair,
    SpectrumSlice,
    antisym_equals_next_sym,
    det_indicator,
    extract_eigenfunction,
    scan_spectrum,
)

__all__ = [
    "ExpPoly",
    "SigmaPolynomial",
    "inner_product",
    "l2_norm_sq",
    "ProblemSpec",
    "RootSystem",
    "SolutionBasis",
    "build_operator",
    "root_system",
    "solution_basis",
    "RitzSystem",
    "assemble",
    "ritz_values",
    "EigenPair",
    "SpectrumSlice",
    "antisym_equals_next_sym",
    "det_indicator",
    "extract_eigenfunction",
    "scan_spectrum",
    "__version__",
]
