"""
Hyperoperad - hypergraph operads and their graph complexes.

This package provides the HyperoperadEngine class that orchestrates
canonical hypergraphs, operadic compositions, the FBVH differential and its
transpose, exact cohomology of finite graded pieces, and the verification
suites that reproduce the worked examples.
"""

__version__ = "1.0.0"

from .config import EngineSettings, get_settings
from .core import HyperoperadEngine
from .exceptions import HyperoperadError, VerificationFailure
from .formal_sum import FormalSum
from .models import (
    CheckResult,
    ComparisonRow,
    DifferentialPart,
    Flavor,
    GradedBasis,
    GradedDims,
    Hypergraph,
    SparseMatrix,
    black,
    white,
)

__all__ = [
    "HyperoperadEngine",
    "EngineSettings",
    "get_settings",
    "HyperoperadError",
    "VerificationFailure",
    "FormalSum",
    "CheckResult",
    "ComparisonRow",
    "DifferentialPart",
    "Flavor",
    "GradedBasis",
    "GradedDims",
    "Hypergraph",
    "SparseMatrix",
    "black",
    "white",
]
