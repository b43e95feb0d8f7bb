"""
Exception hierarchy for the hypergraph operad engine.

Every error raised on purpose by the package derives from HyperoperadError so
that the command line front end can map failures to exit codes in one place.
"""

from typing import Any, List, Optional


class HyperoperadError(Exception):
    """Base class for all engine errors."""


class GraphValidationError(HyperoperadError):
    """A hypergraph violates the validity rules of its flavor."""

    def __init__(self, violations: List[Any]):
        self.violations = list(violations)
        details = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid hypergraph: {details}")


class GraphParseError(HyperoperadError):
    """Text could not be turned into a hypergraph or formal sum."""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")


class FlavorMismatchError(HyperoperadError):
    """Two operands live in different operads, or an operation does not support a flavor."""


class LabelError(HyperoperadError):
    """A white label or slot index is out of range."""


class SkewSymmetryError(HyperoperadError):
    """An arity-two element expected to be skew under (01) is not."""


class BasisIncompleteError(HyperoperadError):
    """A differential produced a term outside the enumerated target basis."""


class UnboundedPieceError(HyperoperadError):
    """A graded piece was requested that the enumeration bounds cannot cover."""


class InternalConsistencyError(HyperoperadError):
    """A computed result breaks an invariant that holds by construction."""


class CacheError(HyperoperadError):
    """The on-disk cache holds unreadable or inconsistent data."""


class OracleRangeError(HyperoperadError):
    """An oracle was asked for a value outside its supported range."""


class VerificationFailure(HyperoperadError):
    """An identity checked by a verification suite does not hold."""

    def __init__(self, name: str, expected: Any = None, computed: Any = None, detail: str = ""):
        self.name = name
        self.expected = expected
        self.computed = computed
        self.detail = detail
        message = f"verification '{name}' failed"
        if detail:
            message += f": {detail}"
        if expected is not None or computed is not None:
            message += f" (expected {expected}, computed {computed})"
        super().__init__(message)
