"""
Exact linear combinations of canonical hypergraphs.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

from .hypergraph import canonical_form
from .models import CanonicalKey, Hypergraph


logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


class FormalSum:
    """
    A finite linear combination of canonical graphs with rational coefficients.

    Zero coefficients are never stored. Graphs added through add_graph are
    canonicalized first, so the same element always lands on the same key.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Dict[CanonicalKey, Scalar]] = None):
        self._terms: Dict[CanonicalKey, Fraction] = {}
        for key, coefficient in (terms or {}).items():
            self.add_term(key, coefficient)

    @classmethod
    def of(cls, *graphs: Hypergraph) -> "FormalSum":
        """Sum of the given graphs, each with coefficient 1."""
        result = cls()
        for g in graphs:
            result.add_graph(g)
        return result

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Scalar, Hypergraph]]) -> "FormalSum":
        result = cls()
        for coefficient, g in pairs:
            result.add_graph(g, coefficient)
        return result

    def add_term(self, key: CanonicalKey, coefficient: Scalar) -> None:
        """Add coefficient times the canonical graph with this key."""
        if not coefficient:
            return
        total = self._terms.get(key, Fraction(0)) + Fraction(coefficient)
        if total:
            self._terms[key] = total
        else:
            del self._terms[key]

    def add_graph(self, g: Hypergraph, coefficient: Scalar = 1) -> None:
        form = canonical_form(g)
        if form is None:
            return
        key, sign = form
        self.add_term(key, sign * Fraction(coefficient))

    def coefficient(self, g: Union[Hypergraph, CanonicalKey]) -> Fraction:
        """Coefficient of a graph, taking its canonical sign into account."""
        if isinstance(g, Hypergraph):
            form = canonical_form(g)
            if form is None:
                return Fraction(0)
            key, sign = form
            return sign * self._terms.get(key, Fraction(0))
        return self._terms.get(g, Fraction(0))

    def keys(self) -> List[CanonicalKey]:
        return sorted(self._terms)

    def items(self) -> List[Tuple[CanonicalKey, Fraction]]:
        return sorted(self._terms.items())

    def graphs(self) -> Iterator[Tuple[Fraction, Hypergraph]]:
        for key, coefficient in self.items():
            yield coefficient, Hypergraph.from_key(key)

    def is_zero(self) -> bool:
        return not self._terms

    def copy(self) -> "FormalSum":
        result = FormalSum()
        result._terms = dict(self._terms)
        return result

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[CanonicalKey]:
        return iter(self.keys())

    def __contains__(self, key: CanonicalKey) -> bool:
        return key in self._terms

    def __add__(self, other: "FormalSum") -> "FormalSum":
        result = self.copy()
        for key, coefficient in other._terms.items():
            result.add_term(key, coefficient)
        return result

    def __iadd__(self, other: "FormalSum") -> "FormalSum":
        for key, coefficient in list(other._terms.items()):
            self.add_term(key, coefficient)
        return self

    def __neg__(self) -> "FormalSum":
        return self * -1

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> "FormalSum":
        result = FormalSum()
        if scalar:
            result._terms = {key: c * Fraction(scalar) for key, c in self._terms.items()}
        return result

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __repr__(self) -> str:
        if not self._terms:
            return "FormalSum(0)"
        parts = [f"{c} * {Hypergraph.from_key(key)}" for key, c in self.items()]
        return "FormalSum(" + " + ".join(parts) + ")"

    def diff(self, other: "FormalSum") -> "FormalSum":
        """Terms that differ between self and other (self - other)."""
        return self - other

    def proportional_to(self, other: "FormalSum") -> Optional[Fraction]:
        """The scalar c with self == c * other, or None if there is none."""
        if other.is_zero():
            return Fraction(1) if self.is_zero() else None
        key = other.keys()[0]
        ratio = self._terms.get(key, Fraction(0)) / other._terms[key]
        return ratio if self == other * ratio else None


def total(sums: Iterable[FormalSum]) -> FormalSum:
    result = FormalSum()
    for s in sums:
        result += s
    return result
