"""
The dual cooperad: propagator algebra and its cyclic co-compositions.

Elements are polynomials in the degree 1 symbols theta(i,j) = theta(j,i) and
the degree 2 symbols Theta(i,j,k), totally skew in their indices. A monomial
is stored with its symbols normalised (sorted indices, sign tracked) and its
factors in a fixed order: every theta before every Theta, each group sorted
by indices. The theta are odd, so reordering them costs the parity of the
permutation and a repeated theta is zero.

A monomial pairs with the graph whose edges are its theta factors and whose
hyperedges are its Theta factors, in the listed order.
"""

import logging
import re
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .exceptions import GraphParseError, LabelError
from .formal_sum import FormalSum
from .hypergraph import canonical_form
from .models import Flavor, Hypergraph, white
from .operad import composition_terms, splice_maps


logger = logging.getLogger(__name__)

Label = Union[int, str]
Symbol = Tuple[str, Tuple[Label, ...]]
Factors = Tuple[Symbol, ...]

THETA = "theta"
BIG_THETA = "Theta"
X_LEFT = "x'"
X_RIGHT = "x''"

_RANK = {THETA: 0, BIG_THETA: 1}
_DEGREE = {THETA: 1, BIG_THETA: 2}
_TERM = re.compile(r"^(theta|Theta)\(([^()]*)\)$")


def _label_key(label: Label):
    return (0, label) if isinstance(label, int) else (1, str(label))


def _symbol_key(symbol: Symbol):
    name, labels = symbol
    return (_RANK[name], tuple(_label_key(l) for l in labels))


def symbol_degree(symbol: Symbol) -> int:
    return _DEGREE[symbol[0]]


def degree_of(factors: Factors) -> int:
    return sum(symbol_degree(s) for s in factors)


def _parity_of_sort(keys: Sequence) -> int:
    inversions = sum(1 for a in range(len(keys)) for b in range(a + 1, len(keys)) if keys[a] > keys[b])
    return -1 if inversions % 2 else 1


def normalize_symbol(name: str, labels: Sequence[Label]) -> Optional[Tuple[Symbol, int]]:
    """Sorted-index form of a symbol and the sign picked up; None if it vanishes."""
    if name not in _RANK:
        raise ValueError(f"unknown propagator symbol '{name}'")
    expected = 2 if name == THETA else 3
    if len(labels) != expected:
        raise ValueError(f"{name} takes {expected} indices, got {len(labels)}")
    if len(set(labels)) != len(labels):
        if name == THETA:
            raise LabelError(f"theta needs two distinct indices, got {tuple(labels)}")
        return None
    keys = [_label_key(l) for l in labels]
    ordered = tuple(sorted(labels, key=_label_key))
    sign = 1 if name == THETA else _parity_of_sort(keys)
    return (name, ordered), sign


def normalize(factors: Iterable[Symbol]) -> Optional[Tuple[Factors, int]]:
    """
    Normal form of a product of symbols.

    Returns:
        (factors, sign) with the product equal to sign times the normal form,
        or None if the product is zero
    """
    sign = 1
    normal: List[Symbol] = []
    for name, labels in factors:
        result = normalize_symbol(name, labels)
        if result is None:
            return None
        symbol, s = result
        sign *= s
        normal.append(symbol)
    odd_keys = [_symbol_key(s) for s in normal if s[0] == THETA]
    sign *= _parity_of_sort(odd_keys)
    ordered = tuple(sorted(normal, key=_symbol_key))
    thetas = [s for s in ordered if s[0] == THETA]
    if len(set(thetas)) != len(thetas):
        return None
    return ordered, sign


def _koszul(left: Factors, right: Factors) -> int:
    return -1 if degree_of(left) % 2 and degree_of(right) % 2 else 1


class PropagatorSum:
    """Linear combination of normalised propagator monomials."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Dict[Factors, Fraction]] = None):
        self._terms: Dict[Factors, Fraction] = {}
        for factors, coefficient in (terms or {}).items():
            self.add(factors, coefficient)

    @classmethod
    def one(cls) -> "PropagatorSum":
        return cls({(): Fraction(1)})

    @classmethod
    def monomial(cls, *symbols: Symbol, coefficient=1) -> "PropagatorSum":
        result = cls()
        result.add(symbols, coefficient)
        return result

    def add(self, factors: Iterable[Symbol], coefficient=1) -> None:
        """Add coefficient times the product of the given symbols."""
        if not coefficient:
            return
        normal = normalize(factors)
        if normal is None:
            return
        key, sign = normal
        total = self._terms.get(key, Fraction(0)) + sign * Fraction(coefficient)
        if total:
            self._terms[key] = total
        else:
            self._terms.pop(key, None)

    def items(self) -> List[Tuple[Factors, Fraction]]:
        return sorted(self._terms.items(), key=lambda kv: [_symbol_key(s) for s in kv[0]])

    def coefficient(self, factors: Iterable[Symbol]) -> Fraction:
        normal = normalize(factors)
        if normal is None:
            return Fraction(0)
        key, sign = normal
        return sign * self._terms.get(key, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "PropagatorSum") -> "PropagatorSum":
        result = PropagatorSum(dict(self._terms))
        for key, c in other._terms.items():
            result.add(key, c)
        return result

    def __neg__(self) -> "PropagatorSum":
        return self.scale(-1)

    def __sub__(self, other: "PropagatorSum") -> "PropagatorSum":
        return self + (-other)

    def scale(self, scalar) -> "PropagatorSum":
        return PropagatorSum({key: c * Fraction(scalar) for key, c in self._terms.items()})

    def __mul__(self, other: Union["PropagatorSum", int, Fraction]) -> "PropagatorSum":
        if not isinstance(other, PropagatorSum):
            return self.scale(other)
        result = PropagatorSum()
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                result.add(k1 + k2, c1 * c2)
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, PropagatorSum):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __repr__(self) -> str:
        return f"PropagatorSum({format_sum(self)})"


class TensorExpression:
    """Linear combination of tensor products of normalised monomials."""

    __slots__ = ("_terms",)

    def __init__(self):
        self._terms: Dict[Tuple[Factors, ...], Fraction] = {}

    @classmethod
    def unit(cls, factors: int = 2) -> "TensorExpression":
        result = cls()
        result._terms[((),) * factors] = Fraction(1)
        return result

    @classmethod
    def simple(cls, parts: Sequence[PropagatorSum]) -> "TensorExpression":
        """The tensor product of the given sums."""
        result = cls()
        for combo in product(*(p.items() for p in parts)):
            coefficient = Fraction(1)
            for _, c in combo:
                coefficient *= c
            result.add(tuple(key for key, _ in combo), coefficient)
        return result

    def add(self, parts: Sequence[Iterable[Symbol]], coefficient=1) -> None:
        if not coefficient:
            return
        sign = 1
        keys = []
        for part in parts:
            normal = normalize(part)
            if normal is None:
                return
            keys.append(normal[0])
            sign *= normal[1]
        key = tuple(keys)
        total = self._terms.get(key, Fraction(0)) + sign * Fraction(coefficient)
        if total:
            self._terms[key] = total
        else:
            self._terms.pop(key, None)

    def items(self) -> List[Tuple[Tuple[Factors, ...], Fraction]]:
        return sorted(
            self._terms.items(), key=lambda kv: [[_symbol_key(s) for s in part] for part in kv[0]]
        )

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "TensorExpression") -> "TensorExpression":
        result = TensorExpression()
        result._terms = dict(self._terms)
        for key, c in other._terms.items():
            result.add(key, c)
        return result

    def __mul__(self, other: "TensorExpression") -> "TensorExpression":
        """Product with the Koszul sign for moving right-hand factors past left-hand ones."""
        result = TensorExpression()
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                sign = 1
                for p in range(len(k1)):
                    for q in range(p):
                        sign *= _koszul(k1[p], k2[q])
                result.add(tuple(a + b for a, b in zip(k1, k2)), sign * c1 * c2)
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorExpression):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __repr__(self) -> str:
        parts = []
        for key, c in self.items():
            parts.append(f"{c}*" + " ⊗ ".join(_format_factors(f) or "1" for f in key))
        return "TensorExpression(" + (" + ".join(parts) or "0") + ")"


def theta(i: Label, j: Label) -> PropagatorSum:
    return PropagatorSum.monomial((THETA, (i, j)))


def big_theta(i: Label, j: Label, k: Label) -> PropagatorSum:
    return PropagatorSum.monomial((BIG_THETA, (i, j, k)))


def omega_bar(i: Label, j: Label, k: Label) -> PropagatorSum:
    """The closed 2-form built from theta: θij θjk + θki θij + θjk θki."""
    return theta(i, j) * theta(j, k) + theta(k, i) * theta(i, j) + theta(j, k) * theta(k, i)


def arnold_relation(i: Label, j: Label, k: Label, l: Label) -> PropagatorSum:
    """The twelve-term cyclic Arnold combination Ω̄jkl − Ω̄ikl + Ω̄ijl − Ω̄ijk."""
    return omega_bar(j, k, l) - omega_bar(i, k, l) + omega_bar(i, j, l) - omega_bar(i, j, k)


def _side(label: Label, left: frozenset, right: frozenset) -> int:
    if label in left:
        return 0
    if label in right:
        return 1
    raise LabelError(f"label {label!r} belongs to neither part")


def _symbol_cocomposition(
    symbol: Symbol, left: frozenset, right: frozenset, x1: Label, x2: Label
) -> TensorExpression:
    name, labels = symbol
    sides = [_side(l, left, right) for l in labels]
    result = TensorExpression()
    if all(s == 0 for s in sides):
        result.add(((symbol,), ()))
        return result
    if all(s == 1 for s in sides):
        result.add(((), (symbol,)))
        return result

    if name == THETA:
        i, j = labels if sides[0] == 0 else labels[::-1]
        result.add((((THETA, (i, x1)),), ()))
        result.add(((), ((THETA, (x2, j)),)))
        return result

    # order the indices so that the left-hand ones come first
    order = sorted(range(3), key=lambda p: (sides[p], p))
    sign = _parity_of_sort(order)
    p, q, r = (labels[k] for k in order)
    if sum(1 for s in sides if s == 0) == 2:
        result.add((((BIG_THETA, (p, q, x1)),), ()), sign)
        result.add((((THETA, (p, x1)),), ((THETA, (x2, r)),)), -sign)
        result.add((((THETA, (q, x1)),), ((THETA, (x2, r)),)), sign)
    else:
        result.add(((), ((BIG_THETA, (x2, q, r)),)), sign)
        result.add((((THETA, (p, x1)),), ((THETA, (x2, q)),)), sign)
        result.add((((THETA, (p, x1)),), ((THETA, (x2, r)),)), -sign)
    return result


def cocompose(
    element: PropagatorSum,
    left: Iterable[Label],
    right: Iterable[Label],
    x1: Label = X_LEFT,
    x2: Label = X_RIGHT,
) -> TensorExpression:
    """
    Co-composition for the decomposition of the labels into left and right.

    The left factor lives on left + {x1}, the right factor on {x2} + right.

    Raises:
        LabelError: If a part is empty or the parts overlap
    """
    left, right = frozenset(left), frozenset(right)
    if not left or not right:
        raise LabelError("co-composition needs two non-empty parts")
    if left & right:
        raise LabelError(f"parts overlap in {sorted(left & right, key=_label_key)}")
    total = TensorExpression()
    for factors, coefficient in element.items():
        image = TensorExpression.unit(2)
        for symbol in factors:
            image = image * _symbol_cocomposition(symbol, left, right, x1, x2)
        for key, c in image.items():
            total.add(key, c * coefficient)
    return total


def _apply_at(
    expression: TensorExpression, position: int, split: Callable[[PropagatorSum], TensorExpression]
) -> TensorExpression:
    """Replace tensor factor `position` by its image under split."""
    result = TensorExpression()
    for key, c in expression.items():
        image = split(PropagatorSum({key[position]: Fraction(1)}))
        for inner, c2 in image.items():
            result.add(key[:position] + inner + key[position + 1 :], c * c2)
    return result


def coassoc_check(
    element: PropagatorSum, first: Iterable[Label], second: Iterable[Label], third: Iterable[Label]
) -> bool:
    """
    Compare the two ways of co-composing over a decomposition into three parts.

    The gluing between the first and second parts uses labels a', a''; the
    gluing between the second and third parts uses b', b''.
    """
    first, second, third = frozenset(first), frozenset(second), frozenset(third)
    outer_left = cocompose(element, first | second, third, "b'", "b''")
    left = _apply_at(outer_left, 0, lambda p: cocompose(p, first, second | {"b'"}, "a'", "a''"))
    outer_right = cocompose(element, first, second | third, "a'", "a''")
    right = _apply_at(outer_right, 1, lambda p: cocompose(p, second | {"a''"}, third, "b'", "b''"))
    equal = left == right
    logger.debug("Coassociativity for %s over %s|%s|%s: %s", element, first, second, third, equal)
    return equal


def monomial_graph(factors: Factors, arity: int, flavor: Optional[Flavor] = None) -> Hypergraph:
    """The graph with one edge per theta and one hyperedge per Theta, in factor order."""
    for _, labels in factors:
        for label in labels:
            if not isinstance(label, int) or not 0 <= label < arity:
                raise LabelError(f"label {label!r} out of range for arity {arity}")
    edges = tuple((white(labels[0]), white(labels[1])) for name, labels in factors if name == THETA)
    hyperedges = tuple(tuple(white(i) for i in labels) for name, labels in factors if name == BIG_THETA)
    return Hypergraph.model_construct(
        flavor=flavor or Flavor.bvhgra(), arity=arity, blacks=0, edges=edges, hyperedges=hyperedges
    )


def to_formal_sum(element: PropagatorSum, arity: int, flavor: Optional[Flavor] = None) -> FormalSum:
    """The graph-side element dual to a propagator polynomial."""
    result = FormalSum()
    for factors, coefficient in element.items():
        result.add_graph(monomial_graph(factors, arity, flavor), coefficient)
    return result


def pairing(g: Hypergraph, element: PropagatorSum) -> Fraction:
    """
    Evaluate a propagator polynomial on a black-free graph.

    Raises:
        LabelError: If a label of the polynomial is not a white vertex of g
    """
    if g.blacks:
        raise LabelError("only black-free graphs pair with propagator monomials")
    form = canonical_form(g)
    if form is None:
        return Fraction(0)
    key, sign = form
    total = Fraction(0)
    for factors, coefficient in element.items():
        other = canonical_form(monomial_graph(factors, g.arity, g.flavor))
        if other is not None and other[0] == key:
            total += coefficient * sign * other[1]
    return total


def pair_tensor(graphs: Sequence[Hypergraph], expression: TensorExpression) -> Fraction:
    """Factorwise pairing of a tensor product of graphs with a tensor expression."""
    total = Fraction(0)
    for key, coefficient in expression.items():
        value = coefficient
        for g, factors in zip(graphs, key):
            value *= pairing(g, PropagatorSum({factors: Fraction(1)}))
            if not value:
                break
        total += value
    return total


def relabel(element: PropagatorSum, mapping: Dict[Label, Label]) -> PropagatorSum:
    result = PropagatorSum()
    for factors, coefficient in element.items():
        result.add(
            [(name, tuple(mapping.get(l, l) for l in labels)) for name, labels in factors], coefficient
        )
    return result


def duality_sides(
    g1: Hypergraph, i: int, g2: Hypergraph, j: int, element: PropagatorSum
) -> Tuple[Fraction, Fraction]:
    """
    Both sides of the duality between composition and co-composition.

    Returns:
        (⟨Γ1 ∘_{i,j} Γ2, m⟩, ⟨Γ1 ⊗ Γ2, Δ(m)⟩) with the co-composition taken
        along the splice of the two operands
    """
    left_side = Fraction(0)
    for key, sign, _ in composition_terms(g1, i, g2, j):
        left_side += sign * pairing(Hypergraph.from_key(key), element)

    map1, map2 = splice_maps(g1.arity, i, g2.arity, j)
    expression = cocompose(element, map1.values(), map2.values())
    back1: Dict[Label, Label] = {p: l for l, p in map1.items()}
    back1[X_LEFT] = i
    back2: Dict[Label, Label] = {p: m for m, p in map2.items()}
    back2[X_RIGHT] = j

    right_side = Fraction(0)
    for (lf, rf), coefficient in expression.items():
        left = relabel(PropagatorSum({lf: Fraction(1)}), back1)
        right = relabel(PropagatorSum({rf: Fraction(1)}), back2)
        right_side += coefficient * pairing(g1, left) * pairing(g2, right)
    return left_side, right_side


def _format_factors(factors: Factors) -> str:
    return "*".join(f"{name}({','.join(str(l) for l in labels)})" for name, labels in factors)


def format_sum(element: PropagatorSum) -> str:
    """Text form: one signed term per monomial, e.g. "1*theta(0,1)*Theta(0,2,3) - 2*theta(1,2)"."""
    parts = []
    for factors, coefficient in element.items():
        body = _format_factors(factors) or "1"
        sign = "-" if coefficient < 0 else "+"
        parts.append(f"{sign} {abs(coefficient)}*{body}")
    if not parts:
        return "0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _parse_label(text: str) -> Label:
    text = text.strip()
    return int(text) if text.lstrip("-").isdigit() else text


def parse_sum(text: str) -> PropagatorSum:
    """Inverse of format_sum; terms are separated by + or - surrounded by spaces."""
    result = PropagatorSum()
    body = text.strip()
    if body in ("", "0"):
        return result
    tokens = re.split(r"\s+([+-])\s+", body)
    signs = ["+"] + tokens[1::2]
    for sign, term in zip(signs, tokens[0::2]):
        term = term.strip()
        negative = sign == "-"
        if term.startswith("-"):
            negative = not negative
            term = term[1:]
        pieces = term.split("*")
        try:
            coefficient = Fraction(pieces[0])
            pieces = pieces[1:]
        except ValueError:
            coefficient = Fraction(1)
        symbols = []
        for piece in pieces:
            if piece == "1":
                continue
            match = _TERM.match(piece.strip())
            if not match:
                raise GraphParseError(f"malformed propagator '{piece}'", field="monomial")
            labels = tuple(_parse_label(t) for t in match.group(2).split(","))
            symbols.append((match.group(1), labels))
        result.add(symbols, -coefficient if negative else coefficient)
    return result
