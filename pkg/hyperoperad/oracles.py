"""
Independent reference computations.

The BV oracle spans the trees of the free cyclic operad on Com corollas and
the Δ operator, imposes the seven-term BV relation together with all its Δ
decorations and reads graded dimensions off exact ranks. The Lie oracles
count free Lie words (Witt formula, Lyndon words). The Holie oracle
implements vertex splitting on trees with labelled legs and reduces
trivalent trees modulo IHX.
"""

import logging
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import sympy
from pydantic import BaseModel, ConfigDict, Field
from sympy import divisors
from sympy.ntheory import mobius

from .exceptions import LabelError, OracleRangeError
from .formal_sum import FormalSum
from .linalg import rank
from .models import Flavor, SparseMatrix
from .operad import com_corolla, compose_sums, delta_edge, relabel_sum
from .signs import permutation_sign, sort_with_sign


logger = logging.getLogger(__name__)

MAX_BV_ARITY = 4


# BV trees


class BVTree(BaseModel):
    """
    A tree of Com corollas with Δ decorations.

    Trees with two corollas are joined by one Δ-decorated internal edge. The
    Δ symbols are odd and ordered with the internal one first, then the
    decorated legs in ascending order. Arity two holds the unit and Δ itself.
    """

    model_config = ConfigDict(frozen=True)

    arity: int = Field(..., ge=2)
    blocks: Tuple[FrozenSet[int], ...] = Field(default=(), description="Legs of each corolla")
    decorated: FrozenSet[int] = Field(default=frozenset(), description="Legs carrying Δ")

    @property
    def internal(self) -> int:
        return 1 if len(self.blocks) == 2 else 0

    @property
    def degree(self) -> int:
        return -(self.internal + len(self.decorated))

    def sort_key(self):
        return (
            -self.degree,
            len(self.blocks),
            tuple(tuple(sorted(b)) for b in self.blocks),
            tuple(sorted(self.decorated)),
        )

    def __str__(self) -> str:
        if not self.blocks:
            return "Delta" if self.decorated else "unit"
        body = "|".join("".join(str(x) for x in sorted(b)) for b in self.blocks)
        marks = "".join(str(x) for x in sorted(self.decorated))
        return f"T({body}{';' + marks if marks else ''})"


BVVector = Dict[BVTree, Fraction]


def _corolla_tree(arity: int, decorated: Iterable[int] = ()) -> BVTree:
    return BVTree(arity=arity, blocks=(frozenset(range(arity)),), decorated=frozenset(decorated))


def _two_block_tree(left: Iterable[int], right: Iterable[int], decorated: Iterable[int] = ()) -> BVTree:
    a, b = frozenset(left), frozenset(right)
    blocks = tuple(sorted((a, b), key=lambda s: min(s)))
    return BVTree(arity=len(a) + len(b), blocks=blocks, decorated=frozenset(decorated))


def bv_trees(arity: int) -> List[BVTree]:
    """
    All trees spanning the free operad at a cyclic arity.

    Raises:
        OracleRangeError: Above arity four
    """
    if arity < 2 or arity > MAX_BV_ARITY:
        raise OracleRangeError(f"BV trees are enumerated for arities 2..{MAX_BV_ARITY}, not {arity}")
    if arity == 2:
        return [BVTree(arity=2), BVTree(arity=2, decorated=frozenset({0}))]
    legs = range(arity)
    trees = []
    for k in range(arity + 1):
        for marks in combinations(legs, k):
            trees.append(_corolla_tree(arity, marks))
    if arity >= 4:
        seen = set()
        for size in range(2, arity - 1):
            for left in combinations(legs, size):
                right = tuple(x for x in legs if x not in left)
                split = frozenset((frozenset(left), frozenset(right)))
                if split in seen:
                    continue
                seen.add(split)
                for k in range(arity + 1):
                    for marks in combinations(legs, k):
                        trees.append(_two_block_tree(left, right, marks))
    return sorted(trees, key=lambda t: t.sort_key())


def bv_relation(arity: int = 4) -> BVVector:
    """
    The seven-term relation: Δ on each leg of the corolla minus the trees with
    a Δ-decorated internal edge, one for each split of the legs into pairs.
    """
    if arity != 4:
        raise OracleRangeError("the BV relation lives in arity four")
    relation: BVVector = {}
    for leg in range(4):
        relation[_corolla_tree(4, (leg,))] = Fraction(1)
    for partner in (1, 2, 3):
        left = (0, partner)
        right = tuple(x for x in range(4) if x not in left)
        relation[_two_block_tree(left, right)] = Fraction(-1)
    return relation


def _delta_order(tree: BVTree) -> List[Tuple[int, int]]:
    order = [(0, -1)] if tree.internal else []
    return order + [(1, leg) for leg in sorted(tree.decorated)]


def decorate(vector: BVVector, leg: int) -> BVVector:
    """Compose Δ at a leg; a leg that already carries Δ gives zero."""
    result: BVVector = {}
    for tree, coefficient in vector.items():
        if leg in tree.decorated or not tree.blocks:
            continue
        new = tree.model_copy(update={"decorated": tree.decorated | {leg}})
        position = _delta_order(new).index((1, leg))
        sign = -1 if position % 2 else 1
        result[new] = result.get(new, Fraction(0)) + sign * coefficient
    return {t: c for t, c in result.items() if c}


def permute(vector: BVVector, sigma: Sequence[int]) -> BVVector:
    """Relabel legs, sigma[i] being the new label of leg i."""
    result: BVVector = {}
    for tree, coefficient in vector.items():
        blocks = tuple(frozenset(sigma[x] for x in b) for b in tree.blocks)
        if len(blocks) == 2:
            blocks = tuple(sorted(blocks, key=lambda s: min(s)))
        images = [sigma[x] for x in sorted(tree.decorated)]
        _, sign, _ = sort_with_sign(images)
        new = BVTree(arity=tree.arity, blocks=blocks, decorated=frozenset(images))
        result[new] = result.get(new, Fraction(0)) + sign * coefficient
    return {t: c for t, c in result.items() if c}


def bv_ideal(arity: int, redundant: bool = False) -> List[BVVector]:
    """Spanning set of the relation ideal: the relation with every set of extra Δ legs."""
    if arity < 4:
        return []
    base = [bv_relation(arity)]
    if redundant:
        base.extend(permute(base[0], sigma) for sigma in permutations(range(arity)))
    vectors = []
    for relation in base:
        for k in range(arity + 1):
            for legs in combinations(range(arity), k):
                vector = relation
                for leg in reversed(legs):
                    vector = decorate(vector, leg)
                if vector:
                    vectors.append(vector)
    return vectors


def bv_dims(arity: int, redundant: bool = False) -> Dict[int, int]:
    """
    Graded dimensions of the BV operad at a cyclic arity.

    Args:
        arity: Number of legs, 2 to 4
        redundant: Add every relabelled copy of the relation as well

    Returns:
        Degree (0, -1, ...) to dimension
    """
    trees = bv_trees(arity)
    ideal = bv_ideal(arity, redundant)
    dims: Dict[int, int] = {}
    for deg in sorted({t.degree for t in trees}, reverse=True):
        basis = [t for t in trees if t.degree == deg]
        index = {t: k for k, t in enumerate(basis)}
        vectors = [v for v in ideal if next(iter(v)).degree == deg]
        entries = {}
        for col, vector in enumerate(vectors):
            for tree, coefficient in vector.items():
                entries[(index[tree], col)] = coefficient
        matrix = SparseMatrix(rows=len(basis), cols=len(vectors), entries=entries)
        dims[deg] = len(basis) - rank(matrix)
    logger.debug("BV dimensions at arity %d: %s", arity, dims)
    return dims


def bv_poincare(arity: int) -> Dict[int, int]:
    """
    Coefficients of (1+t)^n * prod_{k=1}^{n-1} (1+k t) for n = arity - 1,
    with t^k recorded at degree -k.
    """
    if arity < 2:
        raise OracleRangeError(f"arity {arity} below 2")
    n = arity - 1
    t = sympy.Symbol("t")
    polynomial = (1 + t) ** n
    for k in range(1, n):
        polynomial *= 1 + k * t
    coefficients = sympy.Poly(sympy.expand(polynomial), t).all_coeffs()[::-1]
    return {-k: int(c) for k, c in enumerate(coefficients) if c}


def bv_image(tree: BVTree) -> FormalSum:
    """
    Image of a BV tree in BVHgra: corollas go to graphs without edges and Δ to
    the single edge; Δ legs are composed from the last one in orientation
    order to the first.
    """
    flavor = Flavor.bvhgra()
    delta = FormalSum.of(delta_edge(flavor))
    if not tree.blocks:
        if tree.decorated:
            return delta
        return FormalSum.of(com_corolla(2, flavor))

    if tree.internal:
        left, right = (sorted(b) for b in tree.blocks)
        glue = len(left)
        step = compose_sums(FormalSum.of(com_corolla(len(left) + 1, flavor)), glue, delta, 0)
        step = compose_sums(step, glue, FormalSum.of(com_corolla(len(right) + 1, flavor)), 0)
        order = left + right
        sigma = [0] * tree.arity
        for position, label in enumerate(order):
            sigma[position] = label
        total = relabel_sum(step, sigma)
    else:
        total = FormalSum.of(com_corolla(tree.arity, flavor))

    for leg in reversed(sorted(tree.decorated)):
        total = compose_sums(total, leg, delta, 0)
    return total


def bv_image_of(vector: BVVector) -> FormalSum:
    result = FormalSum()
    for tree, coefficient in vector.items():
        result += bv_image(tree) * coefficient
    return result


# Free Lie algebras


def witt_dim(gens: int, length: int) -> int:
    """
    Dimension of the length-ℓ part of the free Lie algebra on g generators.

    Raises:
        OracleRangeError: If g < 1 or ℓ < 1
    """
    if gens < 1 or length < 1:
        raise OracleRangeError(f"witt_dim needs g >= 1 and length >= 1, got {gens}, {length}")
    total = sum(mobius(d) * gens ** (length // d) for d in divisors(length))
    return int(total) // length


def lyndon_words(gens: int, length: int) -> List[Tuple[int, ...]]:
    """Lyndon words of exactly the given length over letters 0..g-1, in lexicographic order."""
    if gens < 1 or length < 1:
        raise OracleRangeError(f"lyndon_words needs g >= 1 and length >= 1, got {gens}, {length}")
    words = []
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == length:
            words.append(tuple(w))
        m = len(w)
        while len(w) < length:
            w.append(w[len(w) - m])
        while w and w[-1] == gens - 1:
            w.pop()
    return words


def _is_lyndon(word: Tuple[int, ...]) -> bool:
    return all(word < word[k:] + word[:k] for k in range(1, len(word)))


def standard_bracketing(word: Tuple[int, ...]):
    """
    Standard bracketing of a Lyndon word: w = uv with v its longest proper
    Lyndon suffix, bracketed as [bracket(u), bracket(v)].

    Returns:
        A letter for words of length one, otherwise a nested pair
    """
    if not word:
        raise LabelError("empty word")
    if len(word) == 1:
        return word[0]
    if not _is_lyndon(word):
        raise LabelError(f"{word} is not a Lyndon word")
    for k in range(1, len(word)):
        suffix = word[k:]
        if _is_lyndon(suffix):
            return (standard_bracketing(word[:k]), standard_bracketing(suffix))
    raise LabelError(f"no standard factorization of {word}")


def format_bracket(bracket, names: Optional[Sequence[str]] = None) -> str:
    if isinstance(bracket, int):
        return names[bracket] if names else f"x{bracket}"
    left, right = bracket
    return f"[{format_bracket(left, names)},{format_bracket(right, names)}]"


def gr_t_dims(n: int, length: int) -> int:
    """
    Dimension of the length-ℓ part of gr t at arity n+1: the free Lie algebra
    on T_0n..T_{n-1,n} modulo the central sum, i.e. free Lie on n-1 letters
    plus the central line at length one.
    """
    if n < 1 or length < 1:
        raise OracleRangeError(f"gr_t_dims needs n >= 1 and length >= 1, got {n}, {length}")
    free = witt_dim(n - 1, length) if n > 1 else 0
    return free + (1 if length == 1 else 0)


# Holie trees


class HolieTree(BaseModel):
    """
    A tree with labelled legs and internal vertices of valence at least three.

    For even d the internal edges are odd and listed in orientation order; for
    odd d the internal vertices are odd (index order) and each edge is
    directed, reversing it costs a sign.
    """

    model_config = ConfigDict(frozen=True)

    d: int
    legs: int = Field(..., ge=3)
    vertices: int = Field(..., ge=1)
    attach: Tuple[int, ...] = Field(..., description="Vertex of each leg")
    edges: Tuple[Tuple[int, int], ...] = Field(default=())

    def valence(self, v: int) -> int:
        return self.attach.count(v) + sum(1 for e in self.edges for u in e if u == v)

    def key(self):
        return (self.d % 2, self.legs, self.vertices, self.attach, self.edges)


def holie_corolla(legs: int, d: int = 2) -> HolieTree:
    return HolieTree(d=d, legs=legs, vertices=1, attach=(0,) * legs)


def _holie_canonical(tree: HolieTree) -> Optional[Tuple[HolieTree, int]]:
    best = None
    signs = set()
    even = tree.d % 2 == 0
    for perm in permutations(range(tree.vertices)):
        sign = 1
        if not even:
            sign *= permutation_sign(perm)
        attach = tuple(perm[v] for v in tree.attach)
        edges = []
        for u, v in tree.edges:
            a, b = perm[u], perm[v]
            if a > b:
                a, b = b, a
                if not even:
                    sign = -sign
            edges.append((a, b))
        if even:
            edges, s, _ = sort_with_sign(edges)
            sign *= s
        else:
            edges = sorted(edges)
        key = (attach, tuple(edges))
        if best is None or key < best[0]:
            best = (key, sign)
            signs = {sign}
        elif key == best[0]:
            signs.add(sign)
    if len(signs) > 1:
        return None
    (attach, edges), sign = best
    return tree.model_copy(update={"attach": attach, "edges": edges}), sign


HolieSum = Dict[HolieTree, Fraction]


def _add(total: HolieSum, tree: HolieTree, coefficient) -> None:
    form = _holie_canonical(tree)
    if form is None:
        return
    canonical, sign = form
    value = total.get(canonical, Fraction(0)) + sign * Fraction(coefficient)
    if value:
        total[canonical] = value
    else:
        total.pop(canonical, None)


def holie_delta(tree: HolieTree) -> HolieSum:
    """
    Vertex splitting: a vertex of valence at least four becomes two vertices of
    valence at least three joined by a new internal edge.

    For even d the new edge is put first in the edge order. For odd d the
    vertex v is replaced by two new vertices u1 -> u2 put first in the vertex
    order, with the sign -(-1)^p, p the index of v, and each ordered split
    weighted by 1/2.
    """
    result: HolieSum = {}
    even = tree.d % 2 == 0
    for v in range(tree.vertices):
        halves = [("leg", k) for k, x in enumerate(tree.attach) if x == v]
        halves += [("edge", k, end) for k, e in enumerate(tree.edges) for end in (0, 1) if e[end] == v]
        if len(halves) < 4:
            continue
        for size in range(2, len(halves) - 1):
            for chosen in combinations(range(len(halves)), size):
                if even and 0 not in chosen:
                    continue
                left = [halves[k] for k in chosen]
                right = [halves[k] for k in range(len(halves)) if k not in chosen]
                if even:
                    _add(result, _split_even(tree, v, right), 1)
                else:
                    sign = 1 if v % 2 else -1
                    _add(result, _split_odd(tree, v, left, right), Fraction(sign, 2))
    return result


def _split_even(tree: HolieTree, v: int, moved) -> HolieTree:
    new = tree.vertices
    attach = list(tree.attach)
    edges = [list(e) for e in tree.edges]
    for half in moved:
        if half[0] == "leg":
            attach[half[1]] = new
        else:
            edges[half[1]][half[2]] = new
    return tree.model_copy(
        update={
            "vertices": tree.vertices + 1,
            "attach": tuple(attach),
            "edges": ((v, new),) + tuple(tuple(e) for e in edges),
        }
    )


def _split_odd(tree: HolieTree, v: int, left, right) -> HolieTree:
    # new order: u1 = 0, u2 = 1, then the old vertices other than v
    def renumber(x: int) -> int:
        return x + 2 if x < v else x + 1

    attach = [renumber(x) if x != v else None for x in tree.attach]
    edges = [[renumber(x) if x != v else None for x in e] for e in tree.edges]
    for target, halves in ((0, left), (1, right)):
        for half in halves:
            if half[0] == "leg":
                attach[half[1]] = target
            else:
                edges[half[1]][half[2]] = target
    return tree.model_copy(
        update={
            "vertices": tree.vertices + 1,
            "attach": tuple(attach),
            "edges": tuple(tuple(e) for e in edges) + ((0, 1),),
        }
    )


def holie_delta_sum(total: HolieSum) -> HolieSum:
    result: HolieSum = {}
    for tree, coefficient in total.items():
        for term, value in holie_delta(tree).items():
            _add(result, term, coefficient * value)
    return result


def holie_trees(legs: int, internal_edges: Optional[int] = None, d: int = 2) -> List[HolieTree]:
    """Canonical trees with the given number of legs, optionally with a fixed number of internal edges."""
    if legs < 3:
        raise OracleRangeError(f"Holie trees need at least three legs, got {legs}")
    level = {_holie_canonical(holie_corolla(legs, d))[0]}
    found = set(level)
    while level:
        nxt = set()
        for tree in level:
            nxt.update(_all_splits(tree))
        level = nxt - found
        found |= nxt
    trees = sorted(found, key=lambda t: t.key())
    if internal_edges is not None:
        trees = [t for t in trees if len(t.edges) == internal_edges]
    return trees


def _all_splits(tree: HolieTree) -> List[HolieTree]:
    """Every tree one split away, including terms that cancel in the differential."""
    trees = []
    for v in range(tree.vertices):
        halves = [("leg", k) for k, x in enumerate(tree.attach) if x == v]
        halves += [("edge", k, end) for k, e in enumerate(tree.edges) for end in (0, 1) if e[end] == v]
        for size in range(2, len(halves) - 1):
            for chosen in combinations(range(len(halves)), size):
                moved = [halves[k] for k in range(len(halves)) if k not in chosen]
                form = _holie_canonical(_split_even(tree, v, moved))
                if form is not None:
                    trees.append(form[0])
    return trees


def is_trivalent(tree: HolieTree) -> bool:
    return all(tree.valence(v) == 3 for v in range(tree.vertices))


def _ihx_relations(legs: int, d: int) -> Tuple[List[HolieTree], sympy.Matrix]:
    """Trivalent trees and the row-reduced matrix of δ of trees with one 4-valent vertex."""
    trivalent = [t for t in holie_trees(legs, legs - 3, d)]
    index = {t: k for k, t in enumerate(trivalent)}
    rows = []
    for tree in holie_trees(legs, legs - 4, d) if legs >= 4 else []:
        image = holie_delta(tree)
        row = [0] * len(trivalent)
        for term, value in image.items():
            row[index[term]] = sympy.Rational(value.numerator, value.denominator)
        rows.append(row)
    if not rows:
        return trivalent, sympy.zeros(0, len(trivalent))
    reduced, _ = sympy.Matrix(rows).rref()
    return trivalent, reduced


def ihx_reduce(expression: HolieSum) -> HolieSum:
    """
    Normal form of a combination of trivalent trees modulo IHX.

    The IHX relations are the images of trees with one 4-valent vertex; the
    normal form has no component on the pivot trees of their reduced row
    echelon form.
    """
    if not expression:
        return {}
    sample = next(iter(expression))
    trivalent, reduced = _ihx_relations(sample.legs, sample.d)
    index = {t: k for k, t in enumerate(trivalent)}
    vector = [sympy.Integer(0)] * len(trivalent)
    for tree, value in expression.items():
        form = _holie_canonical(tree)
        if form is None:
            continue
        canonical, sign = form
        if canonical not in index:
            raise LabelError(f"{canonical} is not trivalent")
        vector[index[canonical]] += sign * sympy.Rational(value.numerator, value.denominator)
    for r in range(reduced.rows):
        row = list(reduced.row(r))
        pivot = next((k for k, x in enumerate(row) if x != 0), None)
        if pivot is None:
            continue
        factor = vector[pivot]
        if factor != 0:
            vector = [a - factor * b for a, b in zip(vector, row)]
    return {
        trivalent[k]: Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1]))
        for k, x in enumerate(vector)
        if x != 0
    }


def ihx_quotient_dim(legs: int, d: int = 2) -> int:
    """Number of trivalent trees minus the rank of the IHX relations."""
    trivalent, reduced = _ihx_relations(legs, d)
    pivots = sum(1 for r in range(reduced.rows) if any(x != 0 for x in reduced.row(r)))
    return len(trivalent) - pivots


def lie_dim(inputs: int) -> int:
    """(n-1)! for n inputs."""
    return factorial(inputs - 1)
