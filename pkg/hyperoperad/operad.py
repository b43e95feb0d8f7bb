"""
Cyclic operadic compositions of hypergraphs.

A composition Γ1 ∘_{i,j} Γ2 erases white vertex i of Γ1 and white vertex j of
Γ2, reattaches every edge end and flag that met i to a vertex of Γ2, and every
one that met j to a vertex of Γ1, summing over all choices. In BVHgra and
fBVHgraphs pairs of edges, one from each side, may in addition be fused into a
new hyperedge whose third flag hangs on any other vertex. Terms are oriented
by the word of Γ1 followed by the word of Γ2, with the new flag and star of
each fused pair appended.

White labels of the result follow the splice order: labels of Γ1 below i keep
their positions, the labels of Γ2 other than j follow in ascending order, and
the remaining labels of Γ1 come last.
"""

import logging
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .exceptions import FlavorMismatchError, LabelError, SkewSymmetryError
from .formal_sum import FormalSum
from .hypergraph import canonical_form, degree, relabel_whites
from .models import (
    CanonicalKey,
    Flavor,
    FlavorKind,
    Hypergraph,
    black,
    white,
)
from .signs import Draft, Node, fresh, is_black_node, reorder_sign


logger = logging.getLogger(__name__)

_FUSING = (FlavorKind.BVHGRA, FlavorKind.FBVH, FlavorKind.FOREST)

Term = Tuple[CanonicalKey, int, int]


def splice_maps(a1: int, i: int, a2: int, j: int) -> Tuple[Dict[int, int], Dict[int, int]]:
    """Positions of the surviving white labels of both operands after ∘_{i,j}."""
    map1 = {l: (l if l < i else l + a2 - 2) for l in range(a1) if l != i}
    map2 = {m: i + (m if m < j else m - 1) for m in range(a2) if m != j}
    return map1, map2


def _check_labels(g1: Hypergraph, i: int, g2: Hypergraph, j: int) -> None:
    if g1.flavor != g2.flavor:
        raise FlavorMismatchError(f"cannot compose {g1.flavor} with {g2.flavor}")
    if not 0 <= i < g1.arity:
        raise LabelError(f"slot {i} out of range for arity {g1.arity}")
    if not 0 <= j < g2.arity:
        raise LabelError(f"slot {j} out of range for arity {g2.arity}")


def _in_ideal(draft: Draft) -> bool:
    """Black-black edges and hyperedges without a white flag span the ideal of fBVHgraphs."""
    if not draft.flavor.is_fbvh_like:
        return False
    if any(is_black_node(u) and is_black_node(v) for _, u, v in draft.edges):
        return True
    return any(all(is_black_node(x) for _, x in flags) for _, flags in draft.hyperedges)


def _fusions(items1, items2) -> Iterator[List[Tuple[tuple, tuple]]]:
    for r in range(min(len(items1), len(items2)) + 1):
        for chosen in combinations(items1, r):
            for partners in permutations(items2, r):
                yield list(zip(chosen, partners))


def _other_end(draft: Draft, item) -> Node:
    _, k, end = item
    _, u, v = draft.edges[k]
    return v if end == 0 else u


def composition_terms(
    g1: Hypergraph,
    i: int,
    g2: Hypergraph,
    j: int,
    map1: Optional[Dict[int, int]] = None,
    map2: Optional[Dict[int, int]] = None,
) -> Iterator[Term]:
    """
    Canonical terms of Γ1 ∘_{i,j} Γ2.

    Args:
        g1, g2: Operands of one flavor
        i, j: Slots to glue
        map1, map2: Result labels of the surviving whites; the splice order by default

    Yields:
        (canonical key, sign, number of fused edge pairs) for every nonzero term
    """
    _check_labels(g1, i, g2, j)
    if map1 is None or map2 is None:
        map1, map2 = splice_maps(g1.arity, i, g2.arity, j)
    arity = g1.arity + g2.arity - 2
    x1, x2 = ("x", 1), ("x", 2)
    wm1: Dict[int, Node] = {l: white(p) for l, p in map1.items()}
    wm1[i] = x1
    wm2: Dict[int, Node] = {m: white(p) for m, p in map2.items()}
    wm2[j] = x2

    d1 = Draft.from_graph(g1, side=1, white_map=wm1, arity=arity)
    d2 = Draft.from_graph(g2, side=2, white_map=wm2, arity=arity)
    source = d1.word() + d2.word()
    base = Draft(
        flavor=g1.flavor,
        arity=arity,
        edges=d1.edges + d2.edges,
        hyperedges=d1.hyperedges + d2.hyperedges,
        blacks=d1.blacks + d2.blacks,
    )
    side1 = [white(p) for _, p in sorted(map1.items())] + d1.blacks
    side2 = [white(p) for _, p in sorted(map2.items())] + d2.blacks
    every = side1 + side2

    items1 = base.items_at(x1)
    items2 = base.items_at(x2)
    fuse = g1.flavor.kind in _FUSING
    edges1 = [it for it in items1 if it[0] == "edge"] if fuse else []
    edges2 = [it for it in items2 if it[0] == "edge"] if fuse else []

    for pairing in _fusions(edges1, edges2):
        fused = {it for pair in pairing for it in pair}
        rest1 = [it for it in items1 if it not in fused]
        rest2 = [it for it in items2 if it not in fused]
        new_tokens = [(fresh("f"), fresh("s")) for _ in pairing]
        extended = source + base.odd([tok for pair in new_tokens for tok in pair])
        ends = [(_other_end(base, a), _other_end(base, b)) for a, b in pairing]
        hang_choices = [[v for v in every if v not in pair_ends] for pair_ends in ends]

        for targets1 in product(side2, repeat=len(rest1)):
            for targets2 in product(side1, repeat=len(rest2)):
                for hangs in product(*hang_choices):
                    draft = base.copy()
                    for item, node in zip(rest1, targets1):
                        draft.attach(item, node)
                    for item, node in zip(rest2, targets2):
                        draft.attach(item, node)
                    dropped = set()
                    for (a, b), (flag, star), (end_a, end_b), hang in zip(
                        pairing, new_tokens, ends, hangs
                    ):
                        token_a = base.edges[a[1]][0]
                        token_b = base.edges[b[1]][0]
                        dropped.update((token_a, token_b))
                        draft.hyperedges.append(
                            (star, [(token_a, end_a), (token_b, end_b), (flag, hang)])
                        )
                    if dropped:
                        draft.edges = [e for e in draft.edges if e[0] not in dropped]
                    if draft.is_degenerate() or _in_ideal(draft):
                        continue
                    form = canonical_form(draft.to_graph())
                    if form is None:
                        continue
                    sign = reorder_sign(extended, draft.word())
                    yield form[0], sign * form[1], len(pairing)


def compose(g1: Hypergraph, i: int, g2: Hypergraph, j: int) -> FormalSum:
    """
    Cyclic composition Γ1 ∘_{i,j} Γ2 in the operad of the operands' flavor.

    Raises:
        FlavorMismatchError: If the operands live in different operads
        LabelError: If a slot is out of range
    """
    result = FormalSum()
    for key, sign, _ in composition_terms(g1, i, g2, j):
        result.add_term(key, sign)
    return result


def _require(g: Hypergraph, kinds, name: str) -> None:
    if g.flavor.kind not in kinds:
        raise FlavorMismatchError(f"{name} does not accept flavor {g.flavor}")


def compose_gra(g1: Hypergraph, i: int, g2: Hypergraph, j: int) -> FormalSum:
    _require(g1, (FlavorKind.GRA_EVEN, FlavorKind.GRA_ODD), "compose_gra")
    return compose(g1, i, g2, j)


def compose_hgra(g1: Hypergraph, i: int, g2: Hypergraph, j: int) -> FormalSum:
    _require(g1, (FlavorKind.HGRA, FlavorKind.HGRAPHS), "compose_hgra")
    return compose(g1, i, g2, j)


def compose_bvh(g1: Hypergraph, i: int, g2: Hypergraph, j: int) -> FormalSum:
    _require(g1, _FUSING, "compose_bvh")
    return compose(g1, i, g2, j)


def compose_sums(s1: FormalSum, i: int, s2: FormalSum, j: int) -> FormalSum:
    """Bilinear extension of compose to formal sums."""
    result = FormalSum()
    for c1, g1 in s1.graphs():
        for c2, g2 in s2.graphs():
            for key, sign, _ in composition_terms(g1, i, g2, j):
                result.add_term(key, c1 * c2 * sign)
    return result


def relabel_sum(total: FormalSum, sigma: Sequence[int]) -> FormalSum:
    """Apply a permutation of the white labels to every term."""
    result = FormalSum()
    for coefficient, g in total.graphs():
        result.add_graph(relabel_whites(g, sigma), coefficient)
    return result


def _black_move_sign(word: List, node: Node, to_front: bool) -> int:
    if node not in word:
        return 1
    position = word.index(node)
    passed = position if to_front else len(word) - position - 1
    return -1 if passed % 2 else 1


def compose_at_black(g1: Hypergraph, v1: int, g2: Hypergraph, v2: int) -> FormalSum:
    """
    Composition of two black-vertex graphs along black vertices v1 and v2.

    The orientations are first written as X' v1 and v2 X''; the glued pair is
    then erased. Flags at v1 move to the other vertices of Γ2 and flags at v2
    to the other vertices of Γ1.
    """
    if g1.flavor != g2.flavor:
        raise FlavorMismatchError(f"cannot compose {g1.flavor} with {g2.flavor}")
    if g1.flavor.has_whites:
        raise FlavorMismatchError(f"black compositions need a black-only flavor, not {g1.flavor}")
    if not 0 <= v1 < g1.blacks or not 0 <= v2 < g2.blacks:
        raise LabelError(f"black vertices {v1}, {v2} out of range")

    d1 = Draft.from_graph(g1, side=1)
    d2 = Draft.from_graph(g2, side=2)
    n1, n2 = d1.blacks[v1], d2.blacks[v2]
    word1, word2 = d1.word(), d2.word()
    sign = _black_move_sign(word1, n1, to_front=False) * _black_move_sign(word2, n2, to_front=True)
    source = [t for t in word1 if t != n1] + [t for t in word2 if t != n2]

    rest1 = [b for b in d1.blacks if b != n1]
    rest2 = [b for b in d2.blacks if b != n2]
    base = Draft(
        flavor=g1.flavor,
        arity=0,
        edges=d1.edges + d2.edges,
        hyperedges=d1.hyperedges + d2.hyperedges,
        blacks=rest1 + rest2,
    )
    items1 = base.items_at(n1)
    items2 = base.items_at(n2)
    result = FormalSum()
    for targets1 in product(rest2, repeat=len(items1)):
        for targets2 in product(rest1, repeat=len(items2)):
            draft = base.copy()
            for item, node in zip(items1, targets1):
                draft.attach(item, node)
            for item, node in zip(items2, targets2):
                draft.attach(item, node)
            if draft.is_degenerate():
                continue
            form = canonical_form(draft.to_graph())
            if form is None:
                continue
            result.add_term(form[0], sign * reorder_sign(source, draft.word()) * form[1])
    return result


def bracket_fhgc(g1: Hypergraph, g2: Hypergraph) -> FormalSum:
    """Sum of the compositions over all pairs of black vertices."""
    result = FormalSum()
    for v1 in range(g1.blacks):
        for v2 in range(g2.blacks):
            result += compose_at_black(g1, v1, g2, v2)
    return result


def bracket_sums(s1: FormalSum, s2: FormalSum) -> FormalSum:
    result = FormalSum()
    for c1, g1 in s1.graphs():
        for c2, g2 in s2.graphs():
            result += bracket_fhgc(g1, g2) * (c1 * c2)
    return result


# Generators


def com_corolla(arity: int, flavor: Optional[Flavor] = None) -> Hypergraph:
    """The Com corolla: the graph with `arity` white vertices and nothing else."""
    return Hypergraph(flavor=flavor or Flavor.fbvh(), arity=arity)


def delta_edge(flavor: Optional[Flavor] = None) -> Hypergraph:
    """Image of the BV operator: a single edge between whites 0 and 1."""
    return Hypergraph(flavor=flavor or Flavor.fbvh(), arity=2, edges=((white(0), white(1)),))


def edge_graph(arity: int, pairs: Sequence[Tuple[int, int]], flavor: Optional[Flavor] = None) -> Hypergraph:
    return Hypergraph(
        flavor=flavor or Flavor.fbvh(),
        arity=arity,
        edges=tuple((white(a), white(b)) for a, b in pairs),
    )


def hyperedge(i: int, j: int, k: int, arity: Optional[int] = None, flavor: Optional[Flavor] = None) -> Hypergraph:
    """A single hyperedge with flags on whites i, j, k in that order."""
    n = max(i, j, k) + 1 if arity is None else arity
    return Hypergraph(
        flavor=flavor or Flavor.fbvh(),
        arity=n,
        hyperedges=((white(i), white(j), white(k)),),
    )


def lie3(d: int) -> Hypergraph:
    """Image of the Lie bracket in Hgra_d: one hyperedge on whites 0, 1, 2."""
    return hyperedge(0, 1, 2, flavor=Flavor.hgra(d))


def gamma_mc(d: int) -> Hypergraph:
    """The Maurer-Cartan element of fhGC_d: one hyperedge on three black vertices."""
    return Hypergraph(
        flavor=Flavor.fhgc(d),
        arity=0,
        blacks=3,
        hyperedges=((black(0), black(1), black(2)),),
    )


def two_edge_black(flavor: Flavor) -> Hypergraph:
    """A black vertex joined by edges to whites 0 and 1."""
    return Hypergraph(
        flavor=flavor,
        arity=2,
        blacks=1,
        edges=((white(0), black(0)), (black(0), white(1))),
    )


def star_black(flavor: Flavor) -> Hypergraph:
    """A hyperedge on whites 0, 1 and one black vertex."""
    return Hypergraph(
        flavor=flavor,
        arity=2,
        blacks=1,
        hyperedges=((white(0), white(1), black(0)),),
    )


def d_hgraphs(d: int) -> FormalSum:
    """The Maurer-Cartan element D of fHgraphs_d."""
    return -FormalSum.of(star_black(Flavor.hgraphs(d)))


def dhat(flavor: Optional[Flavor] = None) -> FormalSum:
    """The Maurer-Cartan element D-hat of fBVHgraphs: the two-edge black vertex minus D's hyperedge."""
    flavor = flavor or Flavor.fbvh()
    return FormalSum.of(two_edge_black(flavor)) - FormalSum.of(star_black(flavor))


# Derivations


def check_skew(total: FormalSum) -> None:
    """Raise SkewSymmetryError unless the arity-two element changes sign under (01)."""
    for _, g in total.graphs():
        if g.arity != 2:
            raise SkewSymmetryError(f"expected an arity-two element, found arity {g.arity}")
    if relabel_sum(total, (1, 0)) != -total:
        raise SkewSymmetryError("element is not skew-symmetric under (01)")


def derivation_sigma(arity: int, i: int) -> Tuple[Dict[int, int], Dict[int, int]]:
    """Label maps for D ∘_{1,i} Γ that return every white to its place in Γ."""
    return {0: i}, {m: m for m in range(arity) if m != i}


def derivation_terms(skew: FormalSum, g: Hypergraph) -> Iterator[Tuple[Hypergraph, Fraction, Term]]:
    """Terms of Σ_i D ∘_{1,i} Γ, tagged with the summand of D that produced them."""
    for coefficient, summand in skew.graphs():
        for i in range(g.arity):
            map1, map2 = derivation_sigma(g.arity, i)
            for term in composition_terms(summand, 1, g, i, map1=map1, map2=map2):
                yield summand, coefficient, term


def derivation_from_skew(skew: FormalSum, g: Hypergraph) -> FormalSum:
    """
    The derivation Γ -> Σ_i D ∘_{1,i} Γ defined by a skew arity-two element.

    Raises:
        SkewSymmetryError: If D is not skew under (01)
    """
    if skew.is_zero():
        return FormalSum()
    check_skew(skew)
    result = FormalSum()
    for _, coefficient, (key, sign, _) in derivation_terms(skew, g):
        result.add_term(key, coefficient * sign)
    return result


# Axioms


def _origins(a1: int, i: int, a2: int, j: int, left: Sequence, right: Sequence) -> List:
    map1, map2 = splice_maps(a1, i, a2, j)
    result = [None] * (a1 + a2 - 2)
    for l, p in map1.items():
        result[p] = left[l]
    for m, p in map2.items():
        result[p] = right[m]
    return result


def _align(total: FormalSum, have: Sequence, want: Sequence) -> FormalSum:
    position = {origin: p for p, origin in enumerate(want)}
    return relabel_sum(total, [position[origin] for origin in have])


def axiom_check_associativity(
    ga: Hypergraph, i: int, gb: Hypergraph, j: int, gc: Hypergraph, k: int, l: int, parallel: bool = False
) -> bool:
    """
    Compare the two ways of composing three graphs.

    Sequential: (a ∘_{i,j} b) ∘_{k',l} c against a ∘_{i,j'} (b ∘_{k,l} c), k a
    slot of b other than j. Parallel: k is a slot of a other than i and
    (a ∘_{i,j} b) ∘_{k',l} c is compared with (-1)^{|b||c|} (a ∘_{k,l} c) ∘_{i',j} b.
    """
    oa = [("a", x) for x in range(ga.arity)]
    ob = [("b", x) for x in range(gb.arity)]
    oc = [("c", x) for x in range(gc.arity)]
    ab = compose(ga, i, gb, j)
    o_ab = _origins(ga.arity, i, gb.arity, j, oa, ob)
    slot = o_ab.index(("a", k) if parallel else ("b", k))
    left = compose_sums(ab, slot, FormalSum.of(gc), l)
    o_left = _origins(len(o_ab), slot, gc.arity, l, o_ab, oc)

    if parallel:
        ac = compose(ga, k, gc, l)
        o_ac = _origins(ga.arity, k, gc.arity, l, oa, oc)
        slot_i = o_ac.index(("a", i))
        right = compose_sums(ac, slot_i, FormalSum.of(gb), j)
        o_right = _origins(len(o_ac), slot_i, gb.arity, j, o_ac, ob)
        if (degree(gb) * degree(gc)) % 2:
            right = -right
    else:
        bc = compose(gb, k, gc, l)
        o_bc = _origins(gb.arity, k, gc.arity, l, ob, oc)
        slot_j = o_bc.index(("b", j))
        right = compose_sums(FormalSum.of(ga), i, bc, slot_j)
        o_right = _origins(ga.arity, i, len(o_bc), slot_j, oa, o_bc)

    equal = left == _align(right, o_right, o_left)
    logger.debug("Associativity check i=%d j=%d k=%d l=%d parallel=%s: %s", i, j, k, l, parallel, equal)
    return equal


def axiom_check_commutativity(ga: Hypergraph, i: int, gb: Hypergraph, j: int) -> bool:
    """a ∘_{i,j} b = (-1)^{|a||b|} b ∘_{j,i} a after matching the white labels."""
    oa = [("a", x) for x in range(ga.arity)]
    ob = [("b", x) for x in range(gb.arity)]
    left = compose(ga, i, gb, j)
    right = compose(gb, j, ga, i)
    if (degree(ga) * degree(gb)) % 2:
        right = -right
    o_left = _origins(ga.arity, i, gb.arity, j, oa, ob)
    o_right = _origins(gb.arity, j, ga.arity, i, ob, oa)
    return left == _align(right, o_right, o_left)
