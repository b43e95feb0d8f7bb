"""
Validation, grading and canonical forms of hypergraphs.

Canonical forms minimise the (edges, hyperedges) key over relabelings of the
black vertices. Candidate relabelings are restricted to orderings compatible
with an iterated colour refinement of the black vertices, which is invariant
under relabeling, so the minimum is still canonical.
"""

import logging
from functools import lru_cache
from itertools import groupby, permutations, product
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .connectivity import internal_genus, is_connected, reachable_whites
from .exceptions import FlavorMismatchError, GraphValidationError, LabelError
from .models import (
    BLACK,
    CanonicalKey,
    Flavor,
    FlavorKind,
    Hypergraph,
    HyperedgeType,
    SignedGraph,
    Violation,
    VertexRef,
    black,
    white,
)
from .signs import permutation_sign, sort_with_sign


logger = logging.getLogger(__name__)

_DEFAULT_MIN_VALENCE = {
    FlavorKind.FBVH: 3,
    FlavorKind.FOREST: 3,
    FlavorKind.HGRAPHS: 3,
    FlavorKind.FHGC: 0,
    FlavorKind.GC: 0,
}


def violations(
    g: Hypergraph, min_valence: Optional[int] = None, require_connected: bool = False
) -> List[Violation]:
    """
    List every validity rule of g's flavor that g breaks.

    Args:
        g: Graph to check
        min_valence: Smallest allowed black valence; defaults to 3 for the
            twisted operads and to 0 for the full graph complexes
        require_connected: Also demand ordinary connectivity (graph complexes)

    Returns:
        Violations, empty when g is valid
    """
    flavor = g.flavor
    found: List[Violation] = []

    for u, v in g.edges:
        if u == v:
            found.append(Violation(clause="tadpole edge", target=f"{u}-{v}"))
    for he in g.hyperedges:
        if len(set(he)) != 3:
            found.append(
                Violation(clause="repeated hyperedge vertex", target=",".join(str(v) for v in he))
            )

    if g.edges and not flavor.allows_edges:
        found.append(Violation(clause="edges not allowed", target=flavor.tag))
    if g.hyperedges and not flavor.allows_hyperedges:
        found.append(Violation(clause="hyperedges not allowed", target=flavor.tag))
    if g.blacks and not flavor.allows_blacks:
        found.append(Violation(clause="black vertices not allowed", target=flavor.tag))
    if g.arity and not flavor.has_whites:
        found.append(Violation(clause="white vertices not allowed", target=flavor.tag))

    if flavor.is_fbvh_like:
        for he in g.hyperedges:
            if not any(v.is_white for v in he):
                found.append(
                    Violation(
                        clause="hyperedge without white flag",
                        target=",".join(str(v) for v in he),
                    )
                )
        for u, v in g.edges:
            if u.is_black and v.is_black:
                found.append(Violation(clause="black-black edge", target=f"{u}-{v}"))

    if flavor.allows_blacks:
        threshold = _DEFAULT_MIN_VALENCE[flavor.kind] if min_valence is None else min_valence
        for b in g.black_vertices:
            valence = g.valence(b)
            if valence < threshold:
                found.append(
                    Violation(
                        clause="black valency < %d" % threshold,
                        target=str(b),
                        message=f"valence {valence}",
                    )
                )
        if flavor.has_whites and g.blacks:
            reach = reachable_whites(g)
            for j in range(g.blacks):
                if len(reach.get(j, ())) < 2:
                    found.append(
                        Violation(clause="black reaches fewer than two whites", target=str(black(j)))
                    )

    if require_connected and not is_connected(g):
        found.append(Violation(clause="not connected", target=flavor.tag))
    return found


def validate(g: Hypergraph, **kwargs) -> None:
    """
    Raise GraphValidationError if g breaks a rule of its flavor.

    Keyword arguments are passed to violations().
    """
    found = violations(g, **kwargs)
    if found:
        raise GraphValidationError(found)


def is_valid(g: Hypergraph, **kwargs) -> bool:
    return not violations(g, **kwargs)


def degree(g: Hypergraph) -> int:
    """Cohomological degree of g in its flavor."""
    return degree_from_counts(g.flavor, g.blacks, g.n_hyperedges, g.n_edges)


def degree_from_counts(flavor: Flavor, n_black: int, n_star: int, n_edge: int) -> int:
    kind = flavor.kind
    d = flavor.d
    if kind in (FlavorKind.GRA_EVEN, FlavorKind.GRA_ODD):
        return (1 - d) * n_edge
    if kind is FlavorKind.HGRA:
        return (1 - d) * n_star
    if kind is FlavorKind.BVHGRA:
        return -n_edge - 2 * n_star
    if kind in (FlavorKind.FBVH, FlavorKind.FOREST):
        return 3 * n_black - 2 * n_star - n_edge
    if kind is FlavorKind.FHGC:
        return d * n_black + (1 - d) * n_star - 2 * d
    if kind is FlavorKind.HGRAPHS:
        return d * n_black + (1 - d) * n_star
    if kind is FlavorKind.GC:
        return d * n_black + (1 - d) * n_edge - d
    raise FlavorMismatchError(f"no degree for flavor {flavor}")


def weight(g: Hypergraph) -> int:
    """Weight 2V_black - 2V_star - E, the grading preserved by the differential."""
    if not g.flavor.is_fbvh_like and g.flavor.kind is not FlavorKind.BVHGRA:
        raise FlavorMismatchError(f"weight is defined for fbvh and forest graphs, not {g.flavor}")
    return 2 * g.blacks - 2 * g.n_hyperedges - g.n_edges


def hyperedge_type(g: Hypergraph, star: int) -> HyperedgeType:
    """Classify a hyperedge by its number of white flags."""
    if not 0 <= star < g.n_hyperedges:
        raise LabelError(f"no hyperedge {star} in a graph with {g.n_hyperedges}")
    whites = sum(1 for v in g.hyperedges[star] if v.is_white)
    if whites == 3:
        return HyperedgeType.TYPE0
    if whites == 1:
        return HyperedgeType.TYPE1
    if whites == 2:
        return HyperedgeType.TYPE2
    raise GraphValidationError(
        [Violation(clause="hyperedge without white flag", target=f"star {star}")]
    )


def _refined_colors(g: Hypergraph) -> List[int]:
    """Relabeling-invariant colour classes of the black vertices."""
    if g.blacks == 0:
        return []
    edge_nbrs: Dict[int, List[VertexRef]] = {j: [] for j in range(g.blacks)}
    directed = g.flavor.parity.edges_directed
    for u, v in g.edges:
        if u.is_black:
            edge_nbrs[u.index].append((v, 0))
        if v.is_black:
            edge_nbrs[v.index].append((u, 1 if directed else 0))
    star_nbrs: Dict[int, List[Tuple[VertexRef, ...]]] = {j: [] for j in range(g.blacks)}
    for he in g.hyperedges:
        for v in he:
            if v.is_black:
                star_nbrs[v.index].append(tuple(x for x in he if x != v))

    colors = [0] * g.blacks

    def describe(v: VertexRef) -> Tuple[int, int]:
        return (1, colors[v.index]) if v.is_black else (2, v.index)

    n_classes = 0
    while True:
        signatures = []
        for j in range(g.blacks):
            edge_part = sorted((describe(v), end) for v, end in edge_nbrs[j])
            star_part = sorted(tuple(sorted(describe(x) for x in others)) for others in star_nbrs[j])
            signatures.append((colors[j], tuple(edge_part), tuple(star_part)))
        ranking = {sig: r for r, sig in enumerate(sorted(set(signatures)))}
        colors = [ranking[sig] for sig in signatures]
        if len(ranking) == n_classes:
            return colors
        n_classes = len(ranking)


def _relabelings(g: Hypergraph):
    """Candidate black relabelings as lists old index -> new index."""
    colors = _refined_colors(g)
    classes: Dict[int, List[int]] = {}
    for j, c in enumerate(colors):
        classes.setdefault(c, []).append(j)
    groups = [classes[c] for c in sorted(classes)]
    for choice in product(*(permutations(group) for group in groups)):
        mapping = [0] * g.blacks
        position = 0
        for ordered in choice:
            for j in ordered:
                mapping[j] = position
                position += 1
        yield mapping


@lru_cache(maxsize=200000)
def _canonical_from_key(key: CanonicalKey) -> Optional[Tuple[CanonicalKey, int]]:
    g = Hypergraph.from_key(key)
    tag, arity, n_blacks, edges, hyperedges = key
    parity = g.flavor.parity

    if g.flavor.kind is FlavorKind.FOREST and internal_genus(g) > 0:
        return None

    if parity.edges_odd:
        plain = [tuple(sorted(e)) for e in edges]
        if len(set(plain)) != len(plain):
            return None

    block_odd = (3 * parity.flags_odd + parity.stars_odd) % 2 == 1
    best = None
    best_signs = set()
    for mapping in _relabelings(g):

        def image(v: VertexRef) -> VertexRef:
            return black(mapping[v.index]) if v.kind == BLACK else v

        sign = 1
        new_edges = []
        for u, v in edges:
            a, b = image(u), image(v)
            if a > b:
                a, b = b, a
                if parity.edges_directed:
                    sign = -sign
            new_edges.append((a, b))
        new_edges, s, _ = sort_with_sign(new_edges)
        if parity.edges_odd:
            sign *= s

        new_hyper = []
        for he in hyperedges:
            flags, s, duplicate = sort_with_sign([image(v) for v in he])
            if duplicate and parity.flags_odd:
                return None
            if parity.flags_odd:
                sign *= s
            new_hyper.append(tuple(flags))
        new_hyper, s, duplicate = sort_with_sign(new_hyper)
        if block_odd:
            if duplicate:
                return None
            sign *= s

        if parity.blacks_odd:
            sign *= permutation_sign(mapping)

        candidate = (tuple(new_edges), tuple(new_hyper))
        if best is None or candidate < best:
            best = candidate
            best_signs = {sign}
        elif candidate == best:
            best_signs.add(sign)

    if len(best_signs) > 1:
        return None
    return (tag, arity, n_blacks, best[0], best[1]), best_signs.pop()


def automorphism_count(g: Hypergraph) -> int:
    """
    Order of the automorphism group of g with the whites fixed: black
    relabelings that preserve the graph, times the permutations of edges or
    hyperedges with the same ends.
    """

    def shape(mapping: List[int]) -> Tuple[tuple, tuple]:
        def image(v: VertexRef) -> VertexRef:
            return black(mapping[v.index]) if v.kind == BLACK else v

        edges = sorted(tuple(sorted((image(u), image(v)))) for u, v in g.edges)
        hyperedges = sorted(tuple(sorted(image(v) for v in he)) for he in g.hyperedges)
        return tuple(edges), tuple(hyperedges)

    shapes = [shape(mapping) for mapping in _relabelings(g)]
    best = min(shapes)
    count = shapes.count(best)
    for constituents in best:
        for _, same in groupby(constituents):
            count *= factorial(len(list(same)))
    return count


def canonical_form(g: Hypergraph) -> Optional[Tuple[CanonicalKey, int]]:
    """
    Canonical key and sign of g, or None if g is zero.

    g equals sign times the graph with the returned key.
    """
    return _canonical_from_key(g.raw_key())


def canonicalize(g: Hypergraph) -> Optional[SignedGraph]:
    """
    Canonical representative of g.

    Returns:
        SignedGraph with g = sign * graph, or None when an automorphism
        reverses the orientation (or, for forest graphs, when g lies in the
        positive-genus ideal)
    """
    form = canonical_form(g)
    if form is None:
        return None
    key, sign = form
    return SignedGraph(graph=Hypergraph.from_key(key), sign=sign)


def relabel_whites(g: Hypergraph, sigma: Sequence[int]) -> Hypergraph:
    """Move white vertex i to sigma[i]; white labels carry no sign."""
    if sorted(sigma) != list(range(g.arity)):
        raise LabelError(f"{list(sigma)} is not a permutation of 0..{g.arity - 1}")

    def image(v: VertexRef) -> VertexRef:
        return white(sigma[v.index]) if v.is_white else v

    return Hypergraph.model_construct(
        flavor=g.flavor,
        arity=g.arity,
        blacks=g.blacks,
        edges=tuple((image(u), image(v)) for u, v in g.edges),
        hyperedges=tuple(tuple(image(v) for v in he) for he in g.hyperedges),
    )


def act_permutation(g: Hypergraph, sigma: Sequence[int]) -> Optional[SignedGraph]:
    """
    Apply a permutation of the white labels and re-canonicalize.

    Args:
        g: Graph
        sigma: sigma[i] is the new label of white vertex i
    """
    return canonicalize(relabel_whites(g, sigma))


def graph_product(g1: Hypergraph, g2: Hypergraph) -> Optional[SignedGraph]:
    """
    Union of two graphs over their shared white vertices.

    The product is oriented by the word of g1 followed by the word of g2.
    """
    if g1.flavor != g2.flavor:
        raise FlavorMismatchError(f"cannot multiply {g1.flavor} by {g2.flavor}")
    if g1.arity != g2.arity:
        raise LabelError(f"arity mismatch {g1.arity} != {g2.arity}")

    def shift(v: VertexRef) -> VertexRef:
        return black(v.index + g1.blacks) if v.is_black else v

    joined = Hypergraph.model_construct(
        flavor=g1.flavor,
        arity=g1.arity,
        blacks=g1.blacks + g2.blacks,
        edges=g1.edges + tuple((shift(u), shift(v)) for u, v in g2.edges),
        hyperedges=g1.hyperedges + tuple(tuple(shift(v) for v in he) for he in g2.hyperedges),
    )
    form = canonical_form(joined)
    if form is None:
        return None
    parity = g1.flavor.parity
    sign = form[1]
    # word1 word2 = E1 H1 B1 E2 H2 B2; the joined graph reads E1 E2 H1 H2 B1 B2
    if parity.edges_odd and parity.blacks_odd and (g1.blacks * g2.n_edges) % 2:
        sign = -sign
    return SignedGraph(graph=Hypergraph.from_key(form[0]), sign=sign)


def same_graph(a: Hypergraph, b: Hypergraph) -> Optional[int]:
    """Relative sign if a and b are the same nonzero element up to sign, else None."""
    fa, fb = canonical_form(a), canonical_form(b)
    if fa is None or fb is None or fa[0] != fb[0]:
        return None
    return fa[1] * fb[1]


def with_flavor(g: Hypergraph, flavor) -> Hypergraph:
    """The same hypergraph read in another flavor; validity is not checked."""
    return Hypergraph.model_construct(
        flavor=flavor,
        arity=g.arity,
        blacks=g.blacks,
        edges=g.edges,
        hyperedges=g.hyperedges,
    )
