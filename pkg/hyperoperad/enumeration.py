"""
Enumeration of graded bases.

FBVH and forest pieces are indexed by (arity, weight, degree). Admissibility
bounds every piece: each black vertex has at least three flags or edge ends,
no edge joins two black vertices and every hyperedge has a white flag, so
3V_black <= E + 2V_star. With w = 2V_black - 2V_star - E this gives
V_black <= -w, E + 2V_star <= -3w and w <= 0. The degree 3V_black - 2V_star - E
equals V_black + w, so a piece has a fixed number of black vertices.

The graph complexes Hgraphs, fhGC and GC are enumerated in slices of fixed
black-vertex and hyperedge (or edge) counts, which their differentials shift
by one each.
"""

import logging
from itertools import combinations, combinations_with_replacement, permutations
from math import comb, factorial
from typing import Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from sympy.combinatorics import Permutation

from .exceptions import FlavorMismatchError, UnboundedPieceError
from .hypergraph import canonical_form, degree_from_counts, violations
from .models import (
    CanonicalKey,
    Edge,
    Flavor,
    FlavorKind,
    GradedBasis,
    Hyperedge,
    Hypergraph,
    VertexRef,
    black,
    white,
)


logger = logging.getLogger(__name__)


def fbvh_bounds(weight: int) -> Tuple[int, int, int]:
    """
    Largest black-vertex, edge and hyperedge counts at a weight.

    Raises:
        UnboundedPieceError: For positive weight, where the bound 3V_black <= E + 2V_star
            leaves no admissible graph to enumerate
    """
    if weight > 0:
        raise UnboundedPieceError(
            f"weight {weight} > 0: admissible graphs satisfy 3V_black <= E + 2V_star, hence w <= 0"
        )
    return -weight, -3 * weight, (-3 * weight) // 2


def _vertices(arity: int, blacks: int) -> List[VertexRef]:
    return [white(i) for i in range(arity)] + [black(j) for j in range(blacks)]


def _fbvh_edges(arity: int, blacks: int) -> List[Edge]:
    return [(u, v) for u, v in combinations(_vertices(arity, blacks), 2) if not (u.is_black and v.is_black)]


def _fbvh_hyperedges(arity: int, blacks: int) -> List[Hyperedge]:
    return [t for t in combinations(_vertices(arity, blacks), 3) if any(v.is_white for v in t)]


def _black_valences(blacks: int, edges: Iterable[Edge], hyperedges: Iterable[Hyperedge]) -> List[int]:
    counts = [0] * blacks
    for e in edges:
        for v in e:
            if v.is_black:
                counts[v.index] += 1
    for he in hyperedges:
        for v in he:
            if v.is_black:
                counts[v.index] += 1
    return counts


def _sorted_valences(counts: Sequence[int], min_valence: int) -> bool:
    """Black valences reach the threshold and do not increase with the index."""
    if any(c < min_valence for c in counts):
        return False
    return all(counts[k] >= counts[k + 1] for k in range(len(counts) - 1))


def _edges_can_complete(star_valences: Sequence[int], arity: int, n_edge: int) -> bool:
    """Each black vertex gets at most one edge per white vertex."""
    missing = 0
    for c in star_valences:
        need = max(0, 3 - c)
        if need > arity:
            return False
        missing += need
    return missing <= n_edge


def _collect(
    flavor: Flavor,
    arity: int,
    blacks: int,
    edge_sets: Iterable[Tuple[Edge, ...]],
    hyperedge_sets: Sequence[Tuple[Hyperedge, ...]],
    min_valence: int,
    require_connected: bool = False,
) -> Set[CanonicalKey]:
    found: Set[CanonicalKey] = set()
    for edges in edge_sets:
        for hyperedges in hyperedge_sets:
            if blacks and not _sorted_valences(_black_valences(blacks, edges, hyperedges), min_valence):
                continue
            g = Hypergraph.model_construct(
                flavor=flavor, arity=arity, blacks=blacks, edges=edges, hyperedges=hyperedges
            )
            if violations(g, min_valence=min_valence, require_connected=require_connected):
                continue
            form = canonical_form(g)
            if form is not None:
                found.add(form[0])
    return found


def enumerate_basis(
    flavor: Flavor, arity: int, weight: int, degree_: Optional[int] = None
) -> GradedBasis:
    """
    Canonical admissible FBVH or forest graphs of the given arity, weight and degree.

    Args:
        flavor: fbvh or forest
        arity: Number of white vertices
        weight: 2V_black - 2V_star - E
        degree_: Cohomological degree; None collects every degree into one
            basis whose degree is None

    Returns:
        Basis sorted by canonical key

    Raises:
        FlavorMismatchError: For flavors without a weight grading
        UnboundedPieceError: For positive weight
    """
    if not flavor.is_fbvh_like:
        raise FlavorMismatchError(f"weight-graded enumeration needs fbvh or forest, not {flavor}")
    max_blacks, _, _ = fbvh_bounds(weight)

    if degree_ is None:
        keys: List[CanonicalKey] = []
        for deg in range(weight, 1):
            keys.extend(enumerate_basis(flavor, arity, weight, deg).elements)
        return GradedBasis(flavor=flavor, arity=arity, weight=weight, degree=None, elements=tuple(keys))

    n_black = degree_ - weight
    found: Set[CanonicalKey] = set()
    if 0 <= n_black <= max_blacks:
        edge_pool = _fbvh_edges(arity, n_black)
        star_pool = _fbvh_hyperedges(arity, n_black)
        for n_star in range((-3 * weight) // 2 + 1):
            n_edge = 2 * n_black - 2 * n_star - weight
            if n_edge < 0 or 3 * n_black > n_edge + 2 * n_star:
                continue
            star_sets = [
                stars
                for stars in combinations_with_replacement(star_pool, n_star)
                if _edges_can_complete(_black_valences(n_black, (), stars), arity, n_edge)
            ]
            if star_sets:
                found |= _collect(flavor, arity, n_black, combinations(edge_pool, n_edge), star_sets, 3)

    elements = tuple(sorted(found))
    logger.debug(
        "Enumerated %d %s graphs at arity %d, weight %d, degree %d",
        len(elements), flavor.tag, arity, weight, degree_,
    )
    return GradedBasis(flavor=flavor, arity=arity, weight=weight, degree=degree_, elements=elements)


def piece_degrees(weight: int) -> range:
    """Degrees carrying FBVH graphs of this weight, lowest first."""
    fbvh_bounds(weight)
    return range(weight, 1)


def enumerate_slice(
    flavor: Flavor,
    arity: int,
    blacks: int,
    stars: int,
    min_valence: int = 3,
) -> GradedBasis:
    """
    A slice of a graph complex at fixed black-vertex and hyperedge counts.

    For GC the hyperedge count is read as the number of edges. Hgraphs slices
    keep the white vertices; fhGC and GC slices are connected, all-black graphs.

    Args:
        flavor: hgraphs(d), fhgc(d) or gc(d)
        arity: White vertices (0 for fhgc and gc)
        blacks: Number of black vertices
        stars: Number of hyperedges, or edges for gc
        min_valence: Smallest black valence kept

    Returns:
        Basis sorted by canonical key; degree from the flavor's grading
    """
    kind = flavor.kind
    if kind not in (FlavorKind.HGRAPHS, FlavorKind.FHGC, FlavorKind.GC):
        raise FlavorMismatchError(f"slices are defined for hgraphs, fhgc and gc, not {flavor}")
    if kind is not FlavorKind.HGRAPHS and arity:
        raise FlavorMismatchError(f"{flavor} has no white vertices")

    nodes = _vertices(arity, blacks)
    connected = kind is not FlavorKind.HGRAPHS
    if kind is FlavorKind.GC:
        pool = list(combinations(nodes, 2))
        edge_sets = combinations_with_replacement(pool, stars)
        found = _collect(flavor, 0, blacks, edge_sets, [()], min_valence, require_connected=True)
    else:
        pool = list(combinations(nodes, 3))
        star_sets = list(combinations_with_replacement(pool, stars))
        found = _collect(flavor, arity, blacks, [()], star_sets, min_valence, require_connected=connected)

    elements = tuple(sorted(found))
    if kind is FlavorKind.GC:
        deg = degree_from_counts(flavor, blacks, 0, stars)
    else:
        deg = degree_from_counts(flavor, blacks, stars, 0)
    logger.debug("Enumerated %d %s graphs with %d blacks and %d stars", len(elements), flavor.tag, blacks, stars)
    return GradedBasis(flavor=flavor, arity=arity, degree=deg, elements=elements)


def _signed_orbits(pool: int, size: int, odd: bool) -> int:
    """
    Burnside count of unordered choices of `size` items from `pool`, each
    ordering weighted by the sign of the permutation when the items are odd.
    """
    if size == 0:
        return 1
    total = 0
    for image in permutations(range(size)):
        p = Permutation(list(image), size=size)
        total += (p.signature() if odd else 1) * pool ** p.cycles
    return total // factorial(size)


def black_free_count(flavor: Flavor, arity: int, weight: int) -> int:
    """
    Independent count of the black-free piece: E edges and V_star hyperedges on
    the whites with E + 2V_star = -w, counted up to reordering by Burnside's
    lemma over the symmetric groups. An odd swap of two equal constituents
    kills the graph.
    """
    if not flavor.is_fbvh_like:
        raise FlavorMismatchError(f"black-free counting needs fbvh or forest, not {flavor}")
    fbvh_bounds(weight)
    parity = flavor.parity
    edge_odd = parity.edges_odd
    star_odd = (3 * parity.flags_odd + parity.stars_odd) % 2 == 1
    edge_pool, star_pool = comb(arity, 2), comb(arity, 3)
    count = 0
    for n_star in range(-weight // 2 + 1):
        n_edge = -weight - 2 * n_star
        count += _signed_orbits(edge_pool, n_edge, edge_odd) * _signed_orbits(star_pool, n_star, star_odd)
    return count


def iter_pieces(flavor: Flavor, arity: int, weight_min: int, weight_max: int = 0) -> Iterator[Tuple[int, int]]:
    """(weight, degree) pairs of every piece in a weight window, weights descending."""
    for w in range(min(weight_max, 0), weight_min - 1, -1):
        for deg in piece_degrees(w):
            yield w, deg
