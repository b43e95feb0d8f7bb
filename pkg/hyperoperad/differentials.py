"""
Differentials on the operad side and their transposes on the dual side.

Every differential adds one black vertex. The black split replaces a black
vertex v by two new black vertices u1, u2 joined by a new hyperedge whose
third flag hangs on another vertex; the flags and edge ends of v are shared
out between u1 and u2 in all ways, each ordered split weighted by 1/2. The
term is oriented by the word (u1 u2 f1 f2 f3 s) followed by the word of the
graph with v removed, times -(-1)^p with p the number of odd constituents
in front of v. The twisted differentials add the derivation of a
Maurer-Cartan element.

The dual differential collapses one black vertex: across a hyperedge on two
blacks, onto a white across their hyperedge, along an edge after erasing a
sibling edge, or along an edge after turning a hyperedge back into an edge.
Each collapse rebuilds the term of δC it undoes to read off its sign, and
the sum is weighted by |Aut C| / |Aut Γ|, which makes d the transpose of δ in
the graph basis.
"""

import logging
from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .cooperad import arnold_relation, to_formal_sum
from .exceptions import (
    FlavorMismatchError,
    InternalConsistencyError,
    LabelError,
    VerificationFailure,
)
from .formal_sum import FormalSum
from .hypergraph import automorphism_count, canonical_form, validate, violations, with_flavor
from .models import (
    DUAL_PARTS,
    OPERAD_PARTS,
    CanonicalKey,
    DifferentialPart,
    Flavor,
    FlavorKind,
    Hypergraph,
    VertexRef,
    black,
    white,
)
from .operad import compose_sums, d_hgraphs, derivation_terms, dhat, star_black, two_edge_black
from .signs import Draft, Node, fresh, ordered_splits, reorder_sign


logger = logging.getLogger(__name__)

_HALF = Fraction(1, 2)


def _hang_targets(draft: Draft, flavor: Flavor) -> List:
    """Vertices that may carry the third flag of the hyperedge created by a split."""
    if flavor.is_fbvh_like:
        return [white(i) for i in range(draft.arity)]
    return draft.nodes()


def black_split(g: Hypergraph) -> FormalSum:
    """
    The black-vertex splitting part of the differential.

    For FBVH and its forest quotient the hanging flag lands on a white vertex
    (a hyperedge needs a white flag); for Hgraphs on any other vertex; for
    fhGC on any other black vertex.
    """
    flavor = g.flavor
    if not flavor.allows_blacks or not flavor.allows_hyperedges:
        raise FlavorMismatchError(f"no black split in flavor {flavor}")

    result = FormalSum()
    base = Draft.from_graph(g)
    for v in list(base.blacks):
        reduced = base.copy()
        items = reduced.items_at(v)
        position = reduced.remove_black(v)
        sign = 1 if position % 2 else -1
        u1, u2 = fresh("b"), fresh("b")
        f1, f2, f3, star = fresh("f"), fresh("f"), fresh("f"), fresh("s")
        source = reduced.odd([u1, u2, f1, f2, f3, star]) + reduced.word()
        targets = _hang_targets(reduced, flavor)

        for left, right in ordered_splits(items):
            for hang in targets:
                draft = reduced.copy()
                draft.blacks.extend([u1, u2])
                for item in left:
                    draft.attach(item, u1)
                for item in right:
                    draft.attach(item, u2)
                draft.hyperedges.append((star, [(f1, u1), (f2, u2), (f3, hang)]))
                if draft.is_degenerate():
                    continue
                form = canonical_form(draft.to_graph())
                if form is None:
                    continue
                coefficient = _HALF * sign * reorder_sign(source, draft.word()) * form[1]
                result.add_term(form[0], coefficient)
    return result


def _classify(summand: Hypergraph, fused: int) -> DifferentialPart:
    if summand.n_hyperedges:
        return DifferentialPart.WHITE_STAR_SPLIT
    if fused:
        return DifferentialPart.WHITE_ONE_EDGE
    return DifferentialPart.WHITE_TWO_EDGE


def white_parts(g: Hypergraph) -> Dict[DifferentialPart, FormalSum]:
    """The three white-vertex parts of δ on FBVH, i.e. the derivation of D-hat split by origin."""
    parts = {
        DifferentialPart.WHITE_STAR_SPLIT: FormalSum(),
        DifferentialPart.WHITE_ONE_EDGE: FormalSum(),
        DifferentialPart.WHITE_TWO_EDGE: FormalSum(),
    }
    for summand, coefficient, (key, sign, fused) in derivation_terms(dhat(g.flavor), g):
        parts[_classify(summand, fused)].add_term(key, coefficient * sign)
    return parts


def _require_fbvh(g: Hypergraph) -> None:
    if not g.flavor.is_fbvh_like:
        raise FlavorMismatchError(f"expected an fbvh or forest graph, got {g.flavor}")


def delta_fbvh_part(g: Hypergraph, part: DifferentialPart) -> FormalSum:
    """One of the four parts of the full differential on FBVH."""
    _require_fbvh(g)
    if part is DifferentialPart.BLACK_SPLIT:
        return black_split(g)
    if part not in OPERAD_PARTS:
        raise ValueError(f"{part.value} is not a part of the operad-side differential")
    return white_parts(g)[part]


def delta_fbvh(g: Hypergraph, check: bool = True) -> FormalSum:
    """
    Full differential δ = δ_• + δ_* + δ^(1) + δ^(2) on FBVH or its forest quotient.

    Raises:
        GraphValidationError: If g is not admissible
        InternalConsistencyError: If a surviving term is not admissible
    """
    _require_fbvh(g)
    if check:
        validate(g)
    result = black_split(g)
    for part in white_parts(g).values():
        result += part
    if check:
        for _, term in result.graphs():
            found = violations(term)
            if found:
                raise InternalConsistencyError(
                    f"inadmissible term {term} in δ{g}: " + "; ".join(str(v) for v in found)
                )
    return result


def delta_hgraphs(g: Hypergraph) -> FormalSum:
    """Twisted differential ∂Γ = δ_•Γ + Σ_i D ∘_{1,i} Γ on Hgraphs(d), D = -W."""
    if g.flavor.kind is not FlavorKind.HGRAPHS:
        raise FlavorMismatchError(f"expected an hgraphs graph, got {g.flavor}")
    result = black_split(g)
    for _, coefficient, (key, sign, _) in derivation_terms(d_hgraphs(g.flavor.d), g):
        result.add_term(key, coefficient * sign)
    return result


def delta_fhgc(g: Hypergraph) -> FormalSum:
    """δΓ on fhGC(d): the black split with the hanging flag on another black vertex."""
    if g.flavor.kind is not FlavorKind.FHGC:
        raise FlavorMismatchError(f"expected an fhgc graph, got {g.flavor}")
    return black_split(g)


def delta_gc(g: Hypergraph) -> FormalSum:
    """
    Vertex splitting on GC(d): v becomes u1 -> u2, each keeping at least one old edge.
    """
    if g.flavor.kind is not FlavorKind.GC:
        raise FlavorMismatchError(f"expected a gc graph, got {g.flavor}")
    result = FormalSum()
    base = Draft.from_graph(g)
    for v in list(base.blacks):
        reduced = base.copy()
        items = reduced.items_at(v)
        position = reduced.remove_black(v)
        sign = 1 if position % 2 else -1
        u1, u2, edge = fresh("b"), fresh("b"), fresh("e")
        source = reduced.odd([u1, u2, edge]) + reduced.word()
        for left, right in ordered_splits(items):
            if not left or not right:
                continue
            draft = reduced.copy()
            draft.blacks.extend([u1, u2])
            for item in left:
                draft.attach(item, u1)
            for item in right:
                draft.attach(item, u2)
            draft.edges.append((edge, u1, u2))
            if draft.is_degenerate():
                continue
            form = canonical_form(draft.to_graph())
            if form is None:
                continue
            result.add_term(form[0], _HALF * sign * reorder_sign(source, draft.word()) * form[1])
    return result


def map_h(g: Hypergraph) -> FormalSum:
    """
    The map GC(d) -> fhGC(d): every directed edge a -> b becomes the hyperedge
    (a, b, c) with a hanging flag on any third vertex c; graphs with a black
    vertex of valence below three are dropped.
    """
    if g.flavor.kind is not FlavorKind.GC:
        raise FlavorMismatchError(f"expected a gc graph, got {g.flavor}")
    flavor = Flavor.fhgc(g.flavor.d)
    choices = [[black(c) for c in range(g.blacks) if black(c) not in (a, b)] for a, b in g.edges]
    result = FormalSum()
    for hangs in product(*choices):
        h = Hypergraph.model_construct(
            flavor=flavor,
            arity=0,
            blacks=g.blacks,
            edges=(),
            hyperedges=tuple((a, b, c) for (a, b), c in zip(g.edges, hangs)),
        )
        if violations(h, min_valence=3):
            continue
        result.add_graph(h)
    return result


def maurer_cartan_defect(flavor: Flavor) -> FormalSum:
    """δ_•D + D ∘_{1,0} D for the Maurer-Cartan element of the flavor; zero when D is Maurer-Cartan."""
    if flavor.kind is FlavorKind.HGRAPHS:
        element = d_hgraphs(flavor.d)
    elif flavor.is_fbvh_like:
        element = dhat(flavor)
    else:
        raise FlavorMismatchError(f"no Maurer-Cartan element for flavor {flavor}")
    result = FormalSum()
    for coefficient, g in element.graphs():
        result += black_split(g) * coefficient
    return result + compose_sums(element, 1, element, 0)


def differential(g: Hypergraph, part: Optional[DifferentialPart] = None) -> FormalSum:
    """The differential of g's flavor, or one named part of it."""
    kind = g.flavor.kind
    if part is not None:
        if part in DUAL_PARTS:
            return dual_d_part(g, part)
        return delta_fbvh_part(g, part)
    if g.flavor.is_fbvh_like:
        return delta_fbvh(g)
    if kind is FlavorKind.BVHGRA:
        return delta_fbvh(with_flavor(g, Flavor.fbvh()))
    if kind is FlavorKind.HGRAPHS:
        return delta_hgraphs(g)
    if kind is FlavorKind.FHGC:
        return delta_fhgc(g)
    if kind is FlavorKind.GC:
        return delta_gc(g)
    return FormalSum()


# Dual side

_X1, _X2 = ("x", 1), ("x", 2)


class _Collapse(NamedTuple):
    """A graph C with one black vertex less, read off g, and where g's constituents sit in C."""

    graph: Hypergraph
    moved: FrozenSet[Tuple[str, int, int]]
    blacks: Dict[int, int]


def _collapse(
    g: Hypergraph,
    q: VertexRef,
    target: VertexRef,
    drop_edges: Sequence[int] = (),
    drop_hyperedge: Optional[int] = None,
    add_edge: Optional[Tuple[VertexRef, VertexRef]] = None,
) -> Optional[_Collapse]:
    """
    Remove the listed constituents of g and glue black q onto target.

    The added edge goes last. Items of C at target that sat at q in g are
    listed in `moved`; `blacks` maps the surviving black indices of g to C.
    """
    survivors = [j for j in range(g.blacks) if j != q.index]
    renumber = {j: n for n, j in enumerate(survivors)}

    def image(v: VertexRef) -> VertexRef:
        if v == q:
            return target
        return black(renumber[v.index]) if v.is_black else v

    edges, moved = [], set()
    for k, (a, b) in enumerate(g.edges):
        if k in drop_edges:
            continue
        for end, v in enumerate((a, b)):
            if v == q:
                moved.add(("edge", len(edges), end))
        edges.append((image(a), image(b)))
    if add_edge is not None:
        edges.append(tuple(image(v) for v in add_edge))
    hyperedges = []
    for h, he in enumerate(g.hyperedges):
        if h == drop_hyperedge:
            continue
        for p, v in enumerate(he):
            if v == q:
                moved.add(("flag", len(hyperedges), p))
        hyperedges.append(tuple(image(v) for v in he))
    if any(a == b for a, b in edges) or any(len(set(he)) != 3 for he in hyperedges):
        return None
    graph = Hypergraph.model_construct(
        flavor=g.flavor,
        arity=g.arity,
        blacks=len(survivors),
        edges=tuple(edges),
        hyperedges=tuple(hyperedges),
    )
    return _Collapse(graph=graph, moved=frozenset(moved), blacks=renumber)


def _unsplit(g: Hypergraph) -> Iterator[Tuple[Hypergraph, Fraction, CanonicalKey]]:
    """
    d_••: erase the white flag of a hyperedge on two blacks and merge them.

    Each ordered pair of blacks is one ordered split of the merged vertex.
    """
    for h, he in enumerate(g.hyperedges):
        blacks_ = [v for v in he if v.is_black]
        whites_ = [v for v in he if v.is_white]
        if len(blacks_) != 2 or len(whites_) != 1:
            continue
        for q1, q2 in (blacks_, blacks_[::-1]):
            survivors = [j for j in range(g.blacks) if black(j) not in (q1, q2)]
            renumber = {j: n for n, j in enumerate(survivors)}
            merged = black(len(survivors))

            def image(v: VertexRef) -> VertexRef:
                if v in (q1, q2):
                    return merged
                return black(renumber[v.index]) if v.is_black else v

            edges = tuple((image(a), image(b)) for a, b in g.edges)
            hyperedges = tuple(tuple(image(v) for v in he2) for k, he2 in enumerate(g.hyperedges) if k != h)
            if any(a == b for a, b in edges) or any(len(set(he2)) != 3 for he2 in hyperedges):
                continue
            c = Hypergraph.model_construct(
                flavor=g.flavor, arity=g.arity, blacks=len(survivors) + 1, edges=edges, hyperedges=hyperedges
            )

            def origin(item) -> VertexRef:
                kind, a, b = item
                if kind == "edge":
                    return g.edges[a][b]
                return g.hyperedges[a if a < h else a + 1][b]

            base = Draft.from_graph(c)
            v = base.blacks[-1]
            reduced = base.copy()
            items = reduced.items_at(v)
            position = reduced.remove_black(v)
            sign = 1 if position % 2 else -1
            u1, u2 = fresh("b"), fresh("b")
            f1, f2, f3, star = fresh("f"), fresh("f"), fresh("f"), fresh("s")
            source = reduced.odd([u1, u2, f1, f2, f3, star]) + reduced.word()
            draft = reduced.copy()
            draft.blacks.extend([u1, u2])
            for item in items:
                draft.attach(item, u1 if origin(item) == q1 else u2)
            draft.hyperedges.append((star, [(f1, u1), (f2, u2), (f3, whites_[0])]))
            form = canonical_form(draft.to_graph())
            if form is None:
                continue
            yield c, _HALF * sign * reorder_sign(source, draft.word()) * form[1], form[0]


def _regraft(
    collapse: _Collapse,
    i: int,
    summand: Hypergraph,
    coefficient: int,
    outer: VertexRef,
    fused: bool = False,
    hang: Optional[VertexRef] = None,
) -> Optional[Tuple[Hypergraph, Fraction, CanonicalKey]]:
    """
    Rebuild the term of D-hat ∘ C at white i that the collapse undid.

    The summand's free flag or edge end goes to `outer`; with `fused` it
    instead joins the last edge of C into a hyperedge hanging on `hang`.
    """
    c = collapse.graph
    d1 = Draft.from_graph(summand, side=1, white_map={0: white(i), 1: _X1}, arity=c.arity)
    white_map: Dict[int, Node] = {m: white(m) for m in range(c.arity)}
    white_map[i] = _X2
    d2 = Draft.from_graph(c, side=2, white_map=white_map, arity=c.arity)
    new_black = d1.blacks[0]

    def node(v: VertexRef) -> Node:
        return d2.blacks[v.index] if v.is_black else v

    source = d1.word() + d2.word()
    draft = Draft(
        flavor=c.flavor,
        arity=c.arity,
        edges=d1.edges + d2.edges,
        hyperedges=d1.hyperedges + d2.hyperedges,
        blacks=d1.blacks + d2.blacks,
    )
    shift = {"edge": len(d1.edges), "flag": len(d1.hyperedges)}
    moved = {(kind, a + shift[kind], b) for kind, a, b in collapse.moved}
    (free,) = draft.items_at(_X1)
    fused_item = ("edge", len(draft.edges) - 1, 0) if fused else None
    for item in draft.items_at(_X2):
        if item != fused_item:
            draft.attach(item, new_black if item in moved else white(i))

    extended = source
    if fused:
        flag, star = fresh("f"), fresh("s")
        extended = source + draft.odd([flag, star])
        token_a, _, _ = draft.edges[free[1]]
        token_b, _, far = draft.edges[fused_item[1]]
        draft.edges = [e for e in draft.edges if e[0] not in (token_a, token_b)]
        draft.hyperedges.append((star, [(token_a, new_black), (token_b, far), (flag, node(hang))]))
    else:
        draft.attach(free, node(outer))
    form = canonical_form(draft.to_graph())
    if form is None:
        return None
    return c, coefficient * reorder_sign(extended, draft.word()) * form[1], form[0]


def _white_black_edges(g: Hypergraph) -> Iterator[Tuple[int, VertexRef, VertexRef]]:
    for k, (a, b) in enumerate(g.edges):
        if a.is_white and b.is_black:
            yield k, a, b
        elif b.is_white and a.is_black:
            yield k, b, a


def _collapses(g: Hypergraph, part: DifferentialPart) -> Iterator[Optional[Tuple[Hypergraph, Fraction, CanonicalKey]]]:
    """Every way to undo one part of δ on g, with the signed term it reproduces."""
    if part is DifferentialPart.DBB:
        yield from _unsplit(g)
        return
    star_summand, edge_summand = star_black(g.flavor), two_edge_black(g.flavor)
    if part is DifferentialPart.DBW:
        # collapse a black onto a white across their hyperedge
        for h, he in enumerate(g.hyperedges):
            for w in (v for v in he if v.is_white):
                for q in (v for v in he if v.is_black):
                    (outer,) = [v for v in he if v not in (w, q)]
                    collapse = _collapse(g, q, w, drop_hyperedge=h)
                    if collapse is not None:
                        yield _regraft(collapse, w.index, star_summand, -1, _renamed(outer, collapse))
    elif part is DifferentialPart.D1:
        # turn the hyperedge at the black back into an edge, then collapse
        for k, w, q in _white_black_edges(g):
            for h, he in enumerate(g.hyperedges):
                if q not in he:
                    continue
                rest = [v for v in he if v != q]
                for y, hang in (rest, rest[::-1]):
                    if y == w:
                        continue
                    collapse = _collapse(g, q, w, drop_edges=(k,), drop_hyperedge=h, add_edge=(w, y))
                    if collapse is not None:
                        yield _regraft(
                            collapse, w.index, edge_summand, 1, w, fused=True, hang=_renamed(hang, collapse, q, w)
                        )
    elif part is DifferentialPart.D2:
        # erase a sibling edge of the black, then collapse along the other one
        for k, w, q in _white_black_edges(g):
            for k2, (a, b) in enumerate(g.edges):
                if k2 == k or q not in (a, b):
                    continue
                outer = b if a == q else a
                if outer.is_black or outer == w:
                    continue
                collapse = _collapse(g, q, w, drop_edges=(k, k2))
                if collapse is not None:
                    yield _regraft(collapse, w.index, edge_summand, 1, outer)


def _renamed(v: VertexRef, collapse: _Collapse, q: Optional[VertexRef] = None, w: Optional[VertexRef] = None) -> VertexRef:
    """Where a vertex of g sits in the collapsed graph; q itself becomes w."""
    if q is not None and v == q:
        return w
    return black(collapse.blacks[v.index]) if v.is_black else v


def dual_d_part(g: Hypergraph, part: DifferentialPart) -> FormalSum:
    """
    One part of the dual differential: d_••, d_•∘, d^(1) or d^(2).

    Every collapse of g gives a graph C and the term of δC it came from;
    the coefficient of C is the signed sum of those terms scaled by
    |Aut C| / |Aut g|.

    Args:
        g: Admissible FBVH or forest graph read as a dual basis element
        part: DBB, DBW, D1 or D2

    Raises:
        InternalConsistencyError: If a collapse does not reproduce g
    """
    _require_fbvh(g)
    if part not in DUAL_PARTS:
        raise ValueError(f"{part.value} is not a part of the dual differential")
    result = FormalSum()
    form = canonical_form(g)
    if form is None or not g.blacks:
        return result
    key, g_sign = form
    canonical = Hypergraph.from_key(key)
    totals: Dict[CanonicalKey, Fraction] = {}
    for found in _collapses(canonical, part):
        if found is None:
            continue
        c, value, produced = found
        if produced != key:
            raise InternalConsistencyError(f"collapse of {canonical} to {c} reproduces {produced}")
        c_form = canonical_form(c)
        if c_form is None or violations(Hypergraph.from_key(c_form[0])):
            continue
        totals[c_form[0]] = totals.get(c_form[0], Fraction(0)) + value * c_form[1]
    g_automorphisms = automorphism_count(canonical)
    for c_key, value in totals.items():
        scale = Fraction(automorphism_count(Hypergraph.from_key(c_key)), g_automorphisms)
        result.add_term(c_key, g_sign * value * scale)
    logger.debug("Dual %s of %s has %d terms", part.value, key, len(result))
    return result


def dual_d(g: Hypergraph) -> FormalSum:
    """Dual differential d = d_•• + d_•∘ + d^(1) + d^(2)."""
    result = FormalSum()
    for part in DUAL_PARTS:
        result += dual_d_part(g, part)
    return result


def dual_d_sum(total: FormalSum) -> FormalSum:
    result = FormalSum()
    for coefficient, g in total.graphs():
        result += dual_d(g) * coefficient
    return result


def _arnold_graph(i: int, j: int, a: int, b: int, arity: int, flavor: Flavor) -> Hypergraph:
    return Hypergraph(
        flavor=flavor,
        arity=arity,
        blacks=1,
        edges=((black(0), white(a)), (black(0), white(b))),
        hyperedges=((white(i), white(j), black(0)),),
    )


def arnold_witness(
    i: int, j: int, k: int, l: int, arity: int, flavor: Optional[Flavor] = None
) -> Tuple[FormalSum, FormalSum]:
    """
    A chain whose dual differential is the cyclic Arnold combination.

    The chain is built from the hyperedge (i, j, •) with the black vertex
    joined to (k, l), (k, i) and (l, i), each with coefficient ±1. Only the
    signs depend on the orientation of the three graphs, so they are solved
    for; the image must then equal the Arnold combination exactly.

    Returns:
        (chain C, boundary B) with dual_d(C) = B = Ω̄jkl − Ω̄ikl + Ω̄ijl − Ω̄ijk

    Raises:
        LabelError: If the labels repeat or exceed the arity
        VerificationFailure: If no choice of signs makes the chain a witness
    """
    labels = (i, j, k, l)
    if len(set(labels)) != 4:
        raise LabelError(f"cyclic Arnold witness needs four distinct labels, got {labels}")
    if any(not 0 <= x < arity for x in labels):
        raise LabelError(f"labels {labels} out of range for arity {arity}")
    flavor = flavor or Flavor.fbvh()
    target = to_formal_sum(arnold_relation(i, j, k, l), arity, flavor)
    pieces = [
        FormalSum.of(_arnold_graph(i, j, k, l, arity, flavor)),
        FormalSum.of(_arnold_graph(i, j, k, i, arity, flavor)),
        FormalSum.of(_arnold_graph(i, j, l, i, arity, flavor)),
    ]
    images = [dual_d_sum(p) for p in pieces]
    for s2, s3 in product((1, -1), repeat=2):
        boundary = images[0] + images[1] * s2 + images[2] * s3
        for s1 in (1, -1):
            if boundary * s1 == target:
                chain = (pieces[0] + pieces[1] * s2 + pieces[2] * s3) * s1
                logger.debug("Arnold witness for %s found with signs (%d, %d, %d)", labels, s1, s1 * s2, s1 * s3)
                return chain, target
    raise VerificationFailure(
        "cyclic Arnold witness",
        expected=target,
        computed=images[0] + images[1] + images[2],
        detail=f"labels {labels}",
    )
