"""
Tests for validation, gradings and canonical forms.
"""

import pytest

from hyperoperad.core import triangle
from hyperoperad.exceptions import FlavorMismatchError, GraphValidationError, LabelError
from hyperoperad.hypergraph import (
    act_permutation,
    automorphism_count,
    canonical_form,
    canonicalize,
    degree,
    degree_from_counts,
    graph_product,
    hyperedge_type,
    is_valid,
    relabel_whites,
    same_graph,
    validate,
    violations,
    weight,
)
from hyperoperad.models import Flavor, HyperedgeType, Hypergraph, black, white
from hyperoperad.operad import edge_graph, gamma_mc, hyperedge


class TestValidation:
    """Test cases for the validity rules."""

    def test_valid_graphs(self, edge, star3, tripod):
        for g in (edge, star3, tripod):
            assert is_valid(g)

    def test_low_valence(self):
        g = Hypergraph(flavor=Flavor.fbvh(), arity=2, blacks=1, edges=((black(0), white(0)), (black(0), white(1))))
        clauses = [v.clause for v in violations(g)]
        assert "black valency < 3" in clauses
        assert is_valid(g, min_valence=2)

    def test_tadpole_and_black_black_edge(self):
        g = Hypergraph(flavor=Flavor.fbvh(), arity=1, edges=((white(0), white(0)),))
        with pytest.raises(GraphValidationError) as info:
            validate(g)
        assert info.value.violations[0].clause == "tadpole edge"
        g = Hypergraph(
            flavor=Flavor.fbvh(),
            arity=2,
            blacks=2,
            edges=((black(0), black(1)),),
            hyperedges=((white(0), white(1), black(0)), (white(0), white(1), black(1))),
        )
        assert "black-black edge" in [v.clause for v in violations(g, min_valence=1)]

    def test_hyperedge_without_white(self):
        g = Hypergraph(
            flavor=Flavor.fbvh(),
            arity=1,
            blacks=3,
            hyperedges=((black(0), black(1), black(2)),),
        )
        assert "hyperedge without white flag" in [v.clause for v in violations(g, min_valence=0)]

    def test_flavor_constituents(self):
        g = edge_graph(2, [(0, 1)], Flavor.hgra(3))
        assert "edges not allowed" in [v.clause for v in violations(g)]


class TestGradings:
    """Test cases for degree and weight."""

    def test_fbvh(self, edge, star3, tripod):
        assert (degree(edge), weight(edge)) == (-1, -1)
        assert (degree(star3), weight(star3)) == (-2, -2)
        assert (degree(tripod), weight(tripod)) == (0, -1)

    def test_complexes(self):
        assert degree(gamma_mc(3)) == 1
        assert degree_from_counts(Flavor.gc(3), 3, 0, 3) == 0
        assert degree(edge_graph(2, [(0, 1)], Flavor.gra(2))) == -1

    def test_weight_needs_fbvh(self):
        with pytest.raises(FlavorMismatchError):
            weight(gamma_mc(3))

    def test_hyperedge_types(self):
        g = Hypergraph(
            flavor=Flavor.fbvh(),
            arity=3,
            blacks=1,
            edges=((black(0), white(2)),),
            hyperedges=((white(0), white(1), black(0)), (white(0), white(1), white(2))),
        )
        assert hyperedge_type(g, 0) is HyperedgeType.TYPE2
        assert hyperedge_type(g, 1) is HyperedgeType.TYPE0
        with pytest.raises(LabelError):
            hyperedge_type(g, 2)


class TestCanonicalForm:
    """Test cases for canonical forms and their signs."""

    def test_endpoint_order_is_free(self, edge):
        assert canonical_form(edge_graph(2, [(1, 0)])) == canonical_form(edge)

    def test_edge_order_sign(self, path3):
        key, sign = canonical_form(path3)
        assert canonical_form(edge_graph(3, [(1, 2), (0, 1)])) == (key, -sign)

    def test_flag_order_sign(self, star3):
        assert same_graph(hyperedge(1, 0, 2), star3) == -1
        assert same_graph(hyperedge(1, 2, 0), star3) == 1

    def test_parallel_odd_edges_vanish(self):
        assert canonical_form(edge_graph(2, [(0, 1), (1, 0)])) is None
        assert canonical_form(edge_graph(2, [(0, 1), (0, 1)], Flavor.gra(2))) is None

    def test_even_directed_edges(self):
        gra = Flavor.gra(3)
        assert same_graph(edge_graph(2, [(1, 0)], gra), edge_graph(2, [(0, 1)], gra)) == -1
        assert canonical_form(edge_graph(2, [(0, 1), (0, 1)], gra)) is not None

    def test_black_relabeling_invariance(self):
        g = Hypergraph(
            flavor=Flavor.fbvh(),
            arity=3,
            blacks=2,
            edges=((black(0), white(0)), (black(0), white(1)), (black(1), white(2))),
            hyperedges=((white(0), black(0), black(1)),),
        )
        swapped = Hypergraph(
            flavor=Flavor.fbvh(),
            arity=3,
            blacks=2,
            edges=((black(1), white(0)), (black(1), white(1)), (black(0), white(2))),
            hyperedges=((white(0), black(1), black(0)),),
        )
        assert same_graph(g, swapped) is not None

    def test_canonicalize(self, path3):
        signed = canonicalize(edge_graph(3, [(1, 2), (0, 1)]))
        assert signed.graph.raw_key() == canonical_form(path3)[0]

    def test_automorphism_count(self, tripod):
        twins = Hypergraph(
            flavor=Flavor.fbvh(),
            arity=2,
            blacks=2,
            edges=((black(0), white(0)), (black(0), white(1)), (black(1), white(0)), (black(1), white(1))),
        )
        assert automorphism_count(tripod) == 1
        assert automorphism_count(twins) == 2
        assert automorphism_count(triangle()) == 6
        assert automorphism_count(edge_graph(2, [(0, 1), (0, 1)], Flavor.gra(2))) == 2


class TestWhiteOperations:
    """Test cases for relabeling and products."""

    def test_relabel(self, edge):
        assert relabel_whites(edge, [1, 0]).edges == ((white(1), white(0)),)
        with pytest.raises(LabelError):
            relabel_whites(edge, [0, 0])

    def test_act_permutation(self, path3):
        signed = act_permutation(path3, [2, 1, 0])
        assert signed.graph.raw_key() == canonical_form(path3)[0]
        assert signed.sign == -canonical_form(path3)[1]

    def test_graph_product(self, path3):
        signed = graph_product(edge_graph(3, [(0, 1)]), edge_graph(3, [(1, 2)]))
        key, sign = canonical_form(path3)
        assert signed.graph.raw_key() == key
        assert signed.sign == sign

    def test_product_of_equal_edges_vanishes(self):
        e = edge_graph(3, [(0, 1)])
        assert graph_product(e, e) is None

    def test_product_checks(self, edge):
        with pytest.raises(LabelError):
            graph_product(edge, edge_graph(3, [(0, 1)]))
        with pytest.raises(FlavorMismatchError):
            graph_product(edge, edge_graph(2, [(0, 1)], Flavor.bvhgra()))
