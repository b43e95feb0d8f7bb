"""
Tests for cyclic compositions, generators and derivations.
"""

import pytest

from hyperoperad.core import bvh_composition_terms
from hyperoperad.differentials import delta_fhgc
from hyperoperad.exceptions import FlavorMismatchError, LabelError, SkewSymmetryError
from hyperoperad.formal_sum import FormalSum
from hyperoperad.hypergraph import degree
from hyperoperad.models import Flavor, Hypergraph, black
from hyperoperad.operad import (
    axiom_check_associativity,
    axiom_check_commutativity,
    bracket_sums,
    check_skew,
    com_corolla,
    compose,
    compose_at_black,
    compose_gra,
    compose_hgra,
    compose_sums,
    d_hgraphs,
    delta_edge,
    derivation_from_skew,
    dhat,
    edge_graph,
    gamma_mc,
    hyperedge,
    lie3,
    relabel_sum,
    splice_maps,
)


class TestSpliceMaps:
    """Test cases for the white label order after a composition."""

    def test_small_splice(self):
        assert splice_maps(3, 1, 2, 0) == ({0: 0, 2: 2}, {1: 1})

    def test_covers_all_positions(self):
        map1, map2 = splice_maps(4, 2, 3, 1)
        assert sorted(list(map1.values()) + list(map2.values())) == list(range(5))
        assert map1 == {0: 0, 1: 1, 3: 4}
        assert map2 == {0: 2, 2: 3}


class TestGraCompositions:
    """Test cases for Gra_d compositions."""

    def test_corolla_with_edge(self):
        gra = Flavor.gra(2)
        computed = compose(com_corolla(3, gra), 1, delta_edge(gra), 0)
        expected = FormalSum.of(edge_graph(3, [(0, 1)], gra), edge_graph(3, [(1, 2)], gra))
        assert computed == expected

    def test_path_with_edge_gives_triangle(self):
        gra = Flavor.gra(2)
        computed = compose(edge_graph(3, [(0, 2), (1, 0)], gra), 1, delta_edge(gra), 0)
        assert computed == FormalSum.of(edge_graph(3, [(0, 2), (1, 0), (1, 2)], gra))

    def test_compose_gra_rejects_other_flavors(self, edge):
        with pytest.raises(FlavorMismatchError):
            compose_gra(edge, 0, edge, 0)


class TestHgraCompositions:
    """Test cases for Hgra_d compositions."""

    def test_corolla_with_hyperedge(self):
        hgra = Flavor.hgra(3)
        computed = compose(com_corolla(3, hgra), 2, lie3(3), 0)
        expected = FormalSum.of(hyperedge(0, 2, 3, flavor=hgra), hyperedge(1, 2, 3, flavor=hgra))
        assert computed == expected

    def test_lie3_square_and_jacobi(self):
        square = compose(lie3(3), 2, lie3(3), 0)
        assert len(square) == 4
        jacobi = square + relabel_sum(square, [0, 2, 3, 1]) + relabel_sum(square, [0, 3, 1, 2])
        assert jacobi.is_zero()

    def test_compose_hgra_rejects_other_flavors(self, edge):
        with pytest.raises(FlavorMismatchError):
            compose_hgra(edge, 0, edge, 0)


class TestBVHCompositions:
    """Test cases for compositions with hyperedge fusion."""

    def test_composition_terms_are_exact(self):
        bvh = Flavor.bvhgra()
        computed = compose(edge_graph(3, [(1, 2)], bvh), 2, edge_graph(3, [(1, 2), (0, 1)], bvh), 0)
        expected = bvh_composition_terms()
        assert len(computed) == len(expected)
        for g in expected:
            assert computed.coefficient(g) in (1, -1)

    def test_delta_squared_vanishes(self):
        bvh = Flavor.bvhgra()
        assert compose(delta_edge(bvh), 1, delta_edge(bvh), 0).is_zero()

    def test_degree_is_additive(self):
        bvh = Flavor.bvhgra()
        left, right = edge_graph(3, [(1, 2)], bvh), edge_graph(3, [(1, 2), (0, 1)], bvh)
        for _, g in compose(left, 2, right, 0).graphs():
            assert degree(g) == degree(left) + degree(right)


class TestCompositionErrors:
    """Test cases for bad operands."""

    def test_flavor_mismatch(self, edge):
        with pytest.raises(FlavorMismatchError):
            compose(edge, 0, delta_edge(Flavor.gra(2)), 0)

    def test_slot_out_of_range(self, edge):
        with pytest.raises(LabelError):
            compose(edge, 2, edge, 0)
        with pytest.raises(LabelError):
            compose(edge, 0, edge, -1)

    def test_black_composition_needs_black_flavor(self, edge):
        with pytest.raises(FlavorMismatchError):
            compose_at_black(edge, 0, edge, 0)

    def test_black_vertex_out_of_range(self):
        with pytest.raises(LabelError):
            compose_at_black(gamma_mc(3), 3, gamma_mc(3), 0)


class TestLinearity:
    """Test cases for the extension to formal sums."""

    def test_compose_sums_is_bilinear(self, edge, corolla3):
        left = FormalSum.of(corolla3) * 2
        right = FormalSum.of(edge) * 3
        assert compose_sums(left, 1, right, 0) == compose(corolla3, 1, edge, 0) * 6

    def test_relabel_sum_of_hyperedge(self, star3):
        assert relabel_sum(FormalSum.of(star3), (1, 0, 2)) == -FormalSum.of(star3)


class TestDerivations:
    """Test cases for the skew elements and the derivations they define."""

    def test_dhat_is_skew(self):
        check_skew(dhat())

    def test_d_hgraphs_is_skew(self):
        check_skew(d_hgraphs(3))

    def test_corolla_is_not_skew(self):
        with pytest.raises(SkewSymmetryError):
            check_skew(FormalSum.of(com_corolla(2)))

    def test_wrong_arity_is_rejected(self, corolla3):
        with pytest.raises(SkewSymmetryError):
            check_skew(FormalSum.of(corolla3))

    def test_zero_element_gives_zero(self, star3):
        assert derivation_from_skew(FormalSum(), star3).is_zero()


class TestAxioms:
    """Test cases for the operad axioms on small BVHgra samples."""

    @pytest.fixture
    def samples(self):
        bvh = Flavor.bvhgra()
        return delta_edge(bvh), com_corolla(3, bvh), edge_graph(3, [(0, 1)], bvh)

    def test_commutativity(self, samples):
        delta, corolla, single = samples
        assert axiom_check_commutativity(corolla, 1, delta, 0)
        assert axiom_check_commutativity(single, 2, single, 0)

    def test_sequential_associativity(self, samples):
        delta, corolla, single = samples
        assert axiom_check_associativity(delta, 1, corolla, 0, single, 1, 0)

    def test_parallel_associativity(self, samples):
        delta, corolla, single = samples
        assert axiom_check_associativity(delta, 1, corolla, 0, single, 0, 0, parallel=True)


class TestBlackCompositions:
    """Test cases for the bracket of fhGC with the Maurer-Cartan element."""

    @pytest.mark.parametrize("stars", [
        ((0, 1, 2),),
        ((0, 1, 2), (1, 2, 3)),
    ])
    def test_bracket_with_gamma_is_the_differential(self, stars):
        flavor = Flavor.fhgc(3)
        g = Hypergraph(
            flavor=flavor,
            arity=0,
            blacks=max(max(s) for s in stars) + 1,
            hyperedges=tuple(tuple(black(v) for v in s) for s in stars),
        )
        bracket = bracket_sums(FormalSum.of(gamma_mc(3)), FormalSum.of(g))
        delta = delta_fhgc(g)
        assert bracket == delta * 6 or bracket == delta * -6
