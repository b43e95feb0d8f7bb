"""
Tests for the differentials and their transposes.
"""

import pytest

from hyperoperad.cooperad import arnold_relation, to_formal_sum
from hyperoperad.core import chain_map_defect, cherry, complete_graph, hanging_black, triangle
from hyperoperad.differentials import (
    arnold_witness,
    black_split,
    delta_fbvh,
    delta_fbvh_part,
    delta_fhgc,
    delta_gc,
    delta_hgraphs,
    differential,
    dual_d,
    dual_d_part,
    dual_d_sum,
    map_h,
    maurer_cartan_defect,
)
from hyperoperad.exceptions import FlavorMismatchError, GraphValidationError, LabelError
from hyperoperad.formal_sum import FormalSum
from hyperoperad.hypergraph import automorphism_count, degree, weight
from hyperoperad.models import OPERAD_PARTS, DifferentialPart, Flavor, Hypergraph, black, white
from hyperoperad.operad import com_corolla, hyperedge


def _delta_of_sum(total: FormalSum) -> FormalSum:
    result = FormalSum()
    for coefficient, g in total.graphs():
        result += delta_fbvh(g) * coefficient
    return result


class TestDeltaFBVH:
    """Test cases for the operad-side differential."""

    def test_generators_are_closed(self, edge, corolla3):
        assert delta_fbvh(edge).is_zero()
        assert delta_fbvh(corolla3).is_zero()

    def test_parts_add_up(self, star3, tripod, path3):
        for g in (star3, tripod, path3):
            parts = FormalSum()
            for part in OPERAD_PARTS:
                parts += delta_fbvh_part(g, part)
            assert parts == delta_fbvh(g)

    def test_gradings(self, star3, tripod, path3):
        for g in (star3, tripod, path3):
            for _, term in delta_fbvh(g).graphs():
                assert weight(term) == weight(g)
                assert degree(term) == degree(g) + 1
                assert term.blacks == g.blacks + 1

    def test_squares_to_zero(self, star3, tripod, path3):
        for g in (star3, tripod, path3):
            assert _delta_of_sum(delta_fbvh(g)).is_zero()

    def test_black_free_graph_has_no_black_split(self, star3):
        assert black_split(star3).is_zero()

    def test_rejects_invalid_graph(self):
        g = Hypergraph(flavor=Flavor.fbvh(), arity=2, blacks=1, edges=((black(0), white(0)), (black(0), white(1))))
        with pytest.raises(GraphValidationError):
            delta_fbvh(g)

    def test_rejects_other_flavors(self):
        with pytest.raises(FlavorMismatchError):
            delta_fbvh(com_corolla(3, Flavor.hgra(3)))

    def test_dual_part_is_not_an_operad_part(self, star3):
        with pytest.raises(ValueError):
            delta_fbvh_part(star3, DifferentialPart.D1)


class TestTwistedDifferentials:
    """Test cases for the Hgraphs and hairy graph differentials."""

    def test_maurer_cartan_in_hgraphs(self):
        assert maurer_cartan_defect(Flavor.hgraphs(3)).is_zero()

    def test_maurer_cartan_in_fbvh(self):
        assert maurer_cartan_defect(Flavor.fbvh()).is_zero()

    def test_no_maurer_cartan_element_for_gra(self):
        with pytest.raises(FlavorMismatchError):
            maurer_cartan_defect(Flavor.gra(2))

    def test_hgraphs_rejects_fbvh(self, star3):
        with pytest.raises(FlavorMismatchError):
            delta_hgraphs(star3)

    def test_triangle_maps_to_closed_hypergraph(self):
        image = map_h(triangle())
        assert len(image) == 1
        closed = FormalSum()
        for coefficient, g in image.graphs():
            closed += delta_fhgc(g) * coefficient
        assert closed.is_zero()

    def test_map_h_commutes_with_differentials(self):
        assert not map_h(triangle()).is_zero()
        assert chain_map_defect(triangle()).is_zero()
        assert chain_map_defect(complete_graph(4)).is_zero()

    def test_map_h_rejects_hypergraphs(self, star3):
        with pytest.raises(FlavorMismatchError):
            map_h(star3)


class TestDualDifferential:
    """Test cases for the transpose of δ in the graph basis."""

    def test_three_white_example(self):
        image = dual_d(hanging_black(3, 0, 1, 2, 0))
        expected = {hyperedge(0, 1, 2), cherry(3, 0, 1, 2), cherry(3, 1, 0, 2), cherry(3, 2, 0, 1)}
        assert len(image) == 4
        for g in expected:
            assert image.coefficient(g) in (1, -1)

    def test_four_white_example(self):
        image = dual_d(hanging_black(4, 0, 1, 2, 3))
        assert len(image) == 8
        assert all(abs(c) == 1 for _, c in image.items())

    def test_is_transpose_of_delta(self):
        g = hanging_black(3, 0, 1, 2, 0)
        for coefficient, source in dual_d(g).graphs():
            assert delta_fbvh(source).coefficient(g) == coefficient

    def test_black_free_graph_maps_to_zero(self, edge, star3, path3):
        for g in (edge, star3, path3):
            assert dual_d(g).is_zero()

    def test_squares_to_zero(self):
        assert dual_d_sum(dual_d(hanging_black(4, 0, 1, 2, 3))).is_zero()

    def test_dispatch_to_dual_part(self, tripod):
        assert differential(tripod, DifferentialPart.DBW) == dual_d_part(tripod, DifferentialPart.DBW)


class TestArnoldWitness:
    """Test cases for the cyclic Arnold witnesses."""

    @pytest.mark.parametrize("labels,arity", [((0, 1, 2, 3), 4), ((1, 0, 2, 3), 4), ((0, 1, 2, 3), 5)])
    def test_witness(self, labels, arity):
        chain, boundary = arnold_witness(*labels, arity)
        assert dual_d_sum(chain) == boundary
        assert boundary == to_formal_sum(arnold_relation(*labels), arity, Flavor.fbvh())
        assert len(chain) == 3
        assert all(abs(c) == 1 for _, c in chain.items())

    def test_repeated_labels(self):
        with pytest.raises(LabelError):
            arnold_witness(0, 0, 1, 2, 4)

    def test_label_out_of_range(self):
        with pytest.raises(LabelError):
            arnold_witness(0, 1, 2, 4, 4)


class TestDispatch:
    """Test cases for choosing the differential of a flavor."""

    def test_fbvh(self, star3):
        assert differential(star3) == delta_fbvh(star3)

    def test_gc(self):
        assert differential(triangle()) == delta_gc(triangle())

    def test_flavor_without_differential(self):
        assert differential(com_corolla(3, Flavor.hgra(3))).is_zero()
