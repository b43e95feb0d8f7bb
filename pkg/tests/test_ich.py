"""
Tests for the internally connected part and its operations.
"""

import pytest

from hyperoperad.exceptions import GraphValidationError, LabelError
from hyperoperad.formal_sum import FormalSum
from hyperoperad.ich import (
    _weight_partitions,
    classify,
    connected_part,
    flip_type1,
    gamma,
    gammas_closed,
    h0_check,
    ich_components_of_delta,
    leibniz_defect,
    lie_bracket,
    linf_defect,
    multiply,
    product_of,
    relation_defect,
    relation_exact,
    truncate_ich,
    truncated_cohomology,
)
from hyperoperad.models import Flavor, HyperedgeType, Hypergraph, black, white


@pytest.fixture
def type1_graph():
    """Two black vertices sharing a hyperedge with one white flag."""
    return Hypergraph(
        flavor=Flavor.fbvh(),
        arity=2,
        blacks=2,
        edges=(
            (black(0), white(0)),
            (black(0), white(1)),
            (black(1), white(0)),
            (black(1), white(1)),
        ),
        hyperedges=((white(0), black(0), black(1)),),
    )


class TestGammas:
    """Test cases for the one-edge generators."""

    def test_labels(self):
        with pytest.raises(LabelError):
            gamma(0, 0, 2)
        with pytest.raises(LabelError):
            gamma(0, 2, 2)

    @pytest.mark.parametrize("arity", [2, 3, 4])
    def test_closed(self, arity):
        assert gammas_closed(arity)

    def test_products(self):
        g01, g12 = gamma(0, 1, 3), gamma(1, 2, 3)
        assert multiply(FormalSum.of(g01), FormalSum.of(g01)).is_zero()
        product = product_of((g01, g12))
        assert len(product) == 1
        assert product == -product_of((g12, g01))
        assert connected_part(product, components=2) == product
        assert connected_part(product).is_zero()

    def test_empty_product(self):
        with pytest.raises(LabelError):
            product_of(())


class TestBrackets:
    """Test cases for the operations induced by δ."""

    def test_argument_count(self):
        with pytest.raises(LabelError):
            ich_components_of_delta(2, (gamma(0, 1, 3),))

    def test_arguments_must_be_connected(self, path3):
        with pytest.raises(GraphValidationError):
            ich_components_of_delta(1, (path3,))

    def test_skew(self):
        labels = [(0, 1), (1, 2), (0, 2)]
        for a in labels:
            for b in labels:
                left = ich_components_of_delta(2, (gamma(*a, 4), gamma(*b, 4)))
                right = ich_components_of_delta(2, (gamma(*b, 4), gamma(*a, 4)))
                assert left == -right

    def test_disjoint_edges(self):
        assert lie_bracket(gamma(0, 1, 4), gamma(2, 3, 4)).is_zero()

    @pytest.mark.parametrize("a,b", [((0, 1), (1, 2)), ((0, 1), (0, 2)), ((0, 2), (1, 2))])
    def test_delta_is_a_coderivation(self, a, b):
        assert leibniz_defect(gamma(*a, 3), gamma(*b, 3)).is_zero()

    def test_linf_relations(self):
        g01, g12, g02 = gamma(0, 1, 3), gamma(1, 2, 3), gamma(0, 2, 3)
        assert linf_defect((g01, g12)).is_zero()
        assert linf_defect((g01, g12, g02)).is_zero()


class TestRelations:
    """Test cases for the relations among the brackets of the generators."""

    @pytest.mark.parametrize("a,c,d", [(2, 0, 1), (0, 1, 2), (1, 0, 2)])
    def test_distinct_labels_cancel(self, a, c, d):
        assert relation_defect(a, c, d, 3).is_zero()
        assert relation_exact(a, c, d, 3)

    @pytest.mark.parametrize("a,other", [(0, 1), (0, 2), (1, 2), (2, 1)])
    def test_repeated_label_is_exact(self, engine, a, other):
        c, d = sorted((a, other))
        assert not relation_defect(a, c, d, 3).is_zero()
        assert relation_exact(a, c, d, 3, engine)

    @pytest.mark.slow
    def test_repeated_label_is_exact_at_arity_four(self, engine):
        assert relation_exact(0, 0, 1, 4, engine)
        assert relation_exact(3, 0, 3, 4, engine)


class TestTruncation:
    """Test cases for truncated ICH and its coalgebra."""

    def test_weight_partitions(self):
        assert list(_weight_partitions(-3)) == [(-3,), (-2, -1), (-1, -1, -1)]
        assert list(_weight_partitions(0)) == [()]

    def test_edge_piece(self):
        assert truncate_ich(2, -1).dims() == {-1: 1}

    def test_truncated_cohomology_arity_two(self):
        assert truncated_cohomology(2, 0).dims == {0: 1}
        assert truncated_cohomology(2, -1).dims == {-1: 1, 0: 0}

    def test_h0_single_edge(self):
        rows = h0_check(1, [-1])
        assert len(rows) == 1
        assert rows[0].dim_computed == rows[0].dim_oracle
        assert rows[0].conventions == {"with_center": 1, "without_center": 0}

    @pytest.mark.parametrize("w,expected", [(-1, 1), (-2, 0), (-3, 0)])
    def test_h0_at_one_against_the_oracle(self, w, expected):
        (row,) = h0_check(1, [w])
        assert row.dim_oracle == expected
        assert row.match

    @pytest.mark.parametrize("n", [2, 3])
    def test_h0_single_edges_are_asserted(self, n):
        (row,) = h0_check(n, [-1])
        assert row.dim_computed == n
        assert row.match
        assert row.conventions == {"with_center": n, "without_center": n - 1}

    def test_h0_larger_arity_is_data(self):
        row = h0_check(2, [-2])[0]
        assert row.dim_oracle is None
        assert row.match is None


class TestHyperedgeTypes:
    """Test cases for type-1 hyperedges."""

    def test_classify(self, type1_graph, star3):
        assert classify(type1_graph, 0) is HyperedgeType.TYPE1
        assert classify(star3, 0) is HyperedgeType.TYPE0

    def test_flip(self, type1_graph):
        flipped = flip_type1(type1_graph, 0)
        assert flipped.sign == -1
        assert flipped.graph.hyperedges[0] == (white(0), black(1), black(0))
        assert FormalSum.of(type1_graph) == -FormalSum.of(flipped.graph)

    def test_flip_needs_type1(self, star3):
        with pytest.raises(GraphValidationError):
            flip_type1(star3, 0)
