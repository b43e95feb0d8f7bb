"""
Tests for the independent reference computations.
"""

import pytest

from hyperoperad.exceptions import LabelError, OracleRangeError
from hyperoperad.oracles import (
    bv_dims,
    bv_image_of,
    bv_poincare,
    bv_relation,
    bv_trees,
    format_bracket,
    gr_t_dims,
    holie_corolla,
    holie_delta,
    holie_delta_sum,
    holie_trees,
    ihx_quotient_dim,
    lie_dim,
    lyndon_words,
    standard_bracketing,
    witt_dim,
)


class TestBVOracle:
    """Test cases for the BV operad dimensions."""

    def test_tree_counts(self):
        assert len(bv_trees(2)) == 2
        assert len(bv_trees(3)) == 8
        assert len(bv_trees(4)) == 64

    def test_poincare_polynomial(self):
        assert bv_poincare(2) == {0: 1, -1: 1}
        assert bv_poincare(3) == {0: 1, -1: 3, -2: 3, -3: 1}
        assert bv_poincare(4) == {0: 1, -1: 6, -2: 14, -3: 16, -4: 9, -5: 2}

    @pytest.mark.parametrize("arity", [2, 3, 4])
    def test_dims_match_poincare(self, arity):
        assert bv_dims(arity) == bv_poincare(arity)

    def test_redundant_relations(self):
        assert bv_dims(4, redundant=True) == bv_dims(4)

    def test_relation_maps_to_zero(self):
        assert len(bv_relation()) == 7
        assert bv_image_of(bv_relation()).is_zero()

    def test_out_of_range(self):
        with pytest.raises(OracleRangeError):
            bv_trees(5)
        with pytest.raises(OracleRangeError):
            bv_relation(3)
        with pytest.raises(OracleRangeError):
            bv_poincare(1)


class TestLieOracles:
    """Test cases for free Lie algebra counts."""

    def test_witt(self):
        assert witt_dim(2, 3) == 2
        assert witt_dim(2, 4) == 3
        assert witt_dim(3, 2) == 3
        assert witt_dim(1, 2) == 0

    @pytest.mark.parametrize("gens", [1, 2, 3])
    def test_witt_counts_lyndon_words(self, gens):
        for length in range(1, 7):
            assert witt_dim(gens, length) == len(lyndon_words(gens, length))

    def test_lyndon_words(self):
        assert lyndon_words(2, 3) == [(0, 0, 1), (0, 1, 1)]
        assert lyndon_words(2, 1) == [(0,), (1,)]

    def test_standard_bracketing(self):
        assert format_bracket(standard_bracketing((0, 0, 1))) == "[x0,[x0,x1]]"
        assert format_bracket(standard_bracketing((0, 1, 1))) == "[[x0,x1],x1]"
        assert format_bracket(standard_bracketing((0, 1)), ["a", "b"]) == "[a,b]"

    def test_bracketing_needs_a_lyndon_word(self):
        with pytest.raises(LabelError):
            standard_bracketing((1, 0))
        with pytest.raises(LabelError):
            standard_bracketing(())

    def test_gr_t(self):
        assert gr_t_dims(1, 1) == 1
        assert gr_t_dims(1, 2) == 0
        assert gr_t_dims(2, 1) == 2
        assert gr_t_dims(3, 2) == 1

    def test_out_of_range(self):
        with pytest.raises(OracleRangeError):
            witt_dim(0, 1)
        with pytest.raises(OracleRangeError):
            gr_t_dims(0, 1)


class TestHolieOracle:
    """Test cases for vertex splitting on trees."""

    @pytest.mark.parametrize("d", [2, 3])
    def test_jacobi(self, d):
        assert len(holie_delta(holie_corolla(4, d))) == 3

    @pytest.mark.parametrize("d", [2, 3])
    @pytest.mark.parametrize("legs", [4, 5, 6])
    def test_squares_to_zero(self, d, legs):
        assert not holie_delta_sum(holie_delta(holie_corolla(legs, d)))

    def test_trivalent_trees(self):
        assert len(holie_trees(4, internal_edges=1)) == 3

    @pytest.mark.parametrize("legs", [3, 4, 5])
    def test_ihx_quotient(self, legs):
        assert ihx_quotient_dim(legs) == lie_dim(legs - 1)

    def test_too_few_legs(self):
        with pytest.raises(OracleRangeError):
            holie_trees(2)
