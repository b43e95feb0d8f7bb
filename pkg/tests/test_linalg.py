"""
Tests for exact ranks and kernels.
"""

from fractions import Fraction

import pytest

from hyperoperad import linalg
from hyperoperad.exceptions import InternalConsistencyError
from hyperoperad.linalg import (
    identity,
    matrix_product_is_zero,
    null_space,
    rank,
    rank_bound,
    rank_exact,
    rank_mod_p,
    reduce_mod,
    restrict_columns,
)
from hyperoperad.models import SparseMatrix


def _matrix(rows):
    entries = {
        (r, c): Fraction(value)
        for r, row in enumerate(rows)
        for c, value in enumerate(row)
        if value
    }
    return SparseMatrix(rows=len(rows), cols=len(rows[0]) if rows else 0, entries=entries)


class TestModularReduction:
    """Test cases for reducing rationals modulo a prime."""

    def test_half_mod_seven(self):
        assert reduce_mod(Fraction(1, 2), 7) == 4

    def test_negative(self):
        assert reduce_mod(Fraction(-1), 7) == 6

    def test_denominator_divisible_by_p(self):
        with pytest.raises(ZeroDivisionError):
            reduce_mod(Fraction(1, 7), 7)


class TestRank:
    """Test cases for certified ranks."""

    def test_small_ranks(self):
        assert rank(_matrix([[1, 2], [2, 4]])) == 1
        assert rank(identity(3)) == 3
        assert rank(SparseMatrix(rows=4, cols=2)) == 0

    def test_rational_entries(self):
        assert rank(_matrix([[Fraction(1, 2), 1], [1, 2]])) == 1
        assert rank(_matrix([[Fraction(1, 2), 1], [1, 3]])) == 2

    def test_modular_rank_can_drop(self):
        m = _matrix([[3]])
        assert rank_mod_p(m, 3) == 0
        assert rank_mod_p(m, 5) == 1

    def test_disagreeing_primes_fall_back_to_exact(self):
        assert rank(_matrix([[3]]), primes=(3, 5)) == 1

    def test_crosscheck(self):
        m = _matrix([[1, 1, 0], [0, 1, 1], [1, 2, 1]])
        assert rank_exact(m) == 2
        assert rank(m, crosscheck_limit=10) == 2

    def test_structural_bound(self):
        assert rank_bound(_matrix([[1, 2], [2, 4]])) == 2
        assert rank_bound(_matrix([[Fraction(1, 2), 1], [0, 0], [0, 0]])) == 1
        assert rank_bound(SparseMatrix(rows=2, cols=2)) == 0

    def test_rank_above_structural_bound_is_an_error(self, monkeypatch):
        monkeypatch.setattr(linalg, "rank_mod_p", lambda matrix, p: 4)
        with pytest.raises(InternalConsistencyError):
            rank(identity(3))


class TestKernels:
    """Test cases for null spaces and products."""

    def test_null_space(self):
        vectors = null_space(_matrix([[1, 1]]))
        assert len(vectors) == 1
        a, b = vectors[0]
        assert a + b == 0

    def test_null_space_without_columns(self):
        assert null_space(SparseMatrix(rows=2, cols=0)) == ()

    def test_restrict_columns(self):
        m = _matrix([[1, 1], [0, 2]])
        restricted = restrict_columns(m, [(Fraction(1), Fraction(-1))])
        assert restricted.shape == (2, 1)
        assert restricted.entries == {(1, 0): Fraction(-2)}

    def test_product_is_zero(self):
        after = _matrix([[1, 1]])
        before = _matrix([[1], [-1]])
        assert matrix_product_is_zero(after, before)
        assert not matrix_product_is_zero(after, identity(2))

    def test_scaled_identity(self):
        assert identity(2, Fraction(1, 3)).entries == {(0, 0): Fraction(1, 3), (1, 1): Fraction(1, 3)}
