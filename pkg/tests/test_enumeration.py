"""
Tests for the enumeration of graded bases and graph complex slices.
"""

import pytest

from hyperoperad.enumeration import (
    black_free_count,
    enumerate_basis,
    enumerate_slice,
    fbvh_bounds,
    iter_pieces,
    piece_degrees,
)
from hyperoperad.exceptions import FlavorMismatchError, UnboundedPieceError
from hyperoperad.hypergraph import canonical_form, degree, weight
from hyperoperad.models import Flavor


def _key(g):
    return canonical_form(g)[0]


class TestBounds:
    """Test cases for the admissibility bounds."""

    def test_weight_minus_one(self):
        assert fbvh_bounds(-1) == (1, 3, 1)

    def test_positive_weight(self):
        with pytest.raises(UnboundedPieceError):
            fbvh_bounds(1)
        with pytest.raises(UnboundedPieceError):
            enumerate_basis(Flavor.fbvh(), 2, 1, 1)

    def test_piece_degrees(self):
        assert list(piece_degrees(-2)) == [-2, -1, 0]

    def test_iter_pieces(self, fbvh):
        assert list(iter_pieces(fbvh, 2, -1)) == [(0, 0), (-1, -1), (-1, 0)]


class TestEnumerateBasis:
    """Test cases for FBVH bases."""

    def test_edge_piece(self, fbvh, edge):
        basis = enumerate_basis(fbvh, 2, -1, -1)
        assert basis.elements == (_key(edge),)

    def test_empty_piece(self, fbvh):
        assert len(enumerate_basis(fbvh, 2, -1, 0)) == 0

    def test_corolla_piece(self, fbvh, corolla3):
        assert enumerate_basis(fbvh, 3, 0, 0).elements == (_key(corolla3),)

    def test_arity_three_weight_minus_one(self, fbvh, tripod):
        assert len(enumerate_basis(fbvh, 3, -1, -1)) == 3
        assert enumerate_basis(fbvh, 3, -1, 0).elements == (_key(tripod),)

    def test_all_degrees_at_once(self, fbvh):
        mixed = enumerate_basis(fbvh, 3, -1)
        assert len(mixed) == 4
        assert mixed.degree is None
        assert mixed.weight == -1

    def test_elements_have_the_piece_gradings(self, fbvh):
        for k in piece_degrees(-2):
            basis = enumerate_basis(fbvh, 3, -2, k)
            assert list(basis.elements) == sorted(basis.elements)
            for g in basis.graphs():
                assert weight(g) == -2
                assert degree(g) == k

    def test_black_free_count_agrees(self, fbvh):
        assert black_free_count(fbvh, 3, -1) == 3
        assert black_free_count(fbvh, 4, -2) == 19
        # a doubled hyperedge survives, a doubled edge does not
        assert black_free_count(fbvh, 3, -4) == 4
        for arity, w in ((2, -1), (3, -2), (4, -2), (3, -4)):
            assert black_free_count(fbvh, arity, w) == len(enumerate_basis(fbvh, arity, w, w))

    def test_forest_drops_loops(self, fbvh, forest):
        assert len(enumerate_basis(forest, 3, -3, -3)) <= len(enumerate_basis(fbvh, 3, -3, -3))

    def test_rejects_unweighted_flavor(self):
        with pytest.raises(FlavorMismatchError):
            enumerate_basis(Flavor.gra(2), 2, -1, -1)


class TestSlices:
    """Test cases for graph complex slices."""

    def test_triangle_slice(self):
        basis = enumerate_slice(Flavor.gc(3), 0, 3, 3, min_valence=2)
        assert len(basis) == 1

    def test_slice_degree(self):
        assert enumerate_slice(Flavor.fhgc(3), 0, 3, 1).degree == 1

    def test_rejects_weighted_flavor(self, fbvh):
        with pytest.raises(FlavorMismatchError):
            enumerate_slice(fbvh, 2, 1, 1)

    def test_black_only_flavor_has_no_whites(self):
        with pytest.raises(FlavorMismatchError):
            enumerate_slice(Flavor.fhgc(3), 1, 3, 1)
