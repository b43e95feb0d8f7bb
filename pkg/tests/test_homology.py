"""
Tests for matrix assembly and exact cohomology.
"""

from fractions import Fraction

import pytest

from hyperoperad.config import get_settings
from hyperoperad.enumeration import piece_degrees
from hyperoperad.exceptions import FlavorMismatchError, UnboundedPieceError
from hyperoperad.homology import HomologyEngine, apply_differential, cohomology_dims
from hyperoperad.hypergraph import canonical_form
from hyperoperad.linalg import identity
from hyperoperad.models import Flavor, SparseMatrix
from hyperoperad.observability import ComputationTracker
from hyperoperad.operad import com_corolla


class TestAssembly:
    """Test cases for differential matrices."""

    def test_shapes(self, engine, fbvh):
        for k in piece_degrees(-1):
            matrix = engine.assemble(fbvh, 3, -1, k)
            assert matrix.cols == len(engine.basis(fbvh, 3, -1, k))
        assert engine.assemble(fbvh, 3, -1, -1).rows == 1
        assert engine.assemble(fbvh, 3, -1, 0).rows == 0

    @pytest.mark.parametrize("arity,w", [(3, -1), (3, -2), (4, -1), pytest.param(4, -2, marks=pytest.mark.slow)])
    def test_dual_is_transpose(self, engine, fbvh, arity, w):
        for k in range(w + 1, 1):
            dual = engine.assemble_dual(fbvh, arity, w, k)
            forward = engine.assemble(fbvh, arity, w, k - 1)
            assert dual.entries == {(c, r): v for (r, c), v in forward.entries.items()}

    @pytest.mark.parametrize("dual", [False, True])
    def test_squares_to_zero(self, engine, fbvh, dual):
        assert all(engine.d_squared(fbvh, 3, -2, dual=dual).values())

    def test_apply_differential_rejects_flavor_without_differential(self):
        key = canonical_form(com_corolla(3, Flavor.hgra(3)))[0]
        with pytest.raises(FlavorMismatchError):
            apply_differential(key)


class TestCohomology:
    """Test cases for cohomology dimensions."""

    @pytest.mark.parametrize(
        "weight,expected",
        [(0, {0: 1}), (-1, {-1: 1, 0: 0}), (-2, {-2: 0, -1: 0, 0: 0})],
    )
    def test_forest_arity_two(self, engine, forest, weight, expected):
        assert engine.cohomology_dims(forest, 2, weight).dims == expected

    def test_dims_formula(self, engine, fbvh):
        result = engine.cohomology_dims(fbvh, 3, -1)
        for k, dim in result.dims.items():
            assert dim == result.basis_sizes[k] - result.ranks[k] - result.ranks.get(k - 1, 0)
            assert dim >= 0

    def test_window(self, engine, forest):
        window = engine.cohomology_window(forest, 2, -2)
        assert [dims.weight for dims in window] == [0, -1, -2]

    def test_module_level_helper(self, forest):
        assert cohomology_dims(forest, 2, -1).dims == {-1: 1, 0: 0}


class TestCaching:
    """Test cases for reuse of cached pieces."""

    def test_second_engine_hits_the_cache(self, settings, forest):
        first = HomologyEngine(settings, ComputationTracker()).cohomology_dims(forest, 2, -2)
        second_engine = HomologyEngine(settings, ComputationTracker())
        second = second_engine.cohomology_dims(forest, 2, -2)
        assert second.dims == first.dims
        assert second_engine.cache.hits > 0

    def test_disabled_cache(self, tmp_path, forest):
        engine = HomologyEngine(get_settings(cache=tmp_path / "c", use_cache=False, workers=1))
        engine.cohomology_dims(forest, 2, -1)
        assert engine.cache.stats() == {"cache_hits": 0, "cache_misses": 0}
        assert not (tmp_path / "c").exists()

    @pytest.mark.slow
    def test_worker_count_does_not_change_results(self, tmp_path, fbvh):
        one = HomologyEngine(get_settings(cache=tmp_path / "a", workers=1))
        two = HomologyEngine(get_settings(cache=tmp_path / "b", workers=2))
        for k in piece_degrees(-2):
            assert one.assemble(fbvh, 3, -2, k) == two.assemble(fbvh, 3, -2, k)


class TestImages:
    """Test cases for membership in the image of a matrix."""

    def test_in_image(self, engine):
        assert engine.in_image(identity(2), {0: Fraction(1)})
        matrix = SparseMatrix(rows=2, cols=1, entries={(0, 0): Fraction(1), (1, 0): Fraction(1)})
        assert engine.in_image(matrix, {0: Fraction(2), 1: Fraction(2)})
        assert not engine.in_image(matrix, {0: Fraction(1)})

    def test_empty_matrix(self, engine):
        empty = SparseMatrix(rows=2, cols=0)
        assert engine.in_image(empty, {})
        assert not engine.in_image(empty, {1: Fraction(1)})


class TestCeiling:
    """Test cases for the black-vertex ceiling."""

    def test_basis_over_the_ceiling(self, tmp_path, fbvh):
        engine = HomologyEngine(get_settings(cache=tmp_path / "c", max_blacks=1))
        assert engine.basis(fbvh, 2, -1, 0).weight == -1
        with pytest.raises(UnboundedPieceError):
            engine.basis(fbvh, 2, -2, 0)

    def test_slice_over_the_ceiling(self, tmp_path):
        engine = HomologyEngine(get_settings(cache=tmp_path / "c", max_blacks=2))
        with pytest.raises(UnboundedPieceError):
            engine.slice_basis(Flavor.fhgc(3), 0, 3, 1)
