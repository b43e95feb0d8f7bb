"""
Tests for exact formal sums of canonical graphs.
"""

from fractions import Fraction

from hyperoperad.formal_sum import FormalSum, total
from hyperoperad.models import Flavor
from hyperoperad.operad import edge_graph


class TestFormalSum:
    """Test cases for FormalSum."""

    def test_of_adds_coefficients(self, edge):
        s = FormalSum.of(edge, edge)
        assert len(s) == 1
        assert s.coefficient(edge) == 2

    def test_canonical_sign_is_absorbed(self, path3):
        reversed_path = edge_graph(3, [(1, 2), (0, 1)])
        s = FormalSum.of(reversed_path)
        assert s.coefficient(path3) == -1
        assert s.coefficient(reversed_path) == 1
        assert (s + FormalSum.of(path3)).is_zero()

    def test_zero_graphs_are_dropped(self):
        assert FormalSum.of(edge_graph(2, [(0, 1), (1, 0)])).is_zero()

    def test_zero_comparison(self, edge):
        assert FormalSum() == 0
        assert FormalSum.of(edge) - FormalSum.of(edge) == 0
        assert repr(FormalSum()) == "FormalSum(0)"

    def test_scalars(self, edge, star3):
        s = FormalSum.of(edge)
        assert (s * Fraction(1, 2)).coefficient(edge) == Fraction(1, 2)
        assert (s * 0).is_zero()
        assert (-s).coefficient(edge) == -1

    def test_proportional_to(self, edge, star3):
        s = FormalSum.of(star3) + FormalSum.of(edge) * 3
        assert (s * -2).proportional_to(s) == -2
        assert FormalSum.of(edge).proportional_to(s) is None
        assert FormalSum().proportional_to(FormalSum()) == 1

    def test_keys_are_sorted(self, edge, star3, path3):
        s = FormalSum.of(path3, edge, star3)
        assert s.keys() == sorted(s.keys())
        assert [c for c, _ in s.graphs()] == [1, 1, 1]

    def test_total(self, edge):
        assert total([FormalSum.of(edge)] * 3).coefficient(edge) == 3

    def test_flavors_are_distinct_keys(self, edge):
        bvh = edge_graph(2, [(0, 1)], Flavor.bvhgra())
        assert len(FormalSum.of(edge, bvh)) == 2
