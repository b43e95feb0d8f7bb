"""
Tests for the JSON text format of graphs and formal sums.
"""

import pytest

from hyperoperad.exceptions import GraphParseError
from hyperoperad.formal_sum import FormalSum
from hyperoperad.operad import edge_graph
from hyperoperad.serialization import canonical_text, deserialize, dump_sum, load_sum, serialize


class TestSerialize:
    """Test cases for single graphs."""

    def test_compact_sorted_text(self, edge):
        assert serialize(edge) == '{"arity":2,"blacks":0,"edges":[["w0","w1"]],"flavor":"fbvh","hyperedges":[]}'

    def test_parse(self, tripod):
        assert deserialize(serialize(tripod)) == tripod

    def test_canonical_text(self, path3):
        assert canonical_text(edge_graph(3, [(1, 2), (0, 1)])) == canonical_text(path3)
        assert canonical_text(edge_graph(2, [(0, 1), (1, 0)])) is None


class TestParseErrors:
    """Test cases for malformed input."""

    def test_bad_json(self):
        with pytest.raises(GraphParseError):
            deserialize("{not json")

    def test_endpoint_out_of_range(self):
        with pytest.raises(GraphParseError) as info:
            deserialize('{"flavor":"fbvh","arity":2,"edges":[["w0","w5"]]}')
        assert info.value.field == "edges[0]"

    def test_malformed_endpoint(self):
        with pytest.raises(GraphParseError):
            deserialize('{"flavor":"fbvh","arity":2,"edges":[["x0","w1"]]}')

    def test_hyperedge_not_trivalent(self):
        with pytest.raises(GraphParseError) as info:
            deserialize('{"flavor":"fbvh","arity":3,"hyperedges":[["w0","w1"]]}')
        assert info.value.field == "hyperedges[0]"

    def test_unknown_flavor(self):
        with pytest.raises(GraphParseError):
            deserialize('{"flavor":"nope","arity":2}')

    def test_missing_field(self):
        with pytest.raises(GraphParseError):
            deserialize('{"arity":2}')


class TestFormalSums:
    """Test cases for JSON lines."""

    def test_sum_text(self, edge, star3):
        s = FormalSum.of(edge) * 3 - FormalSum.of(star3)
        assert load_sum(dump_sum(s)) == s

    def test_blank_lines_and_coefficients(self, edge):
        text = '\n{"flavor":"fbvh","arity":2,"edges":[["w1","w0"]],"coefficient":"-1/2"}\n\n'
        assert load_sum(text).coefficient(edge) == -0.5

    def test_line_numbers(self):
        with pytest.raises(GraphParseError) as info:
            load_sum('{"flavor":"fbvh","arity":2}\n{"flavor":"fbvh","arity":2,"coefficient":"1/0"}')
        assert info.value.line == 2
