"""
Tests for stage timings and counters.
"""

import pytest

from hyperoperad.observability import ComputationTracker


class TestComputationTracker:
    """Test cases for ComputationTracker."""

    @pytest.fixture
    def tracker(self):
        return ComputationTracker()

    def test_empty_summary(self, tracker):
        assert tracker.summary() == {"stages": {}, "counters": {}, "largest_matrix": None}

    def test_stage_timing(self, tracker):
        with tracker.stage("rank"):
            pass
        with tracker.stage("rank"):
            pass
        stages = tracker.summary()["stages"]
        assert stages["rank"]["calls"] == 2
        assert stages["rank"]["seconds"] >= 0

    def test_stage_records_on_error(self, tracker):
        with pytest.raises(RuntimeError):
            with tracker.stage("assemble"):
                raise RuntimeError("boom")
        assert tracker.summary()["stages"]["assemble"]["calls"] == 1

    def test_counters(self, tracker):
        tracker.record_basis("fbvh/3/-1/-1", 3)
        tracker.record_basis("fbvh/3/-1/0", 1)
        tracker.record_rank(2)
        tracker.merge_counters({"cache_hits": 4})
        counters = tracker.summary()["counters"]
        assert counters == {"bases": 2, "basis_elements": 4, "cache_hits": 4, "rank_total": 2, "ranks": 1}

    def test_largest_matrix(self, tracker):
        tracker.record_matrix("small", 2, 2)
        tracker.record_matrix("large", 5, 3)
        assert tracker.summary()["largest_matrix"] == {"piece": "large", "shape": [5, 3]}

    def test_reset(self, tracker):
        tracker.count("ranks")
        tracker.reset()
        assert tracker.summary()["counters"] == {}
