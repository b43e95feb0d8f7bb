"""
Computation tracking for the homology engine.

This module records per-stage wall times and counters (basis sizes, matrix
shapes, ranks, cache hits) so that long runs can be inspected afterwards.
Reports never include these numbers.
"""

import logging
import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Tuple


logger = logging.getLogger(__name__)


class ComputationTracker:
    """
    Collects stage timings and counters for one engine session.
    """

    def __init__(self):
        self._timings: Dict[str, List[float]] = {}
        self._counters: Dict[str, int] = {}
        self._shapes: List[Tuple[str, int, int]] = []

        logger.debug("Computation tracker initialized")

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        """
        Time a block of work under a stage name.

        Args:
            name: Stage label such as "enumerate" or "rank"
        """
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = time.perf_counter() - start
            self._timings.setdefault(name, []).append(elapsed)
            logger.debug("Stage %s took %.3fs", name, elapsed)

    def count(self, name: str, amount: int = 1) -> None:
        self._counters[name] = self._counters.get(name, 0) + amount

    def record_basis(self, label: str, size: int) -> None:
        self.count("bases")
        self.count("basis_elements", size)
        logger.debug("Basis %s has %d elements", label, size)

    def record_matrix(self, label: str, rows: int, cols: int) -> None:
        self.count("matrices")
        self._shapes.append((label, rows, cols))

    def record_rank(self, rank: int) -> None:
        self.count("ranks")
        self.count("rank_total", rank)

    def merge_counters(self, counters: Dict[str, int]) -> None:
        for name, amount in counters.items():
            self.count(name, amount)

    def summary(self) -> Dict[str, Any]:
        """
        Export timings and counters.

        Returns:
            Dictionary with per-stage call counts and total seconds, counters
            and the largest matrix shape seen
        """
        stages = {
            name: {"calls": len(times), "seconds": round(sum(times), 6)}
            for name, times in sorted(self._timings.items())
        }
        largest = max(self._shapes, key=lambda s: s[1] * s[2], default=None)
        return {
            "stages": stages,
            "counters": dict(sorted(self._counters.items())),
            "largest_matrix": None if largest is None else {"piece": largest[0], "shape": [largest[1], largest[2]]},
        }

    def reset(self) -> None:
        self._timings.clear()
        self._counters.clear()
        self._shapes.clear()
