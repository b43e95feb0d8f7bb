"""
Shared fixtures for the hyperoperad tests.
"""

import pytest

from hyperoperad.config import get_settings
from hyperoperad.homology import HomologyEngine
from hyperoperad.models import Flavor, Hypergraph, black, white
from hyperoperad.observability import ComputationTracker
from hyperoperad.operad import com_corolla, delta_edge, edge_graph, hyperedge


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: minutes-scale acceptance sweeps")


@pytest.fixture
def settings(tmp_path):
    """Settings with a private cache directory."""
    return get_settings(cache=tmp_path / "cache", workers=1)


@pytest.fixture
def engine(settings):
    """A homology engine on the private cache."""
    return HomologyEngine(settings, ComputationTracker())


@pytest.fixture
def fbvh():
    return Flavor.fbvh()


@pytest.fixture
def forest():
    return Flavor.forest()


@pytest.fixture
def edge():
    """The edge between whites 0 and 1."""
    return delta_edge()


@pytest.fixture
def corolla3():
    return com_corolla(3)


@pytest.fixture
def path3():
    return edge_graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def star3():
    """The hyperedge on whites 0, 1, 2."""
    return hyperedge(0, 1, 2)


@pytest.fixture
def tripod():
    """One black vertex joined by edges to whites 0, 1, 2."""
    return Hypergraph(
        flavor=Flavor.fbvh(),
        arity=3,
        blacks=1,
        edges=((black(0), white(0)), (black(0), white(1)), (black(0), white(2))),
    )
