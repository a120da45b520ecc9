import os
import sys

import pytest

# the simulator modules live at the repository root
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), os.pardir)))

from spread_config import GraphSpec, SimConfig, EfficiencyParams  # noqa: E402
from spread_graph import from_edges, generate  # noqa: E402


@pytest.fixture
def path3():
    return from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def small_config():
    '''quick scenario on a 300 node BA network'''
    return SimConfig(graph_spec=GraphSpec(n=300, seed=7), replicates=4, seed=11, max_steps=2000)


@pytest.fixture
def small_graph(small_config):
    return generate(small_config.graph_spec)


def complete_graph(n):
    return from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


@pytest.fixture
def k200():
    return complete_graph(200)


@pytest.fixture
def no_tf_eff():
    # end of spreading rule that never fires within a few hundred steps
    return EfficiencyParams(tf_window=1000)
