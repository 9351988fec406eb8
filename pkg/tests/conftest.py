from pathlib import Path

import numpy as np
import pytest

from pipeline.encoding import Net, RoutingMode, random_spanning_tree
from pipeline.engine import RunConfig, StagePlan
from pipeline.netfile import load_netfile

FIXTURES = Path(__file__).parent / 'fixtures'

TABLE1_PARTICLE = '7 6 0 6 4 1 7 5 1 5 1 2 1 3 0 1 8 1 5 2 2 10.0100'


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def table1() -> Net:
    return load_netfile(FIXTURES / 'table1.net')[0]


@pytest.fixture
def unit_square() -> Net:
    return Net.from_points('square', [(0, 0), (1, 0), (0, 1), (1, 1)])


@pytest.fixture
def six_pin() -> Net:
    return Net.from_points('six', [(0, 0), (7, 3), (2, 9), (11, 11), (5, 1), (9, 6)])


@pytest.fixture
def quick_config():
    """Small budget for tests that only need a few iterations."""
    def make(**overrides) -> RunConfig:
        values = dict(population=6, evaluations=12, seed=3,
                      stage_plan=StagePlan.parse('E,PS'))
        values.update(overrides)
        return RunConfig(**values)
    return make


@pytest.fixture
def random_tree():
    def make(net: Net, mode: RoutingMode = RoutingMode.XARCH, seed: int = 0):
        return random_spanning_tree(net, mode, np.random.default_rng(seed))
    return make


@pytest.fixture
def table1_particle() -> str:
    return TABLE1_PARTICLE
