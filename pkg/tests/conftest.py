import os

import numpy as np
import pytest

from honeyflow.game import DefenderStrategy, GameSpec, VulnerabilityType

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture
def worked_example() -> GameSpec:
    """Two-type fixture: values (10, 20) real / (-5, -10) honey, costs
    (1, 0.5), five real flows each, honey bounds (2, 3)."""
    return GameSpec(
        (
            VulnerabilityType(0, 10.0, -5.0, 5, 2, 1.0),
            VulnerabilityType(1, 20.0, -10.0, 5, 3, 0.5),
        )
    )


@pytest.fixture
def worked_example_strategy() -> DefenderStrategy:
    """The fixture's hand-solved strategy: type 0 mixes one/two honey
    flows 50/50, type 1 always creates three."""
    return DefenderStrategy(
        (np.array([0.0, 0.5, 0.5]), np.array([0.0, 0.0, 0.0, 1.0]))
    )


@pytest.fixture
def worked_example_path() -> str:
    return os.path.join(DATA_DIR, "worked_example.json")


@pytest.fixture
def chain_topology_path() -> str:
    return os.path.join(DATA_DIR, "chain_topology.json")
