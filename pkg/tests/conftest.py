"""
Shared fixtures: seeded generators, small lattices and a run config sized
for seconds-long job runs.
"""

import numpy as np
import pytest

from src.config import RunConfig
from src.lattice import Configuration, TorusGeometry


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def torus4():
    return TorusGeometry(4)


@pytest.fixture
def random_config(torus4, rng):
    """Half-filled 4x4 torus with continuous angles."""
    occupancy = np.zeros(torus4.n_sites, dtype=np.uint8)
    occupancy[rng.choice(torus4.n_sites, size=8, replace=False)] = 1
    return Configuration.from_arrays(torus4, occupancy, rng.uniform(0, 2 * np.pi, torus4.n_sites))


def _small_run_config(output, **sections) -> RunConfig:
    data = {
        "model": {"side": 8, "horizon": 0.01, "replicas": 2, "seed": 7},
        "profile": {"preset": "cosine"},
        "observation": {
            "times": [0.0, 0.005, 0.01],
            "eps": 0.125,
            "bins": 4,
            "cells": 4,
            "cluster_sizes": [1, 2],
        },
        "pde": {"cells": 8, "bins": 4, "residual_slices": 11},
        "selfdiff": {"side": 8, "horizon": 0.01, "replicas": 4},
        "compare": {"sides": [8, 16]},
        "exactcheck": {"irreducibility_pairs": 5, "martingale_replicas": 100, "martingale_sides": [8, 16, 32]},
        "paths": {"output": str(output)},
    }
    for name, values in sections.items():
        data[name] = {**data.get(name, {}), **values}
    return RunConfig.from_dict(data)


@pytest.fixture
def make_config(tmp_path):
    """Factory: make_config(model={"side": 16}) overrides single keys."""
    return lambda **sections: _small_run_config(tmp_path / "run", **sections)


@pytest.fixture
def run_config(make_config):
    return make_config()
