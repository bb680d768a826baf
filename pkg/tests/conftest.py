import json
from pathlib import Path

import pytest

from zakframe import NumericsConfig, WindowSpec, assemble_constants, constants_from_values

# Smaller grids than the defaults; plenty for the windows used here
FAST = {"constants_grid": 1024, "c_grid": 256}


@pytest.fixture(scope="session")
def fast_config() -> NumericsConfig:
    return NumericsConfig(**FAST)


@pytest.fixture
def fast_config_file(tmp_path) -> Path:
    p = tmp_path / "numerics.json"
    p.write_text(json.dumps(FAST), encoding="utf-8")
    return p


@pytest.fixture(scope="session")
def theorem_constants():
    """K = 1, q = 1/3, C = 10: the hand-checked threshold example (m = 907)."""
    return constants_from_values(1.0, 1 / 3, 10.0)


@pytest.fixture(scope="session")
def bspline2_constants(fast_config):
    return assemble_constants(WindowSpec.bspline(2), fast_config)


@pytest.fixture(scope="session")
def gaussian_constants(fast_config):
    return assemble_constants(WindowSpec.gaussian(), fast_config)
