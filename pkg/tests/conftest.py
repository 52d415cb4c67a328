"""Pytest Configuration and Fixtures"""
import os
import sys

import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cli.config import RunConfig  # noqa: E402
from src.cli.runner import prepare  # noqa: E402
from src.gallery import build_fixture  # noqa: E402
from src.linalg.scalar import ScalarMode  # noqa: E402


@pytest.fixture(scope="session")
def project_root():
    """Get project root directory"""
    return os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture(scope="session")
def horosphere():
    """Horospheres in hyperbolic 3-space"""
    return build_fixture("horosphere", 3)


@pytest.fixture(scope="session")
def punctured():
    """Round spheres in R^3 minus the origin"""
    return build_fixture("punctured_euclidean", 3)


@pytest.fixture(scope="session")
def euclidean():
    """A flat plane in R^3"""
    return build_fixture("euclidean", 3, k=2)


@pytest.fixture(scope="session")
def horosphere_run():
    """Exact decomposition for the horosphere fixture"""
    return prepare(RunConfig(example="horosphere", n=3))


@pytest.fixture(scope="session")
def horosphere_float_run():
    return prepare(RunConfig(example="horosphere", n=3, mode=ScalarMode.FLOAT))


@pytest.fixture(scope="session")
def punctured_run():
    return prepare(RunConfig(example="punctured_euclidean", n=3))


@pytest.fixture(scope="session")
def punctured_float_run():
    return prepare(RunConfig(example="punctured_euclidean", n=3, mode=ScalarMode.FLOAT))


@pytest.fixture(scope="session")
def euclidean_run():
    return prepare(RunConfig(example="euclidean", n=3, k=2))


# Markers
def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line(
        "markers", "integration: marks tests as integration tests"
    )
