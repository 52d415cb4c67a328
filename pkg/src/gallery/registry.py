"""Fixture lookup by name"""
from functools import lru_cache
from typing import Callable, Dict

from src.gallery.euclidean import build_euclidean
from src.gallery.fixture import Fixture
from src.gallery.horosphere import build_horosphere
from src.gallery.punctured import build_punctured_euclidean
from src.utils.error_handler import FixtureError
from src.utils.logger import get_logger

logger = get_logger()

BUILDERS: Dict[str, Callable[..., Fixture]] = {
    "horosphere": build_horosphere,
    "punctured_euclidean": build_punctured_euclidean,
    "euclidean": build_euclidean,
}


def fixture_names():
    return sorted(BUILDERS)


@lru_cache(maxsize=32)
def build_fixture(name: str, n: int, **options) -> Fixture:
    """Build (once per argument set) the named fixture."""
    builder = BUILDERS.get(name)
    if builder is None:
        raise FixtureError(f"unknown fixture {name!r}; available: {', '.join(fixture_names())}")
    fixture = builder(n, **options)
    logger.info("Built fixture", fixture=name, n=n, algebra_dim=fixture.model.algebra.dim,
                orbit_algebra_dim=fixture.g_sub.dim)
    return fixture
