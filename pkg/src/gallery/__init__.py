"""Built-in ambient models with orbits and their expected decompositions"""
from src.gallery.euclidean import build_euclidean
from src.gallery.fixture import Fixture, export_fixture
from src.gallery.horosphere import build_horosphere
from src.gallery.punctured import build_punctured_euclidean
from src.gallery.registry import BUILDERS, build_fixture, fixture_names

__all__ = [
    "BUILDERS",
    "Fixture",
    "build_euclidean",
    "build_fixture",
    "build_horosphere",
    "build_punctured_euclidean",
    "export_fixture",
    "fixture_names",
]
