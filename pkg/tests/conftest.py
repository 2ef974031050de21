import os
import tempfile

import numpy as np
import pytest
from fastapi.testclient import TestClient

from arithdyn.data_access.map_repository import MapRepository
from arithdyn.main import app
from arithdyn.services.degree_service import analyze_degrees
from arithdyn.services.parser_service import parse_map

SMALL_TOPOLOGICAL = "y^2*(x*y+1), x*(x*y^3+1)"
SKEW_PRODUCT = "x^2, x*y^2"
HENON = "y, y^2 - x"
IDENTITY = "x, y"


@pytest.fixture
def client():
    """Create a test client for the FastAPI app"""
    return TestClient(app)


@pytest.fixture
def temp_data_dir():
    """Create a temporary directory for test data"""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield temp_dir


@pytest.fixture
def rng():
    """Seeded generator for randomised property tests"""
    return np.random.default_rng(42)


@pytest.fixture(scope="session")
def catalog():
    """All bundled example maps"""
    return MapRepository().get_all()


@pytest.fixture(scope="session")
def catalog_maps(catalog):
    """Catalog maps parsed, keyed by id"""
    return {entry.id: parse_map(entry.expression) for entry in catalog}


@pytest.fixture(scope="session")
def small_topological():
    return parse_map(SMALL_TOPOLOGICAL)


@pytest.fixture(scope="session")
def skew_product():
    return parse_map(SKEW_PRODUCT)


@pytest.fixture(scope="session")
def henon():
    return parse_map(HENON)


@pytest.fixture(scope="session")
def identity():
    return parse_map(IDENTITY)


@pytest.fixture(scope="session")
def small_topological_degrees(small_topological):
    """Dynamical degrees of the non-invertible small-topological-degree map, computed once"""
    return analyze_degrees(small_topological, seed=0)


@pytest.fixture(scope="session")
def skew_product_degrees(skew_product):
    return analyze_degrees(skew_product, seed=0)


@pytest.fixture(scope="session")
def henon_degrees(henon):
    return analyze_degrees(henon, seed=0)


@pytest.fixture(scope="session")
def identity_degrees(identity):
    return analyze_degrees(identity, seed=0)


@pytest.fixture(scope="session")
def catalog_degrees(catalog_maps):
    """Dynamical degrees of every catalog map, computed once per session"""
    return {name: analyze_degrees(f, seed=0) for name, f in catalog_maps.items()}


@pytest.fixture
def clean_env(monkeypatch):
    """Remove ARITHDYN_* variables so settings fall back to defaults"""
    for key in list(os.environ):
        if key.startswith("ARITHDYN_"):
            monkeypatch.delenv(key, raising=False)
    yield
