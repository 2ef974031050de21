import json
import os

import pytest

from arithdyn.core.exceptions import PreconditionError
from arithdyn.data_access.json_repository import JsonRepository
from arithdyn.data_access.map_repository import MapRepository
from arithdyn.models.catalog import ExampleMap
from arithdyn.services.parser_service import parse_map, parse_point
from arithdyn.services.polynomial_service import require_dominant

pytestmark = pytest.mark.unit


def test_catalog_ids():
    ids = MapRepository().ids()
    assert len(ids) == len(set(ids))
    assert {"skew-product", "small-topological", "henon", "identity", "swap-square"} <= set(ids)


def test_resolve_is_case_insensitive():
    entry = MapRepository().resolve(" Henon ")
    assert entry.expression == "y, y^2 - x"
    assert entry.expected.automorphism


def test_resolve_unknown_example():
    with pytest.raises(PreconditionError) as exc:
        MapRepository().resolve("no-such-map")
    assert "henon" in exc.value.details["known"]


def test_catalog_entries_are_valid(catalog):
    """Every catalog map parses and is dominant; every listed point parses."""
    for entry in catalog:
        require_dominant(parse_map(entry.expression))
        for point in entry.points:
            parse_point(point)
        if entry.expected is not None:
            assert entry.expected.lambda1_polynomial[-1] > 0
            assert entry.expected.degree_prefix[0] == 1


def test_with_tag():
    repository = MapRepository()
    henon_like = repository.with_tag("henon")
    assert [e.id for e in henon_like][0] == "henon"
    assert len(henon_like) == 3
    assert repository.with_tag("no-such-tag") == []


def test_json_repository_from_directory(temp_data_dir):
    with open(os.path.join(temp_data_dir, "example_maps.json"), "w") as f:
        json.dump({"example_maps": [{"id": "tiny", "name": "Tiny", "expression": "x, y", "tags": ["t"]}]}, f)
    repository = JsonRepository(ExampleMap, "example_maps.json", data_dir=temp_data_dir)
    assert repository.get_by_id("tiny").name == "Tiny"
    assert repository.get_by_id("missing") is None
    assert MapRepository(data_dir=temp_data_dir).ids() == ["tiny"]
