import math
from fractions import Fraction

import pytest

from arithdyn.models.heights import Place, RationalPoint
from arithdyn.services.height_service import (
    HeightService,
    bad_places,
    global_height,
    growth_constant_argument,
    height_argument,
    height_decomposition,
    height_growth_constant,
    local_height,
    orbit_local_heights,
)
from arithdyn.services.parser_service import parse_map

pytestmark = pytest.mark.unit


def test_global_height():
    height = global_height(RationalPoint.of(2, 0))
    assert height.log_argument == 2
    assert height.decimal.startswith("0.693147180559945309417232")
    assert global_height(RationalPoint.of(0, 0)).log_argument == 1
    assert height_argument(RationalPoint.of(Fraction(-7, 3), Fraction(1, 2))) == 14


def test_decomposition_of_half_three():
    """(1/2, 3): one 2-adic contribution and one archimedean."""
    decomposition = height_decomposition(RationalPoint.of(Fraction(1, 2), 3))
    assert decomposition.model_dump(mode="json", by_alias=True) == {
        "global_log_arg": 6,
        "locals": [{"place": "2", "log_arg": 2}, {"place": "inf", "log_arg": 3}],
    }
    assert decomposition.product() == 6


def test_decomposition_without_archimedean_part():
    point = RationalPoint.of(Fraction(-5, 12), Fraction(7, 18))
    assert point.c == 36
    decomposition = height_decomposition(point)
    assert [(str(l.place), l.log_argument) for l in decomposition.locals] == [("2", 4), ("3", 9)]
    assert decomposition.product() == decomposition.global_log_argument == 36


def test_integral_point_has_only_archimedean_part():
    decomposition = height_decomposition(RationalPoint.of(-9, 4))
    assert [(str(l.place), l.log_argument) for l in decomposition.locals] == [("inf", 9)]


def test_origin_has_empty_decomposition():
    decomposition = height_decomposition(RationalPoint.of(0, 0))
    assert decomposition.locals == []
    assert decomposition.product() == 1


@pytest.mark.parametrize("place,expected", [
    (Place(2), 4),
    (Place(3), 9),
    (Place(5), 1),
    (Place.archimedean(), 1),
])
def test_local_height_matches_decomposition(place, expected):
    point = RationalPoint.of(Fraction(-5, 12), Fraction(7, 18))
    assert local_height(point, place).log_argument == expected


def test_archimedean_local_height():
    local = local_height(RationalPoint.of(Fraction(1, 2), 3), Place.archimedean())
    assert local.log_argument == 3
    assert local.model_dump(mode="json", by_alias=True) == {"place": "inf", "log_arg": 3}


def test_place_parse_and_order():
    assert Place.parse("inf").is_archimedean
    assert Place.parse("7") == Place(7)
    with pytest.raises(ValueError):
        Place.parse("9")
    assert sorted([Place.archimedean(), Place(5), Place(2)], key=lambda p: p.sort_key) == [
        Place(2), Place(5), Place.archimedean()
    ]


def test_bad_places():
    f = parse_map("1/6*x^2 + y, x")
    places = bad_places(f, RationalPoint.of(Fraction(1, 5), 1))
    assert places.model_dump(mode="json")["places"] == ["2", "3", "5", "inf"]
    assert places.primes == [2, 3, 5]
    assert Place(5) in places
    assert Place.archimedean() in places
    assert Place(7) not in places


def test_bad_places_of_integral_data(henon):
    assert bad_places(henon, RationalPoint.of(3, 5)).places == [Place.archimedean()]


@pytest.mark.parametrize("expression,argument", [
    ("x^2 + 3*y, x*y", 6),
    ("1/2*x^2, y", 2),
    ("y, y^2 - x", 2),
])
def test_growth_constant_argument(expression, argument):
    assert growth_constant_argument(parse_map(expression)) == argument


def test_height_growth_constant():
    assert height_growth_constant(parse_map("x^2 + 3*y, x*y")) == pytest.approx(math.log(6))


def test_height_service(henon):
    service = HeightService(timings={})
    decomposition = service.decompose(RationalPoint.of(Fraction(1, 2), 3))
    assert decomposition.product() == 6
    assert "height_decomposition" in service.timings
    bound = service.growth_bound(henon)
    assert bound["degree"] == 2
    assert bound["constant_argument"] == 2
    assert bound["constant"].startswith("0.6931471805")


def test_orbit_local_heights():
    points = [RationalPoint.of(Fraction(1, 2), 3), RationalPoint.of(1, 1), RationalPoint.of(Fraction(3, 4), 0)]
    heights = orbit_local_heights(points, Place.finite(2))
    assert [h.log_argument for h in heights] == [2, 1, 4]


def test_height_service_orbit_local_heights():
    service = HeightService(timings={})
    points = [RationalPoint.of(Fraction(1, 2), 3), RationalPoint.of(1, 1)]
    table = service.orbit_local_heights(points, [Place.finite(2), Place.archimedean()])
    assert list(table) == ["2", "inf"]
    assert float(table["2"][0]) == pytest.approx(math.log(2))
    assert float(table["2"][1]) == 0
    assert float(table["inf"][0]) == pytest.approx(math.log(3))
    assert "orbit_local_heights" in service.timings
