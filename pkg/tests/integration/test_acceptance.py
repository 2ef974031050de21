"""End-to-end checks of the documented example maps at finite truncation."""
import math

import numpy as np
import pytest

from arithdyn.models.heights import RationalPoint
from arithdyn.models.orbits import Verdict
from arithdyn.services.degree_service import count_preimages, degree_sequence
from arithdyn.services.orbit_service import (
    arithmetic_degree,
    canonical_height,
    check_main_theorem,
    classify_orbit,
    functional_equation_residual,
    orbit,
)

pytestmark = pytest.mark.integration


def test_small_topological_dynamical_degrees(small_topological_degrees):
    degrees = small_topological_degrees
    assert degrees.lambda2 == 4
    assert degrees.lambda1.polynomial == "x^2 - 4*x - 3"
    assert abs(float(degrees.lambda1) - 4.645751311) < 1e-6
    assert degrees.lambda1.verify()
    assert degrees.small_topological_degree
    assert degrees.bezout_ok


def test_skew_product_degree_sequence(skew_product, skew_product_degrees):
    seq = degree_sequence(skew_product, 6, seed=0)
    assert seq.values == [1, 3, 8, 20, 48, 112, 256]
    assert all(seq.values[n] == (n + 2) * 2 ** (n - 1) for n in range(1, 7))
    assert skew_product_degrees.growth_exponent == 1
    assert skew_product_degrees.lambda1.is_rational and skew_product_degrees.lambda1.lower == 2
    assert skew_product_degrees.lambda2 == 4


def test_skew_product_heights(skew_product, skew_product_degrees):
    """h(f^n(2, 0)) = 2^n log 2, hhat vanishes and alpha tends to 2."""
    point = RationalPoint.of(2, 0)
    result = orbit(skew_product, point, 12)
    assert [h.log_argument for h in result.heights] == [2 ** (2**n) for n in range(13)]
    estimate = canonical_height(skew_product, point, skew_product_degrees, max_iter=14)
    assert estimate.growth_exponent == 1
    assert estimate.as_float() <= 0.05
    alpha = arithmetic_degree(skew_product, point, 20)
    assert abs(alpha.as_float() - 2) < 0.05
    assert [s.n for s in alpha.samples] == list(range(1, 21))
    assert all(float(s.value) == pytest.approx(2 * math.log(2) ** (1 / s.n), rel=1e-12) for s in alpha.samples)


def test_preimages_of_origin(small_topological):
    count = count_preimages(small_topological, RationalPoint.of(0, 0), seed=0)
    assert count.as_multiset() == {(0, 0): 2, (1, -1): 1, (-1, 1): 1}
    assert count.algebraic == []
    assert count.total == 4
    assert count.distinct == 3


def test_main_theorem_spot_check(small_topological, small_topological_degrees):
    report = check_main_theorem(
        small_topological, RationalPoint.of(2, 0), small_topological_degrees, max_iter=10
    )
    assert report.hhat.as_float() < 1e-3
    assert 1.31 <= report.alpha.as_float() <= 1.52
    assert report.inequality_star_ok is True
    assert report.hypothesis_ok


@pytest.mark.parametrize("point", [(0, 0), (2, 2)])
def test_henon_fixed_points(henon, henon_degrees, point):
    p = RationalPoint.of(*point)
    assert classify_orbit(henon, p).verdict == Verdict.PERIODIC
    assert canonical_height(henon, p, henon_degrees).certified_zero


def _henon_test_points(count: int, seed: int = 42):
    """Integer points with 3 <= |x| < |y| <= 50."""
    rng = np.random.default_rng(seed)
    points = []
    while len(points) < count:
        x = int(rng.integers(3, 50))
        y = int(rng.integers(x + 1, 51))
        sx, sy = (1 if rng.integers(0, 2) else -1 for _ in range(2))
        points.append(RationalPoint.of(sx * x, sy * y))
    return points


@pytest.mark.slow
def test_henon_random_points_escape(henon, henon_degrees):
    for point in _henon_test_points(20):
        assert classify_orbit(henon, point, max_iter=16).verdict == Verdict.HEIGHT_GROWING
        assert canonical_height(henon, point, henon_degrees, max_iter=16).as_float() > 0.1
        residual = functional_equation_residual(henon, point, henon_degrees, 16)
        assert abs(residual.as_float()) < 1e-3
