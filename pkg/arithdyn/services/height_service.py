"""Weil heights over Q: global and local heights, exact decompositions,
bad places of a (map, point) pair and the one-step growth constant."""
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, Iterable, List, Optional

import mpmath
from sympy import factorint, multiplicity

from ..core.monitoring import PerformanceMonitor
from ..core.utils import decimal_string, mp_log, working_precision
from ..models.heights import (
    BadPlaces,
    GlobalHeight,
    HeightDecomposition,
    LocalHeight,
    Place,
    RationalPoint,
)
from ..models.polynomials import PolynomialMap
from .polynomial_service import map_degree

logger = logging.getLogger(__name__)


def height_argument(point: RationalPoint) -> int:
    """M = max(|a1|, |a2|, c), so that h(P) = log M."""
    return max(abs(point.a1), abs(point.a2), point.c)


def global_height(point: RationalPoint) -> GlobalHeight:
    M = height_argument(point)
    return GlobalHeight(log_argument=M, decimal=decimal_string(mp_log(M)))


def _valuation(value: Fraction, p: int) -> int:
    if value == 0:
        return 10**18  # v_p(0) = +infinity
    return multiplicity(p, abs(value.numerator)) - multiplicity(p, value.denominator)


def local_height(point: RationalPoint, place: Place) -> LocalHeight:
    """tau_v(P) = log r, r = max(1, |x1|_v, |x2|_v)."""
    if place.is_archimedean:
        r = max(Fraction(1), abs(point.x1), abs(point.x2))
    else:
        exponent = max(0, -_valuation(point.x1, place.prime), -_valuation(point.x2, place.prime))
        r = Fraction(place.prime ** exponent)
    return LocalHeight(place=place, log_argument=r)


def height_decomposition(point: RationalPoint) -> HeightDecomposition:
    """The places with tau_v(P) > 0: primes of c ascending, then the archimedean place."""
    locals_: List[LocalHeight] = [
        LocalHeight(place=Place(p), log_argument=Fraction(p ** e))
        for p, e in sorted(factorint(point.c).items())
    ]
    top = max(abs(point.a1), abs(point.a2))
    if top > point.c:
        locals_.append(LocalHeight(place=Place.archimedean(), log_argument=Fraction(top, point.c)))
    return HeightDecomposition(global_log_argument=height_argument(point), locals=locals_)


def _primes_of(values: Iterable[int]) -> set:
    primes = set()
    for value in values:
        if abs(value) > 1:
            primes.update(factorint(abs(value)))
    return primes


def bad_places(f: PolynomialMap, point: RationalPoint) -> BadPlaces:
    """Archimedean place plus primes of coefficient denominators and of c(P)."""
    primes = _primes_of(c.denominator for c in f.coefficients()) | _primes_of([point.c])
    return BadPlaces(places=[Place(p) for p in sorted(primes)] + [Place.archimedean()])


def growth_constant_argument(f: PolynomialMap) -> Fraction:
    """Exact argument of C_f: (projective height argument of (1, coefficients)) * (max term count).

    For every rational P the argument M of f(P) is at most M(P)^deg f times this.
    """
    coefficients = [Fraction(1)] + [Fraction(c) for c in f.coefficients()]
    common = lcm(*(c.denominator for c in coefficients))
    integers = [int(c * common) for c in coefficients]
    content = 0
    for value in integers:
        content = gcd(content, value)
    projective = max(abs(v) for v in integers) // content
    return Fraction(projective * max(1, f.max_term_count()))


def height_growth_constant(f: PolynomialMap) -> float:
    """C_f with h(f(P)) <= (deg f) h(P) + C_f for all rational P."""
    return float(mp_log(growth_constant_argument(f)))


def orbit_local_heights(points: Iterable[RationalPoint], place: Place) -> List[LocalHeight]:
    return [local_height(point, place) for point in points]


class HeightService:
    """Height computations with timing, as used by the CLI and HTTP layers."""

    def __init__(self, timings: Optional[Dict[str, float]] = None):
        self.timings = timings

    def decompose(self, point: RationalPoint) -> HeightDecomposition:
        with PerformanceMonitor("height_decomposition", timings=self.timings):
            decomposition = height_decomposition(point)
        if decomposition.product() != decomposition.global_log_argument:
            logger.error(f"height decomposition of {point} is not exact")
        return decomposition

    def bad_places(self, f: PolynomialMap, point: RationalPoint) -> BadPlaces:
        with PerformanceMonitor("bad_places", timings=self.timings):
            return bad_places(f, point)

    def orbit_local_heights(self, points: List[RationalPoint], places: Iterable[Place]) -> Dict[str, List[str]]:
        """tau_v(f^n P) as decimals, keyed by place label."""
        with PerformanceMonitor("orbit_local_heights", timings=self.timings):
            return {
                place.label: [decimal_string(mp_log(local.log_argument)) for local in orbit_local_heights(points, place)]
                for place in places
            }

    def growth_bound(self, f: PolynomialMap) -> Dict[str, object]:
        """deg f and C_f, the slope and intercept of the one-step height bound."""
        argument = growth_constant_argument(f)
        with mpmath.workprec(working_precision()):
            return {
                "degree": map_degree(f),
                "constant_argument": int(argument),
                "constant": decimal_string(mp_log(argument)),
            }
