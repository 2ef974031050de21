"""Real roots of integer polynomials: isolation, refinement and Sturm certificates.

Sturm's theorem: the number of distinct real roots of p in (a, b] equals
V(a) - V(b), where V(t) counts sign changes of the Sturm sequence at t.
"""
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy import Poly, Rational, Symbol, ZZ

Interval = Tuple[Fraction, Fraction]


def to_rational(value) -> Rational:
    value = Fraction(value)
    return Rational(value.numerator, value.denominator)


def from_rational(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def integer_poly(coefficients: Sequence[int], variable: str = "x") -> Poly:
    """Poly over ZZ from integer coefficients listed low degree first."""
    return Poly(list(reversed([int(c) for c in coefficients])), Symbol(variable), domain=ZZ)


def sign_at(coefficients: Sequence[int], value) -> int:
    """Exact sign of the polynomial at a rational point (Horner)."""
    value = Fraction(value)
    acc = Fraction(0)
    for c in reversed(coefficients):
        acc = acc * value + c
    return (acc > 0) - (acc < 0)


def count_sign_changes(values: Sequence) -> int:
    """Count sign changes in a sequence, ignoring zeros."""
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_variations(sequence: List[Poly], value) -> int:
    point = to_rational(value)
    return count_sign_changes([p.eval(point) for p in sequence])


def sturm_root_count(poly: Poly, a, b) -> int:
    """Number of distinct real roots of ``poly`` in (a, b]."""
    sequence = poly.sturm()
    return sturm_variations(sequence, a) - sturm_variations(sequence, b)


def real_root_intervals(poly: Poly) -> List[Interval]:
    """Disjoint isolating intervals of the distinct real roots, ascending."""
    intervals = poly.intervals()
    return [(from_rational(a), from_rational(b)) for (a, b), _ in intervals]


def largest_root_interval(poly: Poly) -> Optional[Interval]:
    intervals = real_root_intervals(poly)
    if not intervals:
        return None
    return max(intervals, key=lambda interval: interval[1])


def refine_interval(poly: Poly, interval: Interval, width) -> Interval:
    """Shrink an isolating interval of a squarefree ``poly`` to at most ``width``."""
    a, b = interval
    if a == b or b - a <= width:
        return interval
    s, t = poly.refine_root(to_rational(a), to_rational(b), eps=to_rational(width))
    return from_rational(s), from_rational(t)


def certify_interval(poly: Poly, interval: Interval) -> bool:
    """True when the interval provably holds exactly one root of ``poly``.

    A degenerate interval [r, r] is certified by p(r) = 0; otherwise the
    endpoints must carry opposite signs and the Sturm count must be one.
    """
    a, b = interval
    coefficients = [int(c) for c in reversed(poly.all_coeffs())]
    if a == b:
        return sign_at(coefficients, a) == 0
    if sign_at(coefficients, a) * sign_at(coefficients, b) >= 0:
        return False
    return sturm_root_count(poly, a, b) == 1
