"""Exact arithmetic on plane polynomial maps: composition, evaluation,
reduction mod p, Jacobians, resultants and canonical printing."""
import logging
from fractions import Fraction
from typing import Dict, List, Optional

from sympy import QQ, ZZ, Poly, Rational, Symbol, isprime

from ..core.config import get_settings
from ..core.exceptions import (
    BadPrimeError,
    BudgetExceededError,
    DegenerateInputError,
    NonDominantMapError,
    PreconditionError,
)
from ..core.monitoring import monitor_performance
from ..core.utils import format_rational
from ..utils.formatting import format_coefficients, format_terms
from ..models.heights import RationalPoint
from ..models.polynomials import (
    NEG_INF,
    VARIABLES,
    BivariatePoly,
    PolynomialMap,
    UnivariatePoly,
)

logger = logging.getLogger(__name__)
settings = get_settings()


class _PowerCache:
    """Memoized powers of one polynomial, built by repeated squaring."""

    def __init__(self, base: BivariatePoly, bit_budget: int):
        self._powers: Dict[int, BivariatePoly] = {0: BivariatePoly.one(base.modulus), 1: base}
        self._bit_budget = bit_budget

    def power(self, k: int) -> BivariatePoly:
        cached = self._powers.get(k)
        if cached is not None:
            return cached
        half = self.power(k // 2)
        result = half * half
        if k % 2:
            result = result * self._powers[1]
        if result.bit_size() > self._bit_budget:
            raise BudgetExceededError(
                "coefficient bit budget exceeded while composing",
                partial_degree=result.total_degree,
                bit_budget=self._bit_budget,
            )
        self._powers[k] = result
        return result


def _same_field(*maps: PolynomialMap) -> Optional[int]:
    moduli = {f.modulus for f in maps}
    if len(moduli) != 1:
        raise PreconditionError("maps over different coefficient fields", {"moduli": sorted(map(str, moduli))})
    return moduli.pop()


def compose_maps(outer: PolynomialMap, inner: PolynomialMap, bit_budget: Optional[int] = None) -> PolynomialMap:
    """Substitute (inner.f1, inner.f2) for (x, y) in the components of ``outer``."""
    modulus = _same_field(outer, inner)
    budget = bit_budget or settings.COEFFICIENT_BIT_BUDGET
    x_powers = _PowerCache(inner.f1, budget)
    y_powers = _PowerCache(inner.f2, budget)
    components = []
    for component in outer:
        acc = BivariatePoly.zero(modulus)
        for (i, j), coefficient in component.element.items():
            acc = acc + (x_powers.power(i) * y_powers.power(j)).mul_ground(coefficient)
        if acc.bit_size() > budget:
            raise BudgetExceededError(
                "coefficient bit budget exceeded while composing",
                partial_degree=acc.total_degree,
                bit_budget=budget,
            )
        components.append(acc)
    return PolynomialMap(*components)


def iterate_map(f: PolynomialMap, n: int, bit_budget: Optional[int] = None) -> PolynomialMap:
    """f^n by repeated composition; f^0 is the identity."""
    if n < 0:
        raise PreconditionError("iteration count must be nonnegative", {"n": n})
    result = PolynomialMap.identity(f.modulus)
    for _ in range(n):
        result = compose_maps(f, result, bit_budget)
    return result


def map_degree(f: PolynomialMap) -> int:
    if f.f1.is_zero and f.f2.is_zero:
        raise DegenerateInputError("the zero map has no degree")
    return max(f.f1.total_degree, f.f2.total_degree)


def _evaluate_component(poly: BivariatePoly, a1: List[int], a2: List[int], c: List[int]) -> Fraction:
    if poly.is_zero:
        return Fraction(0)
    d = poly.total_degree
    terms = poly.terms
    common = poly.denominator_lcm()
    numerator = 0
    for (i, j), coefficient in terms.items():
        numerator += coefficient.numerator * (common // coefficient.denominator) * a1[i] * a2[j] * c[d - i - j]
    return Fraction(numerator, common * c[d])


def _powers(value: int, top: int) -> List[int]:
    result = [1]
    for _ in range(top):
        result.append(result[-1] * value)
    return result


def evaluate_map(f: PolynomialMap, point: RationalPoint, bit_budget: Optional[int] = None) -> RationalPoint:
    """Exact image f(P), evaluated on the homogenized integer representation of P."""
    if f.modulus is not None:
        raise PreconditionError("evaluation needs a map over Q", {"modulus": f.modulus})
    budget = bit_budget or settings.ORBIT_BIT_BUDGET
    top = max((component.total_degree for component in f if not component.is_zero), default=0)
    a1, a2, c = _powers(point.a1, top), _powers(point.a2, top), _powers(point.c, top)
    image = RationalPoint.of(_evaluate_component(f.f1, a1, a2, c), _evaluate_component(f.f2, a1, a2, c))
    if image.bit_size > budget:
        raise BudgetExceededError(
            "point bit budget exceeded", bit_budget=budget, bits=image.bit_size
        )
    return image


def reduce_map_mod_p(f: PolynomialMap, p: int) -> PolynomialMap:
    """Reduce every coefficient of a map over Q modulo the prime p."""
    if not isprime(p):
        raise PreconditionError(f"{p} is not prime", {"p": p})
    if f.modulus is not None:
        raise PreconditionError("map is already over a finite field", {"modulus": f.modulus})
    reduced = []
    for component in f:
        terms = {}
        for monomial, coefficient in component.terms.items():
            if coefficient.denominator % p == 0:
                raise BadPrimeError(
                    f"prime {p} divides a coefficient denominator",
                    {"p": p, "coefficient": format_rational(coefficient)},
                )
            residue = coefficient.numerator * pow(coefficient.denominator, -1, p) % p
            if residue:
                terms[monomial] = residue
        reduced.append(BivariatePoly.from_terms(terms, p))
    return PolynomialMap(*reduced)


def jacobian_determinant(f: PolynomialMap) -> BivariatePoly:
    return f.f1.diff("x") * f.f2.diff("y") - f.f1.diff("y") * f.f2.diff("x")


def jacobian_is_nonzero(f: PolynomialMap) -> bool:
    return not jacobian_determinant(f).is_zero


def to_sympy_poly(poly: BivariatePoly, first: str) -> Poly:
    """View ``poly`` as a sympy Poly with ``first`` as the leading generator.

    Integral polynomials over Q land in ZZ, reductions mod p in GF(p).
    """
    other = VARIABLES[1 - VARIABLES.index(first)]
    swap = first == "y"
    terms = poly.terms
    if poly.modulus is not None:
        options = {"modulus": poly.modulus}
        rep = {m: int(c) for m, c in terms.items()}
    elif poly.denominator_lcm() == 1:
        options = {"domain": ZZ}
        rep = {m: c.numerator for m, c in terms.items()}
    else:
        options = {"domain": QQ}
        rep = {m: Rational(c.numerator, c.denominator) for m, c in terms.items()}
    rep = {((j, i) if swap else (i, j)): c for (i, j), c in rep.items()}
    return Poly.from_dict(rep or {(0, 0): 0}, Symbol(first), Symbol(other), **options)


@monitor_performance()
def resultant_eliminate(p: BivariatePoly, q: BivariatePoly, eliminated_variable: str = "y") -> UnivariatePoly:
    """Res_v(p, q) as a polynomial in the remaining variable.

    The sign is that of the Sylvester determinant with the rows of ``p`` above
    those of ``q``, so Res_y(y^2 - x, y - 1) = 1 - x.
    """
    if eliminated_variable not in VARIABLES:
        raise PreconditionError(f"unknown variable {eliminated_variable!r}")
    for name, poly in (("p", p), ("q", q)):
        degree = poly.degree_in(eliminated_variable)
        if degree is NEG_INF or degree < 1:
            raise PreconditionError(
                f"{name} has degree zero in {eliminated_variable}",
                {"argument": name, "variable": eliminated_variable},
            )
    if p.modulus is not None or q.modulus is not None:
        raise PreconditionError("eliminants are computed over Q")
    P = to_sympy_poly(p, eliminated_variable)
    Q = to_sympy_poly(q, eliminated_variable)
    result = P.resultant(Q)
    other = VARIABLES[1 - VARIABLES.index(eliminated_variable)]
    if not isinstance(result, Poly):
        return UnivariatePoly.from_coefficients([Fraction(str(result))], other)
    return UnivariatePoly(result)


def squarefree_part(r: UnivariatePoly) -> UnivariatePoly:
    """r / gcd(r, r'), monic; constants map to 1."""
    if r.is_zero:
        raise PreconditionError("squarefree part of the zero polynomial")
    if r.degree == 0:
        return UnivariatePoly.from_coefficients([1], r.variable)
    return UnivariatePoly(r.poly.sqf_part().monic())


def format_poly(poly: BivariatePoly) -> str:
    return format_terms(poly.terms)


def format_map(f: PolynomialMap) -> str:
    return f"{format_poly(f.f1)}, {format_poly(f.f2)}"


def format_univariate(r: UnivariatePoly) -> str:
    return format_coefficients(r.coefficients, r.variable)


def require_dominant(f: PolynomialMap) -> None:
    """Raise unless f is a dominant map over Q."""
    if f.modulus is not None:
        raise PreconditionError("dominance is tested over Q", {"modulus": f.modulus})
    if f.f1.is_zero and f.f2.is_zero:
        raise DegenerateInputError("the zero map is not dominant")
    if f.f1.is_constant or f.f2.is_constant:
        raise DegenerateInputError("a map with a constant component is not dominant", {"map": format_map(f)})
    if not jacobian_is_nonzero(f):
        raise NonDominantMapError("Jacobian determinant vanishes identically", {"map": format_map(f)})
