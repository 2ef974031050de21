"""Exact polynomial values: bivariate polynomials, plane maps and univariate eliminants.

Bivariate polynomials are sparse: they wrap sympy ``PolyElement`` objects, which
are dicts keyed by exponent pairs. Coefficients live either in ``QQ`` or in a
prime field ``GF(p)``. All values are immutable once constructed.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from math import lcm
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import sympy
from sympy import GF, QQ, Poly, Symbol
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

VARIABLES = ("x", "y")
Monomial = Tuple[int, int]
Coefficient = Union[Fraction, int]


@total_ordering
class _MinusInfinity:
    """Degree of the zero polynomial: below every integer, never added to one."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        if isinstance(other, int):
            return True
        if other is self:
            return False
        return NotImplemented

    def __hash__(self):
        return hash("-inf-degree")

    def __add__(self, other):
        raise TypeError("the zero polynomial has degree -inf; it cannot enter degree arithmetic")

    __radd__ = __add__
    __mul__ = __add__
    __rmul__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __repr__(self):
        return "-inf"


NEG_INF = _MinusInfinity()
Degree = Union[int, _MinusInfinity]


@lru_cache(maxsize=None)
def bivariate_ring(modulus: Optional[int] = None) -> PolyRing:
    """Sparse ring Q[x, y] or GF(p)[x, y]."""
    domain = QQ if modulus is None else GF(modulus)
    return PolyRing(VARIABLES, domain, lex)


def to_fraction(value) -> Fraction:
    """Convert a QQ/ZZ domain element or sympy Rational to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    numerator = getattr(value, "numerator", None)
    if numerator is None:
        numerator, denominator = value.p, value.q
    else:
        denominator = value.denominator
    return Fraction(int(numerator), int(denominator))


def to_qq(value: Coefficient):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


class BivariatePoly:
    """Immutable sparse polynomial in x, y over Q or a prime field."""

    __slots__ = ("_element", "_modulus")

    def __init__(self, element: PolyElement, modulus: Optional[int] = None):
        self._element = element
        self._modulus = modulus

    # construction

    @classmethod
    def from_terms(cls, terms: Mapping[Monomial, Coefficient], modulus: Optional[int] = None) -> "BivariatePoly":
        ring = bivariate_ring(modulus)
        if modulus is None:
            data = {tuple(m): to_qq(c) for m, c in terms.items() if c != 0}
        else:
            data = {tuple(m): ring.domain(int(c) % modulus) for m, c in terms.items() if int(c) % modulus}
        return cls(ring.from_dict(data), modulus)

    @classmethod
    def zero(cls, modulus: Optional[int] = None) -> "BivariatePoly":
        return cls(bivariate_ring(modulus).zero, modulus)

    @classmethod
    def one(cls, modulus: Optional[int] = None) -> "BivariatePoly":
        return cls(bivariate_ring(modulus).one, modulus)

    @classmethod
    def constant(cls, value: Coefficient, modulus: Optional[int] = None) -> "BivariatePoly":
        return cls.from_terms({(0, 0): value}, modulus)

    @classmethod
    def variable(cls, name: str, modulus: Optional[int] = None) -> "BivariatePoly":
        return cls(bivariate_ring(modulus).gens[VARIABLES.index(name)], modulus)

    # structure

    @property
    def element(self) -> PolyElement:
        return self._element

    @property
    def ring(self) -> PolyRing:
        return self._element.ring

    @property
    def modulus(self) -> Optional[int]:
        return self._modulus

    @property
    def is_zero(self) -> bool:
        return not self._element

    @property
    def terms(self) -> Dict[Monomial, Coefficient]:
        """Exponent pair -> nonzero coefficient (Fraction over Q, int in [0, p) mod p)."""
        if self._modulus is None:
            return {m: to_fraction(c) for m, c in self._element.items()}
        return {m: int(c) % self._modulus for m, c in self._element.items()}

    def __len__(self) -> int:
        return len(self._element)

    @property
    def total_degree(self) -> Degree:
        if self.is_zero:
            return NEG_INF
        return max(i + j for i, j in self._element.keys())

    def degree_in(self, name: str) -> Degree:
        if self.is_zero:
            return NEG_INF
        k = VARIABLES.index(name)
        return max(m[k] for m in self._element.keys())

    @property
    def is_constant(self) -> bool:
        return all(m == (0, 0) for m in self._element.keys())

    def constant_term(self) -> Coefficient:
        return self.terms.get((0, 0), 0)

    def denominator_lcm(self) -> int:
        if self._modulus is not None:
            return 1
        return lcm(1, *(c.denominator for c in self.terms.values()))

    def bit_size(self) -> int:
        """Total bits of all numerators and denominators."""
        if self._modulus is not None:
            return len(self._element) * self._modulus.bit_length()
        return sum(
            c.numerator.bit_length() + c.denominator.bit_length() for c in self.terms.values()
        )

    # ring operations

    def _wrap(self, element: PolyElement) -> "BivariatePoly":
        return BivariatePoly(element, self._modulus)

    def _coerce(self, other) -> PolyElement:
        if isinstance(other, BivariatePoly):
            if other._modulus != self._modulus:
                raise ValueError("polynomials over different coefficient fields")
            return other._element
        if isinstance(other, (int, Fraction)):
            return BivariatePoly.constant(other, self._modulus)._element
        return NotImplemented

    def __add__(self, other):
        rhs = self._coerce(other)
        return NotImplemented if rhs is NotImplemented else self._wrap(self._element + rhs)

    __radd__ = __add__

    def __sub__(self, other):
        rhs = self._coerce(other)
        return NotImplemented if rhs is NotImplemented else self._wrap(self._element - rhs)

    def __rsub__(self, other):
        lhs = self._coerce(other)
        return NotImplemented if lhs is NotImplemented else self._wrap(lhs - self._element)

    def __mul__(self, other):
        rhs = self._coerce(other)
        return NotImplemented if rhs is NotImplemented else self._wrap(self._element * rhs)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self._element)

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative exponent")
        return self._wrap(self._element ** exponent)

    def mul_ground(self, coefficient) -> "BivariatePoly":
        """Multiply by a domain element of this polynomial's ring."""
        return self._wrap(self._element.mul_ground(coefficient))

    def diff(self, name: str) -> "BivariatePoly":
        return self._wrap(self._element.diff(VARIABLES.index(name)))

    def __eq__(self, other):
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self._modulus == other._modulus and self.terms == other.terms

    def __hash__(self):
        return hash((self._modulus, frozenset(self.terms.items())))

    def __repr__(self):
        field = "QQ" if self._modulus is None else f"GF({self._modulus})"
        return f"BivariatePoly({self._element.as_expr()}, {field})"


@dataclass(frozen=True)
class PolynomialMap:
    """A plane polynomial map (f1, f2): images of the coordinates x, y."""

    f1: BivariatePoly
    f2: BivariatePoly

    def __post_init__(self):
        if self.f1.modulus != self.f2.modulus:
            raise ValueError("map components over different coefficient fields")

    @classmethod
    def identity(cls, modulus: Optional[int] = None) -> "PolynomialMap":
        return cls(BivariatePoly.variable("x", modulus), BivariatePoly.variable("y", modulus))

    @classmethod
    def from_terms(cls, first: Mapping[Monomial, Coefficient], second: Mapping[Monomial, Coefficient],
                   modulus: Optional[int] = None) -> "PolynomialMap":
        return cls(BivariatePoly.from_terms(first, modulus), BivariatePoly.from_terms(second, modulus))

    @property
    def modulus(self) -> Optional[int]:
        return self.f1.modulus

    @property
    def components(self) -> Tuple[BivariatePoly, BivariatePoly]:
        return self.f1, self.f2

    def __iter__(self) -> Iterator[BivariatePoly]:
        return iter((self.f1, self.f2))

    def coefficients(self) -> List[Coefficient]:
        return [c for component in self for c in component.terms.values()]

    def max_term_count(self) -> int:
        return max(len(self.f1), len(self.f2))


class UnivariatePoly:
    """Immutable univariate polynomial over Q, stored as a sympy ``Poly``."""

    __slots__ = ("_poly",)

    def __init__(self, poly: Poly):
        if len(poly.gens) != 1:
            raise ValueError("univariate polynomial expected")
        self._poly = poly if poly.get_domain() == QQ else poly.set_domain(QQ)

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[Coefficient], variable: str = "x") -> "UnivariatePoly":
        """Build from coefficients listed low degree first."""
        coeffs = [sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) for c in coefficients]
        return cls(Poly(list(reversed(coeffs)) or [0], Symbol(variable), domain=QQ))

    @property
    def poly(self) -> Poly:
        return self._poly

    @property
    def variable(self) -> str:
        return str(self._poly.gen)

    @property
    def coefficients(self) -> List[Fraction]:
        """Coefficients low degree first; empty for the zero polynomial."""
        if self._poly.is_zero:
            return []
        return [to_fraction(c) for c in reversed(self._poly.all_coeffs())]

    @property
    def degree(self) -> Degree:
        return NEG_INF if self._poly.is_zero else int(self._poly.degree())

    @property
    def is_zero(self) -> bool:
        return bool(self._poly.is_zero)

    def monic(self) -> "UnivariatePoly":
        return UnivariatePoly(self._poly.monic()) if not self.is_zero else self

    def evaluate(self, value: Coefficient) -> Fraction:
        value = Fraction(value)
        return to_fraction(self._poly.eval(sympy.Rational(value.numerator, value.denominator)))

    def __eq__(self, other):
        if not isinstance(other, UnivariatePoly):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(tuple(self.coefficients))

    def __repr__(self):
        return f"UnivariatePoly({self._poly.as_expr()})"
