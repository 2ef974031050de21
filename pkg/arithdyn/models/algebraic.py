"""Exact real algebraic numbers: defining polynomial plus isolating interval."""
from fractions import Fraction
from typing import List, Tuple

import mpmath
from pydantic import BaseModel, ConfigDict, computed_field, field_serializer

from ..core.utils import format_rational, working_precision
from ..utils.formatting import format_coefficients
from ..utils.real_roots import (
    certify_interval,
    integer_poly,
    refine_interval,
    sign_at,
)


class AlgebraicReal(BaseModel):
    """A real root of ``minimal_polynomial`` isolated by [lower, upper].

    ``minimal_polynomial`` holds primitive integer coefficients, low degree
    first. For certified values it is irreducible over Q and the interval is
    Sturm-certified; a rational value has a linear polynomial and a degenerate
    interval. Uncertified estimates keep a defining polynomial that need not
    be irreducible.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    minimal_polynomial: List[int]
    lower: Fraction
    upper: Fraction
    decimal: str
    error_bound: str
    certified: bool = True

    @field_serializer("lower", "upper")
    def _endpoint(self, value: Fraction):
        return format_rational(value)

    @computed_field
    @property
    def polynomial(self) -> str:
        return format_coefficients(self.minimal_polynomial)

    @classmethod
    def from_rational(cls, value) -> "AlgebraicReal":
        value = Fraction(value)
        with mpmath.workprec(working_precision()):
            decimal = mpmath.nstr(mpmath.mpf(value.numerator) / value.denominator, 30)
        return cls(
            minimal_polynomial=[-value.numerator, value.denominator],
            lower=value,
            upper=value,
            decimal=decimal,
            error_bound="0",
        )

    @property
    def is_rational(self) -> bool:
        return self.lower == self.upper

    @property
    def interval(self) -> Tuple[Fraction, Fraction]:
        return self.lower, self.upper

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def mp_value(self) -> mpmath.mpf:
        with mpmath.workprec(working_precision()):
            return mpmath.mpf(self.decimal)

    def __float__(self) -> float:
        return float(self.mp_value())

    def refined(self, width) -> "AlgebraicReal":
        """Same number with an isolating interval of width at most ``width``."""
        if self.is_rational or self.width <= width:
            return self
        lower, upper = refine_interval(integer_poly(self.minimal_polynomial), self.interval, Fraction(width))
        return self.model_copy(update={"lower": lower, "upper": upper})

    def compare(self, value) -> int:
        """Exact sign of (self - value) for a rational ``value``."""
        value = Fraction(value)
        if self.is_rational:
            return (self.lower > value) - (self.lower < value)
        if value <= self.lower:
            return 1
        if value >= self.upper:
            return -1
        at_value = sign_at(self.minimal_polynomial, value)
        if at_value == 0:
            return 0
        return 1 if at_value == sign_at(self.minimal_polynomial, self.lower) else -1

    def compare_square(self, value: int, max_refinements: int = 64) -> int:
        """Exact sign of (self^2 - value) for a nonnegative self and integer ``value``."""
        if self.is_rational:
            square = self.lower * self.lower
            return (square > value) - (square < value)
        if self.minimal_polynomial == [-value, 0, 1]:
            return 0
        current = self
        for _ in range(max_refinements):
            if current.lower >= 0 and current.lower * current.lower > value:
                return 1
            if current.upper >= 0 and current.upper * current.upper < value:
                return -1
            current = current.refined(current.width / 2**16)
        raise ArithmeticError("comparison did not separate after refinement")

    def power_bounds(self, n: int) -> Tuple[Fraction, Fraction]:
        """Interval containing self^n, for self >= 0."""
        return self.lower ** n, self.upper ** n

    def verify(self) -> bool:
        return self.certified and certify_interval(integer_poly(self.minimal_polynomial), self.interval)
