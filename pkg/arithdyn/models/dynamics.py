"""Result records of the degree-dynamics computations."""
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_serializer

from ..core.utils import format_rational
from .algebraic import AlgebraicReal
from .heights import RationalPoint


class DegreeSequence(BaseModel):
    """deg f^0, deg f^1, ... with the primes that attained each entry."""

    model_config = ConfigDict(frozen=True)

    values: List[int]
    primes_used: List[List[int]]
    verified: List[bool]
    requested: int
    truncated: bool = False
    degree_bound: int

    @property
    def length(self) -> int:
        return len(self.values)

    def verified_values(self) -> List[int]:
        """Longest verified prefix of the sequence."""
        prefix = []
        for value, ok in zip(self.values, self.verified):
            if not ok:
                break
            prefix.append(value)
        return prefix

    @classmethod
    def from_values(cls, values: List[int]) -> "DegreeSequence":
        """Wrap a known sequence, every entry marked verified."""
        return cls(
            values=list(values),
            primes_used=[[] for _ in values],
            verified=[True] * len(values),
            requested=len(values) - 1,
            degree_bound=max(values),
        )


class LinearRecurrence(BaseModel):
    """a_n = c_1 a_{n-1} + ... + c_k a_{n-k}."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    order: int
    coefficients: List[Fraction]
    characteristic_polynomial: List[Fraction]
    held_out: int

    @field_serializer("coefficients", "characteristic_polynomial")
    def _rationals(self, values: List[Fraction]):
        return [format_rational(v) for v in values]

    def predict(self, values: List[int], n: int) -> Fraction:
        return sum(c * values[n - i] for i, c in enumerate(self.coefficients, start=1))


class Lambda2Trial(BaseModel):
    """One (shear, target) attempt of the topological degree computation."""

    model_config = ConfigDict(frozen=True)

    shear: int
    target: List[str]
    generic: bool
    count: Optional[int] = None
    reason: Optional[str] = None


class DegreeConfidence(BaseModel):
    """Budgets, primes and trials behind a DynamicalDegrees record."""

    model_config = ConfigDict(frozen=True)

    seed: int
    degree_sequence: DegreeSequence
    recurrence: Optional[LinearRecurrence] = None
    lambda1_certified: bool
    lambda2_trials: List[Lambda2Trial] = Field(default_factory=list)
    growth_ratios: List[str] = Field(default_factory=list)
    growth_tolerance: float
    notes: List[str] = Field(default_factory=list)


class DynamicalDegrees(BaseModel):
    model_config = ConfigDict(frozen=True)

    lambda1: AlgebraicReal
    lambda2: int
    growth_exponent: Optional[int] = None
    small_topological_degree: bool
    bezout_ok: bool
    confidence: DegreeConfidence


class RationalPreimage(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    point: RationalPoint
    multiplicity: int

    @field_serializer("point")
    def _point(self, point: RationalPoint):
        return point.coordinates()


class AlgebraicPreimageGroup(BaseModel):
    """Conjugate non-rational preimages sharing the minimal polynomial of x1 - shear*x2."""

    model_config = ConfigDict(frozen=True)

    minimal_polynomial: List[int]
    polynomial: str
    shear: int
    points: int
    multiplicity: int


class PreimageCount(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    target: RationalPoint
    shear: int
    rational: List[RationalPreimage]
    algebraic: List[AlgebraicPreimageGroup]

    @field_serializer("target")
    def _target(self, point: RationalPoint):
        return point.coordinates()

    @computed_field
    @property
    def total(self) -> int:
        return sum(p.multiplicity for p in self.rational) + sum(
            g.points * g.multiplicity for g in self.algebraic
        )

    @computed_field
    @property
    def distinct(self) -> int:
        return len(self.rational) + sum(g.points for g in self.algebraic)

    def as_multiset(self) -> dict:
        """Rational preimages as {(x1, x2): multiplicity}."""
        return {(p.point.x1, p.point.x2): p.multiplicity for p in self.rational}
