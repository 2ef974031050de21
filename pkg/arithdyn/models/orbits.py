"""Orbit records and the estimates derived from them."""
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_serializer

from ..core.config import get_settings
from .algebraic import AlgebraicReal
from .heights import GlobalHeight, RationalPoint

settings = get_settings()

# =============================================================================
# ORBITS
# =============================================================================


class StopReason(str, Enum):
    COMPLETED = "completed"
    BUDGET_EXCEEDED = "budget-exceeded"
    CYCLE_DETECTED = "cycle-detected"


class Orbit(BaseModel):
    """P, f(P), ..., f^n(P) with exact heights.

    On a detected cycle the repeated point is stored last, so that
    ``points[preperiod] == points[preperiod + period]``.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    points: List[RationalPoint]
    heights: List[GlobalHeight]
    stop_reason: StopReason
    preperiod: Optional[int] = None
    period: Optional[int] = None
    requested: int

    @field_serializer("points")
    def _points(self, points: List[RationalPoint]):
        limit = settings.EXACT_OUTPUT_BITS
        return [point.coordinates() if point.bit_size <= limit else None for point in points]

    @field_serializer("heights")
    def _heights(self, heights: List[GlobalHeight]):
        return [height.decimal for height in heights]

    @property
    def last_index(self) -> int:
        return len(self.points) - 1

    @property
    def is_cycle(self) -> bool:
        return self.stop_reason == StopReason.CYCLE_DETECTED

    def index_at(self, n: int) -> Optional[int]:
        """Stored index holding f^n(P); cycles are extended periodically."""
        if n <= self.last_index:
            return n
        if self.is_cycle:
            return self.preperiod + (n - self.preperiod) % self.period
        return None

    def height_at(self, n: int) -> Optional[GlobalHeight]:
        index = self.index_at(n)
        return None if index is None else self.heights[index]

    def rows(self) -> List[Dict[str, Any]]:
        """One table row per stored point; huge coordinates are left out."""
        limit = settings.EXACT_OUTPUT_BITS
        rows = []
        for n, (point, height) in enumerate(zip(self.points, self.heights)):
            exact = point.bit_size <= limit
            x1, x2 = point.coordinates() if exact else (None, None)
            rows.append(
                {
                    "n": n,
                    "x1": None if x1 is None else str(x1),
                    "x2": None if x2 is None else str(x2),
                    "height": height.decimal,
                    "height_bits": height.log_argument.bit_length(),
                }
            )
        return rows


# =============================================================================
# ESTIMATES
# =============================================================================


class CanonicalHeightEstimate(BaseModel):
    """hhat_N = h(f^N P) / (N^l lambda1^N) at the last usable N."""

    model_config = ConfigDict(frozen=True)

    value: str
    error_bound: str
    iterations_used: int
    tail_delta: Optional[str] = None
    lambda1: AlgebraicReal
    growth_exponent: int
    certified_zero: bool = False
    converged: bool = False
    stop_reason: StopReason

    def as_float(self) -> float:
        return float(self.value)


class FunctionalEquationResidual(BaseModel):
    """hhat_N(f(P)) - lambda1 * hhat_N(P) with one N for both terms."""

    model_config = ConfigDict(frozen=True)

    value: str
    error_bound: str
    iterations_used: int
    certified_zero: bool = False

    def as_float(self) -> float:
        return float(self.value)


class ArithmeticDegreeSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    value: str


class ArithmeticDegreeEstimate(BaseModel):
    """max(1, h(f^n P))^(1/n) over the computed window."""

    model_config = ConfigDict(frozen=True)

    samples: List[ArithmeticDegreeSample]
    extrapolated: str
    window: List[int]
    bounded_orbit: bool = False

    def as_float(self) -> float:
        return float(self.extrapolated)


# =============================================================================
# CLASSIFICATION AND THEOREM CHECKS
# =============================================================================


class Verdict(str, Enum):
    PERIODIC = "periodic"
    HEIGHT_GROWING = "height-growing"
    UNDETERMINED = "undetermined"


class OrbitClass(BaseModel):
    model_config = ConfigDict(frozen=True)

    verdict: Verdict
    preperiod: Optional[int] = None
    period: Optional[int] = None
    rate: Optional[str] = None
    note: Optional[str] = None
    ratios: List[str] = Field(default_factory=list)


class MainTheoremReport(BaseModel):
    """Functional equation, inequality (*) and the automorphism dichotomy for one point."""

    model_config = ConfigDict(frozen=True)

    hypothesis_ok: bool
    hhat: Optional[CanonicalHeightEstimate] = None
    alpha: ArithmeticDegreeEstimate
    inequality_star_ok: Optional[bool] = None
    functional_equation_residual: Optional[FunctionalEquationResidual] = None
    classification: OrbitClass
    automorphism: bool
    automorphism_dichotomy_ok: Optional[bool] = None
    conjecture_applicable: bool = False
    conjecture_ok: Optional[bool] = None
    zero_threshold: float
    notes: List[str] = Field(default_factory=list)
