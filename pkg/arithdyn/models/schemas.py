"""Request and report schemas shared by the CLI and the HTTP API."""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .dynamics import DynamicalDegrees
from .heights import GlobalHeight
from .orbits import MainTheoremReport, StopReason

# =============================================================================
# REQUESTS
# =============================================================================


class CommandOptions(BaseModel):
    """Inputs of one subcommand; every field mirrors a CLI flag."""

    model_config = ConfigDict(extra="forbid")

    map: Optional[str] = Field(None, description="Map expression 'f1, f2'")
    example: Optional[str] = Field(None, description="Catalog id used instead of map")
    points: List[str] = Field(default_factory=list, description="Points 'num[/den],num[/den]'")
    max_iter: Optional[int] = Field(None, ge=0)
    bit_budget: Optional[int] = Field(None, ge=1)
    degree_bound: Optional[int] = Field(None, ge=1)
    tol: Optional[float] = Field(None, gt=0)
    seed: Optional[int] = None
    trials: Optional[int] = Field(None, ge=1)
    height_bound: Optional[float] = Field(None, gt=0)
    zero_threshold: Optional[float] = Field(None, gt=0)
    timing: bool = False

    @model_validator(mode="after")
    def _one_map_source(self):
        if self.map is not None and self.example is not None:
            raise ValueError("give either map or example, not both")
        return self


# =============================================================================
# REPORTS
# =============================================================================


class Meta(BaseModel):
    """Reproducibility block: schema, seed, budgets and optional timings."""

    schema_version: str = Field(serialization_alias="schema")
    version: str
    seed: int
    budgets: Dict[str, Any]
    timing: Optional[Dict[str, str]] = None


class PointAnalysis(BaseModel):
    model_config = ConfigDict(frozen=True)

    point: List
    height: GlobalHeight
    stop_reason: StopReason
    iterations: int
    preperiod: Optional[int] = None
    period: Optional[int] = None
    main_theorem: MainTheoremReport


class TheoremSummary(BaseModel):
    """Verdicts over all analysed points."""

    hypothesis_ok: bool
    lambda1_polynomial: str
    lambda2: int
    inequality_star_ok: Optional[bool] = None
    automorphism: bool
    notes: List[str] = Field(default_factory=list)


class AnalysisReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    map: str
    degrees: DynamicalDegrees
    points: List[PointAnalysis]
    report: TheoremSummary
