"""Entries of the bundled example-map catalog."""
from typing import List, Optional

from pydantic import BaseModel, Field


class ExpectedDegrees(BaseModel):
    """Known dynamical data of a catalog map, used as test oracles."""

    lambda1_polynomial: List[int]  # primitive integer coefficients, low degree first
    lambda2: int
    growth_exponent: Optional[int] = None
    degree_prefix: List[int] = Field(default_factory=list)
    automorphism: bool = False


class ExampleMap(BaseModel):
    id: str
    name: str
    expression: str
    description: Optional[str] = None
    tags: List[str] = Field(default_factory=list)
    points: List[str] = Field(default_factory=list)
    expected: Optional[ExpectedDegrees] = None
