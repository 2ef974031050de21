"""Points of the affine plane over Q, places of Q and exact heights."""
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_serializer

from ..core.utils import format_rational, parse_rational


@dataclass(frozen=True)
class RationalPoint:
    """A point (a1/c, a2/c) stored in its unique coprime form with c >= 1."""

    a1: int
    a2: int
    c: int

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("common denominator must be positive")
        if gcd(gcd(self.a1, self.a2), self.c) != 1:
            raise ValueError("point representation is not coprime")

    @classmethod
    def of(cls, x1, x2) -> "RationalPoint":
        x1, x2 = Fraction(x1), Fraction(x2)
        c = x1.denominator * x2.denominator // gcd(x1.denominator, x2.denominator)
        return cls(int(x1 * c), int(x2 * c), c)

    @classmethod
    def parse(cls, text: str) -> "RationalPoint":
        """Parse ``num[/den],num[/den]``."""
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"expected two comma-separated coordinates, got {text!r}")
        return cls.of(parse_rational(parts[0]), parse_rational(parts[1]))

    @property
    def x1(self) -> Fraction:
        return Fraction(self.a1, self.c)

    @property
    def x2(self) -> Fraction:
        return Fraction(self.a2, self.c)

    @property
    def key(self) -> Tuple[int, int, int]:
        return self.a1, self.a2, self.c

    @property
    def bit_size(self) -> int:
        return max(self.a1.bit_length(), self.a2.bit_length(), self.c.bit_length())

    def coordinates(self) -> List:
        return [format_rational(self.x1), format_rational(self.x2)]

    def __str__(self):
        return f"{format_rational(self.x1)},{format_rational(self.x2)}"


@dataclass(frozen=True)
class Place:
    """A place of Q: ``prime=None`` is the archimedean place."""

    prime: Optional[int] = None

    @classmethod
    def archimedean(cls) -> "Place":
        return cls(None)

    @classmethod
    def finite(cls, prime: int) -> "Place":
        from sympy import isprime

        if not isprime(prime):
            raise ValueError(f"{prime} is not prime")
        return cls(prime)

    @classmethod
    def parse(cls, label: str) -> "Place":
        label = label.strip().lower()
        if label in ("inf", "infinity", "oo"):
            return cls.archimedean()
        return cls.finite(int(label))

    @property
    def is_archimedean(self) -> bool:
        return self.prime is None

    @property
    def sort_key(self) -> Tuple[int, int]:
        # primes ascending, archimedean last
        return (1, 0) if self.prime is None else (0, self.prime)

    @property
    def label(self) -> str:
        return "inf" if self.prime is None else str(self.prime)

    def __str__(self):
        return self.label


class LocalHeight(BaseModel):
    """tau_v = log(log_argument) with log_argument >= 1."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, populate_by_name=True)

    place: Place
    log_argument: Fraction = Field(serialization_alias="log_arg")

    @field_serializer("place")
    def _place(self, place: Place) -> str:
        return place.label

    @field_serializer("log_argument")
    def _argument(self, value: Fraction):
        return format_rational(value)


class GlobalHeight(BaseModel):
    """h(P) = log M, M exact, with a decimal rendering of log M."""

    model_config = ConfigDict(frozen=True)

    log_argument: int
    decimal: str


class HeightDecomposition(BaseModel):
    """Exact decomposition of h(P) over the places of Q."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    global_log_argument: int = Field(serialization_alias="global_log_arg")
    locals: List[LocalHeight]

    def product(self) -> Fraction:
        result = Fraction(1)
        for local in self.locals:
            result *= local.log_argument
        return result


class BadPlaces(BaseModel):
    """A finite set of places outside of which the orbit stays integral."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    places: List[Place]

    @field_serializer("places")
    def _places(self, places: List[Place]) -> List[str]:
        return [place.label for place in places]

    @property
    def primes(self) -> List[int]:
        return [place.prime for place in self.places if place.prime is not None]

    def __contains__(self, place: Place) -> bool:
        return place in self.places
