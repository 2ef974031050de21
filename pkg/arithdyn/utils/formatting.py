"""Canonical text rendering of sparse polynomials."""
from fractions import Fraction
from typing import Dict, Sequence, Tuple

from ..core.utils import format_rational

VARIABLES = ("x", "y")


def format_monomial(i: int, j: int, names: Sequence[str] = VARIABLES) -> str:
    factors = []
    for name, exponent in zip(names, (i, j)):
        if exponent == 1:
            factors.append(name)
        elif exponent > 1:
            factors.append(f"{name}^{exponent}")
    return "*".join(factors)


def format_terms(terms: Dict[Tuple[int, int], object], names: Sequence[str] = VARIABLES) -> str:
    """Render exponent-pair terms: total degree descending, then x-degree descending."""
    if not terms:
        return "0"
    pieces = []
    for (i, j) in sorted(terms, key=lambda m: (-(m[0] + m[1]), -m[0])):
        coefficient = Fraction(terms[(i, j)])
        monomial = format_monomial(i, j, names)
        magnitude = abs(coefficient)
        if not monomial:
            body = str(format_rational(magnitude))
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{format_rational(magnitude)}*{monomial}"
        if not pieces:
            pieces.append(f"-{body}" if coefficient < 0 else body)
        else:
            pieces.append(f"- {body}" if coefficient < 0 else f"+ {body}")
    return " ".join(pieces)


def format_coefficients(coefficients: Sequence, variable: str = "x") -> str:
    """Render a univariate polynomial given low-degree-first coefficients."""
    return format_terms({(k, 0): c for k, c in enumerate(coefficients) if c}, (variable, ""))
