import json
import logging
import sys
from fractions import Fraction
from typing import Any, Dict, Optional, Union

import mpmath

from .config import get_settings
from .exceptions import ArithDynError

settings = get_settings()

Rational = Union[int, Fraction]


def configure_logging(level: Optional[str] = None) -> None:
    """Configure root logging on stderr.

    Args:
        level: Log level name; defaults to ``Settings.LOG_LEVEL``
    """
    logging.basicConfig(
        level=getattr(logging, (level or settings.LOG_LEVEL).upper(), logging.WARNING),
        format=settings.LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )


def load_json_data(filepath: str) -> Dict[str, Any]:
    """Load data from a JSON file.

    Args:
        filepath: Path to the JSON file

    Returns:
        Dictionary containing the JSON data

    Raises:
        ArithDynError: If the file is not found or cannot be parsed
    """
    try:
        with open(filepath, 'r') as f:
            return json.load(f)
    except FileNotFoundError:
        raise ArithDynError(f"File not found: {filepath}", {"path": filepath})
    except json.JSONDecodeError:
        raise ArithDynError(f"Error parsing JSON file: {filepath}", {"path": filepath})


def format_rational(value: Rational) -> Union[int, str]:
    """Exact JSON form of a rational: an int when integral, else ``"p/q"``."""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``num[/den]`` into a Fraction, rejecting decimals and exponents."""
    text = text.strip()
    num, _, den = text.partition("/")
    try:
        if not num.strip().lstrip("+-").isdigit() or (den and not den.strip().isdigit()):
            raise ValueError(text)
        return Fraction(int(num), int(den) if den else 1)
    except (ValueError, ZeroDivisionError):
        raise ArithDynError(f"Invalid rational literal: {text!r}", {"literal": text})


def working_precision() -> int:
    return settings.DECIMAL_PRECISION_BITS


def mp_log(value: Rational) -> mpmath.mpf:
    """Natural logarithm of a positive rational at the configured precision."""
    value = Fraction(value)
    with mpmath.workprec(working_precision()):
        return mpmath.log(mpmath.mpf(value.numerator)) - mpmath.log(mpmath.mpf(value.denominator))


def mp_rational(value: Rational) -> mpmath.mpf:
    value = Fraction(value)
    with mpmath.workprec(working_precision()):
        return mpmath.mpf(value.numerator) / value.denominator


def decimal_string(value: Any, digits: int = 30) -> str:
    """Deterministic decimal rendering of an mpmath/float value."""
    with mpmath.workprec(working_precision()):
        return mpmath.nstr(mpmath.mpf(value), digits, strip_zeros=False)
