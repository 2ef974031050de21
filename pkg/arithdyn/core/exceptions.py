"""Structured errors shared by the services, the CLI and the HTTP layer.

Every error carries a short machine code, a message and a ``details`` dict
that is safe to serialize. The CLI turns them into a single diagnostic line
and an exit code; the FastAPI app turns them into JSON error responses.
"""
import json
from typing import Any, Dict, Optional

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_BUDGET = 4


class ArithDynError(Exception):
    """Base class for all arithdyn errors."""

    code = "error"
    exit_code = EXIT_PRECONDITION
    http_status = 422

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"code": self.code, "message": self.message, "details": self.details}

    def to_diagnostic(self) -> str:
        """Render a single machine-parsable line for stderr."""
        payload = json.dumps(self.details, sort_keys=True, default=str)
        message = " ".join(self.message.split())
        return f"arithdyn: error[{self.code}]: {message} {payload}"


class MapParseError(ArithDynError):
    """Syntax or lexical error in a map or point expression."""

    code = "parse"
    exit_code = EXIT_PARSE
    http_status = 400

    def __init__(self, message: str, line: int = 1, column: int = 1, text: str = ""):
        super().__init__(message, {"line": line, "column": column})
        self.line = line
        self.column = column
        self.text = text


class PreconditionError(ArithDynError):
    """An operation was called outside its domain."""

    code = "precondition"


class DegenerateInputError(PreconditionError):
    code = "degenerate-input"


class NonDominantMapError(PreconditionError):
    code = "non-dominant"


class BadPrimeError(PreconditionError):
    """A coefficient denominator is divisible by the chosen prime."""

    code = "bad-prime"


class GrowthExponentUndefinedError(PreconditionError):
    code = "growth-exponent-undefined"


class NonFiniteFiberError(PreconditionError):
    code = "non-finite-fiber"


class BudgetExceededError(ArithDynError):
    """A bit-size or degree budget ran out before a result was available."""

    code = "budget"
    exit_code = EXIT_BUDGET

    def __init__(self, message: str, partial_degree: Optional[int] = None, **details: Any):
        if partial_degree is not None:
            details["partial_degree"] = partial_degree
        super().__init__(message, details)
        self.partial_degree = partial_degree


class InconsistencyError(ArithDynError):
    """Independent computations that must agree did not."""

    code = "internal-inconsistency"
    exit_code = EXIT_BUDGET


class UndeterminedError(ArithDynError):
    """Randomised or heuristic procedure could not settle on a value."""

    code = "undetermined"
    exit_code = EXIT_BUDGET
