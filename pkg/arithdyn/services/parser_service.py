"""Parser for polynomial map and point expressions.

Grammar (whitespace is insignificant)::

    map     := expr ',' expr
    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := '-' unary | power
    power   := atom ('^' power)?          right-associative
    atom    := NUMBER ('/' NUMBER)? | 'x' | 'y' | '(' expr ')'

Exponents must evaluate to nonnegative integer constants. A rational literal
is a single token, so ``1/2`` is allowed and ``x/2`` is not.
"""
import logging
from fractions import Fraction
from typing import Iterator, List, NamedTuple, Optional

from ..core.exceptions import ArithDynError, MapParseError
from ..models.heights import RationalPoint
from ..models.polynomials import VARIABLES, BivariatePoly, PolynomialMap

logger = logging.getLogger(__name__)

_OPERATORS = "+-*^(),"
_DIGITS = "0123456789"


class Token(NamedTuple):
    kind: str  # "number", "name", an operator character, or "end"
    text: str
    value: Optional[Fraction]
    line: int
    column: int


def tokenize(text: str) -> Iterator[Token]:
    line, column, i = 1, 1, 0
    while i < len(text):
        char = text[i]
        if char == "\n":
            line, column, i = line + 1, 1, i + 1
            continue
        if char.isspace():
            column, i = column + 1, i + 1
            continue
        start = i
        if char in _DIGITS:
            while i < len(text) and text[i] in _DIGITS:
                i += 1
            numerator = text[start:i]
            denominator = ""
            if i < len(text) and text[i] == "/":
                j = i + 1
                while j < len(text) and text[j] in _DIGITS:
                    j += 1
                if j == i + 1:
                    raise MapParseError("'/' must be followed by a denominator", line, column + i - start, text)
                denominator, i = text[i + 1:j], j
            if i < len(text) and text[i] in ".eE":
                raise MapParseError("non-rational literal: only integers and p/q are allowed", line, column, text)
            if denominator and int(denominator) == 0:
                raise MapParseError("zero denominator in rational literal", line, column, text)
            value = Fraction(int(numerator), int(denominator) if denominator else 1)
            yield Token("number", text[start:i], value, line, column)
        elif char.isalpha() or char == "_":
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
            name = text[start:i]
            if name not in VARIABLES:
                raise MapParseError(f"unknown variable {name!r}: only x and y are allowed", line, column, text)
            yield Token("name", name, None, line, column)
        elif char in _OPERATORS:
            i += 1
            yield Token(char, char, None, line, column)
        elif char == "/":
            raise MapParseError("division is only allowed inside rational literals", line, column, text)
        else:
            raise MapParseError(f"unexpected character {char!r}", line, column, text)
        column += i - start
    yield Token("end", "", None, line, column)


class _Parser:
    """Recursive descent over the token stream, evaluating into exact polynomials."""

    def __init__(self, text: str):
        self.text = text
        self.tokens: List[Token] = list(tokenize(text))
        self.position = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.current
        self.position += 1
        return token

    def error(self, message: str, token: Optional[Token] = None) -> MapParseError:
        token = token or self.current
        found = "end of input" if token.kind == "end" else repr(token.text)
        return MapParseError(f"{message}, found {found}", token.line, token.column, self.text)

    def expect(self, kind: str) -> Token:
        if self.current.kind != kind:
            raise self.error(f"expected {kind!r}" if kind != "end" else "expected end of input")
        return self.advance()

    def parse_map(self) -> PolynomialMap:
        first = self.expr()
        self.expect(",")
        second = self.expr()
        self.expect("end")
        return PolynomialMap(first, second)

    def parse_polynomial(self) -> BivariatePoly:
        poly = self.expr()
        self.expect("end")
        return poly

    def expr(self) -> BivariatePoly:
        result = self.term()
        while self.current.kind in ("+", "-"):
            operator = self.advance().kind
            right = self.term()
            result = result + right if operator == "+" else result - right
        return result

    def term(self) -> BivariatePoly:
        result = self.unary()
        while self.current.kind == "*":
            self.advance()
            result = result * self.unary()
        return result

    def unary(self) -> BivariatePoly:
        if self.current.kind == "-":
            self.advance()
            return -self.unary()
        return self.power()

    def power(self) -> BivariatePoly:
        base = self.atom()
        if self.current.kind != "^":
            return base
        self.advance()
        start = self.current
        exponent = self.power()
        if not exponent.is_constant:
            raise self.error("exponent must be a nonnegative integer constant", start)
        value = Fraction(exponent.constant_term())
        if value.denominator != 1 or value < 0:
            raise self.error("exponent must be a nonnegative integer constant", start)
        return base ** int(value)

    def atom(self) -> BivariatePoly:
        token = self.current
        if token.kind == "number":
            self.advance()
            return BivariatePoly.constant(token.value)
        if token.kind == "name":
            self.advance()
            return BivariatePoly.variable(token.text)
        if token.kind == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        raise self.error("expected a number, x, y or '('")


def parse_map(text: str) -> PolynomialMap:
    """Parse ``"f1, f2"`` into an exact polynomial map."""
    f = _Parser(text).parse_map()
    logger.debug(f"parsed map: {text!r}")
    return f


def parse_polynomial(text: str) -> BivariatePoly:
    return _Parser(text).parse_polynomial()


def parse_point(text: str) -> RationalPoint:
    """Parse ``num[/den],num[/den]``; malformed input raises MapParseError."""
    try:
        return RationalPoint.parse(text)
    except (ValueError, ArithDynError) as e:
        message = e.message if isinstance(e, ArithDynError) else str(e)
        raise MapParseError(f"invalid point {text!r}: {message}", 1, 1, text)
