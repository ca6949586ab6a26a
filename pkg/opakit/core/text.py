"""
Text form of scalars and polynomials.

Grammar (whitespace is ignored)::

    expr   := term ((+|-) term)*
    term   := factor ((*|/) factor | factor)*
    factor := (+|-) factor | atom [^ INT]
    atom   := NUMBER | s2 | i | z<k> | ( expr [, expr] )

Integers combine with "/" into exact rationals; a literal with a decimal
point or exponent is a double and makes the whole polynomial float-mode.
"s2" is sqrt(2), "(a,b)" is the complex number a + i b, and "z1".."zd" are
the variables. Division is only allowed by non-zero constants.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional, Union

from .errors import ParseError
from .mpoly import Coefficient, MPoly, MultiIndex
from .scalar import I, SQRT2, ExactScalar, QuadExt

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<float>\d+\.\d*(?:[eE][+-]?\d+)?|\d*\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)
  | (?P<int>\d+)
  | (?P<sqrt2>s2|sqrt2|√2)
  | (?P<var>z\d+)
  | (?P<imag>i)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass
class _Token:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"Unexpected character {text[pos]!r}", pos, text)
        kind = match.lastgroup or ""
        if kind != "ws":
            tokens.append(_Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, d: Optional[int]) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0
        indices = [int(t.value[1:]) for t in self.tokens if t.kind == "var"]
        for t in self.tokens:
            if t.kind == "var" and int(t.value[1:]) < 1:
                raise ParseError("Variables are numbered from z1", t.pos, text)
        top = max(indices, default=1)
        if d is not None and top > d:
            bad = next(t for t in self.tokens if t.kind == "var" and int(t.value[1:]) > d)
            raise ParseError(f"Variable {bad.value} exceeds d={d}", bad.pos, text)
        self.d = d if d is not None else top
        self.has_float = False

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, value: str) -> None:
        if self.current.value != value:
            raise ParseError(f"Expected {value!r}", self.current.pos, self.text)
        self.advance()

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.current.pos, self.text)

    def parse(self) -> MPoly:
        if self.current.kind == "end":
            raise self.error("Empty input")
        result = self.expr()
        if self.current.kind != "end":
            raise self.error(f"Unexpected {self.current.value!r}")
        return result

    def expr(self) -> MPoly:
        result = self.term()
        while self.current.kind == "op" and self.current.value in ("+", "-"):
            op = self.advance().value
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def _starts_atom(self) -> bool:
        token = self.current
        return token.kind in ("int", "float", "sqrt2", "var", "imag") or token.value == "("

    def term(self) -> MPoly:
        result = self.factor()
        while True:
            token = self.current
            if token.kind == "op" and token.value == "*":
                self.advance()
                result = result * self.factor()
            elif token.kind == "op" and token.value == "/":
                self.advance()
                divisor = self.factor()
                if not divisor.is_constant():
                    raise ParseError("Division by a non-constant", token.pos, self.text)
                if divisor.is_zero():
                    raise ParseError("Division by zero", token.pos, self.text)
                result = result / divisor.constant_term()
            elif self._starts_atom():
                result = result * self.factor()
            else:
                return result

    def factor(self) -> MPoly:
        token = self.current
        if token.kind == "op" and token.value in ("+", "-"):
            self.advance()
            inner = self.factor()
            return -inner if token.value == "-" else inner
        base = self.atom()
        if self.current.kind == "op" and self.current.value == "^":
            self.advance()
            exp_token = self.current
            if exp_token.kind != "int":
                raise self.error("Exponent must be a non-negative integer")
            self.advance()
            return base ** int(exp_token.value)
        return base

    def atom(self) -> MPoly:
        token = self.advance()
        if token.kind == "int":
            return MPoly.constant(int(token.value), self.d)
        if token.kind == "float":
            self.has_float = True
            return MPoly.constant(float(token.value), self.d)
        if token.kind == "sqrt2":
            return MPoly.constant(SQRT2, self.d)
        if token.kind == "imag":
            return MPoly.constant(I, self.d)
        if token.kind == "var":
            return MPoly.variable(int(token.value[1:]) - 1, self.d)
        if token.kind == "op" and token.value == "(":
            first = self.expr()
            if self.current.kind == "op" and self.current.value == ",":
                comma = self.advance()
                second = self.expr()
                if not (first.is_constant() and second.is_constant()):
                    raise ParseError(
                        "Complex literals need constant parts", comma.pos, self.text
                    )
                first = first + second * MPoly.constant(I, self.d)
            self.expect(")")
            return first
        raise ParseError(
            f"Unexpected {token.value or 'end of input'!r}", token.pos, self.text
        )


def parse_poly(text: str, d: Optional[int] = None) -> MPoly:
    """
    Parse the text form of a polynomial.

    Args:
        text: Polynomial text, for example "2 - z1 - z2" or "(7+2*s2*z1)/12"
        d: Number of variables; inferred from the largest z-index when omitted

    Returns:
        The parsed polynomial, float-mode if any decimal literal was used

    Raises:
        ParseError: With the character position of the first problem
    """
    parser = _Parser(text, d)
    poly = parser.parse()
    if parser.has_float:
        poly = poly.to_float_poly()
    return poly


def parse_scalar(text: str) -> Coefficient:
    """Parse a constant expression into an ExactScalar (or complex for decimals)."""
    poly = parse_poly(text, d=1)
    if not poly.is_constant():
        raise ParseError("Expected a constant", 0, text)
    return poly.constant_term()


def format_scalar(c: Coefficient) -> str:
    """Text form of one coefficient; parse_scalar inverts it."""
    if isinstance(c, ExactScalar):
        return str(c)
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    return f"({c.real!r},{c.imag!r})"


def _format_monomial(m: MultiIndex) -> str:
    parts = []
    for i, e in enumerate(m, start=1):
        if e == 1:
            parts.append(f"z{i}")
        elif e > 1:
            parts.append(f"z{i}^{e}")
    return "*".join(parts)


def _needs_parens(c: Union[ExactScalar, complex]) -> bool:
    if isinstance(c, ExactScalar):
        if not c.is_real():
            return False  # already "(re,im)"
        re_part: QuadExt = c.re
        return bool(re_part.a) and bool(re_part.b)
    return False


def _is_negative(c: Coefficient) -> bool:
    if isinstance(c, ExactScalar):
        return c.is_real() and c.real_sign() < 0
    c = complex(c)
    return c.imag == 0 and c.real < 0


def format_poly(p: MPoly) -> str:
    """
    Canonical text of a polynomial, terms in the graded order.

    The output parses back to an equal polynomial.
    """
    if p.is_zero():
        return "0"
    pieces: List[str] = []
    for m, c in p.items():
        negative = _is_negative(c)
        magnitude = -c if negative else c
        mono = _format_monomial(m)
        if not mono:
            body = format_scalar(magnitude)
            if _needs_parens(magnitude):
                body = f"({body})"
        elif isinstance(magnitude, ExactScalar) and magnitude == 1:
            body = mono
        else:
            coeff_text = format_scalar(magnitude)
            if _needs_parens(magnitude):
                coeff_text = f"({coeff_text})"
            body = f"{coeff_text}*{mono}"
        if pieces:
            pieces.append(("-" if negative else "+") + body)
        else:
            pieces.append(("-" if negative else "") + body)
    return "".join(pieces)
