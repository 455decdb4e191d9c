"""Tokenizer and expression parser for polynomials and rational functions.

Grammar (operators in decreasing precedence):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' natural)*
    atom    := identifier | integer | '(' expr ')'

Evaluation happens over rational functions, so '/' is exact.  Errors
carry line and column positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import Polynomial, RationalFunction


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT NUM OP FLAG END
    text: str
    line: int
    col: int


_OPS = set("+-*/^();=,")


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(Token("IDENT", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("NUM", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch == "-" and i + 1 < n and source[i + 1] == "-":
            j = i + 2
            while j < n and (source[j].isalnum() or source[j] == "-"):
                j += 1
            tokens.append(Token("FLAG", source[i + 2 : j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in _OPS:
            tokens.append(Token("OP", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("END", "", line, col))
    return tokens


class _ExprParser:
    def __init__(self, tokens: list[Token], pos: int, vars: tuple[str, ...], names=None):
        self.tokens = tokens
        self.pos = pos
        self.vars = vars
        self.names = names or {}

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str):
        t = self.peek()
        raise ParseError(message, t.line, t.col)

    def accept_op(self, *ops: str) -> Token | None:
        t = self.peek()
        if t.kind == "OP" and t.text in ops:
            self.pos += 1
            return t
        return None

    def expr(self) -> RationalFunction:
        value = self.term()
        while True:
            t = self.accept_op("+", "-")
            if t is None:
                return value
            rhs = self.term()
            value = value + rhs if t.text == "+" else value - rhs

    def term(self) -> RationalFunction:
        value = self.unary()
        while True:
            t = self.accept_op("*", "/")
            if t is None:
                return value
            rhs = self.unary()
            if t.text == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    self.error("division by zero")
                value = value / rhs
        return value

    def unary(self) -> RationalFunction:
        if self.accept_op("-"):
            return -self.unary()
        return self.power()

    def power(self) -> RationalFunction:
        base = self.atom()
        while self.accept_op("^"):
            t = self.peek()
            if t.kind != "NUM":
                self.error("exponent must be a natural number")
            self.pos += 1
            base = base ** int(t.text)
        return base

    def atom(self) -> RationalFunction:
        t = self.peek()
        if t.kind == "NUM":
            self.pos += 1
            return RationalFunction.from_constant(self.vars, Fraction(int(t.text)))
        if t.kind == "IDENT":
            self.pos += 1
            if t.text in self.vars:
                return RationalFunction(Polynomial.variable(self.vars, t.text))
            if t.text in self.names:
                return self.names[t.text]
            raise ParseError(f"unbound name {t.text!r}", t.line, t.col)
        if self.accept_op("("):
            value = self.expr()
            if not self.accept_op(")"):
                self.error("expected ')'")
            return value
        self.error("expected an expression")


def parse_rational(source: str, vars: tuple[str, ...], names=None) -> RationalFunction:
    """Parse a rational-function expression in the given variables."""
    tokens = tokenize(source)
    p = _ExprParser(tokens, 0, vars, names)
    value = p.expr()
    if p.peek().kind != "END":
        p.error("trailing input after expression")
    return value


def parse_poly(source: str, vars: tuple[str, ...], names=None) -> Polynomial:
    """Parse a polynomial expression; rejects genuine denominators."""
    rf = parse_rational(source, vars, names)
    if not rf.is_polynomial():
        raise ParseError("expected a polynomial, found a denominator", 1, 1)
    return rf.as_polynomial()
