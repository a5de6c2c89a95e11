"""Scalar-field expressions in the two variables ``x`` and ``y``.

Grammar (EBNF, whitespace ignored)::

    expr     = term , { ("+" | "-") , term } ;
    term     = unary , { ("*" | "/") , unary } ;
    unary    = ("-" | "+") , unary | power ;
    power    = atom , [ "^" , exponent ] ;
    exponent = [ "-" ] , integer | "(" , [ "-" ] , integer , ")" ;
    atom     = number | "x" | "y" | func , "(" , expr , ")" | "(" , expr , ")" ;
    func     = "sin" | "cos" | "exp" | "sqrt" ;
    number   = digits , [ "." , [ digits ] ] , [ exponent-part ]
             | "." , digits , [ exponent-part ] ;

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``.  Chained
powers (``x^2^3``) are rejected; parenthesize the base instead.  The Unicode
glyphs ``·`` and ``−`` are accepted as aliases of ``*`` and ``-``.

Literals are stored exactly as :class:`fractions.Fraction`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Mapping, Union

VARIABLES = ("x", "y")
FUNCTIONS = ("sin", "cos", "exp", "sqrt")


class ExprSyntaxError(ValueError):
    """Malformed expression text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class UnknownIdentifierError(ExprSyntaxError):
    pass


class NonIntegerExponentError(ExprSyntaxError):
    pass


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction

    @cached_property
    def float_value(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of "+", "-", "*", "/"
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Pow, Call]


# --------------------------------------------------------------------------
# Lexer
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()·−])
    """,
    re.VERBOSE,
)

_ALIASES = {"·": "*", "−": "-"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "ident", "op", "end"
    text: str
    offset: int  # byte offset


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        byte_offset = len(text[:pos].encode("utf-8"))
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", byte_offset)
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            tokens.append(_Token(kind, _ALIASES.get(tok, tok), byte_offset))
        pos = m.end()
    tokens.append(_Token("end", "", len(text.encode("utf-8"))))
    return tokens


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> _Token:
        tok = self.tok
        if tok.kind != "op" or tok.text != op:
            found = tok.text or "end of input"
            raise ExprSyntaxError(f"expected {op!r}, found {found!r}", tok.offset)
        return self.advance()

    def at_op(self, *ops: str) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.offset)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.at_op("+", "-"):
            op = self.advance().text
            left = BinOp(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.at_op("*", "/"):
            op = self.advance().text
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        if self.at_op("-"):
            self.advance()
            return Neg(self.unary())
        if self.at_op("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if not self.at_op("^"):
            return base
        caret = self.advance()
        exponent = self.exponent(caret.offset)
        if self.at_op("^"):
            raise ExprSyntaxError("chained exponent; parenthesize the base", self.tok.offset)
        return Pow(base, exponent)

    def exponent(self, caret_offset: int) -> int:
        start = self.tok.offset
        if self.at_op("("):
            self.advance()
            inner = self.expr()
            self.expect_op(")")
        else:
            inner = self.unary_literal()
        value = _integer_literal(inner)
        if value is None:
            raise NonIntegerExponentError("exponent must be an integer literal", start)
        return value

    def unary_literal(self) -> Expr:
        # exponent without parentheses: optional minus and one atom
        if self.at_op("-"):
            self.advance()
            return Neg(self.atom())
        return self.atom()

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(Fraction(tok.text))
        if tok.kind == "ident":
            self.advance()
            if tok.text in VARIABLES:
                return Var(tok.text)
            if tok.text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(tok.text, arg)
            raise UnknownIdentifierError(f"unknown identifier {tok.text!r}", tok.offset)
        if self.at_op("("):
            self.advance()
            inner = self.expr()
            self.expect_op(")")
            return inner
        found = tok.text or "end of input"
        raise ExprSyntaxError(f"unexpected {found!r}", tok.offset)


def _integer_literal(e: Expr) -> int | None:
    sign = 1
    if isinstance(e, Neg):
        sign, e = -1, e.operand
    if isinstance(e, Num) and e.value.denominator == 1:
        return sign * int(e.value)
    return None


def parse_expression(text: str) -> Expr:
    """Parse ``text`` into an expression tree."""
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# Printing
# --------------------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC_ADD if e.op in "+-" else _PREC_MUL
    if isinstance(e, Neg):
        return _PREC_NEG
    if isinstance(e, Pow):
        return _PREC_POW
    return _PREC_ATOM


def format_number(value: Fraction) -> str:
    """Exact decimal text for a non-negative literal with a terminating expansion."""
    if value < 0:
        raise ValueError("literals are non-negative; negation is a separate node")
    num, den = value.numerator, value.denominator
    twos = fives = 0
    d = den
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        raise ValueError(f"{value} has no finite decimal expansion")
    k = max(twos, fives)
    digits = str(num * 10**k // den)
    if k == 0:
        return digits
    digits = digits.rjust(k + 1, "0")
    return f"{digits[:-k]}.{digits[-k:]}".rstrip("0").rstrip(".")


def _wrap(e: Expr, min_prec: int) -> str:
    s = format_expr(e)
    return f"({s})" if _prec(e) < min_prec else s


def format_expr(e: Expr) -> str:
    """Render ``e`` as text that :func:`parse_expression` maps back to ``e``."""
    if isinstance(e, Num):
        return format_number(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({format_expr(e.arg)})"
    if isinstance(e, Neg):
        return "-" + _wrap(e.operand, _PREC_NEG)
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _PREC_ATOM)}^{e.exponent}"
    p = _prec(e)
    return f"{_wrap(e.left, p)} {e.op} {_wrap(e.right, p + 1)}"


# --------------------------------------------------------------------------
# Construction helpers
# --------------------------------------------------------------------------


def num(value: int | float | Fraction | str) -> Expr:
    """Literal node; negative values become ``Neg(Num)`` and floats use their shortest repr."""
    if isinstance(value, float):
        value = Fraction(repr(float(value)))
    value = Fraction(value)
    return Neg(Num(-value)) if value < 0 else Num(value)


def substitute(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Replace variables by expressions."""
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Num):
        return e
    if isinstance(e, Neg):
        return Neg(substitute(e.operand, mapping))
    if isinstance(e, BinOp):
        return BinOp(e.op, substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, mapping), e.exponent)
    return Call(e.func, substitute(e.arg, mapping))


def linear_combination(terms: list[tuple[float | Fraction, Expr]]) -> Expr:
    """Build ``sum(c * e)`` skipping zero coefficients and unit factors."""
    out: Expr | None = None
    for coef, e in terms:
        if coef == 0:
            continue
        mag = abs(coef)
        piece = e if mag == 1 else BinOp("*", num(mag), e)
        if out is None:
            out = Neg(piece) if coef < 0 else piece
        else:
            out = BinOp("-" if coef < 0 else "+", out, piece)
    return out if out is not None else Num(Fraction(0))


def quadratic_expr(a: float, b: float, c: float) -> Expr:
    """``a*x^2 + b*x*y + c*y^2`` as an expression tree."""
    x, y = Var("x"), Var("y")
    return linear_combination(
        [(a, Pow(x, 2)), (b, BinOp("*", x, y)), (c, Pow(y, 2))]
    )
