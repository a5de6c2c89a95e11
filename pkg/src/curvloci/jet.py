"""Second-order jets (value, gradient, Hessian) of expressions in ``x, y``.

Evaluation propagates truncated Taylor data through every node, so the
result is exact up to floating-point rounding; with ``exact=True`` and a
rational point, polynomial/rational expressions are evaluated in
:class:`~fractions.Fraction` arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .expr import BinOp, Expr, Neg, Num, Pow, Var, parse_expression


class DomainError(ArithmeticError):
    """The expression is not twice differentiable at the evaluation point."""


@dataclass(frozen=True, slots=True)
class Jet2:
    value: float
    dx: float
    dy: float
    dxx: float
    dxy: float
    dyy: float

    @classmethod
    def constant(cls, c) -> "Jet2":
        zero = c * 0
        return cls(c, zero, zero, zero, zero, zero)

    @property
    def grad(self) -> tuple:
        return (self.dx, self.dy)

    @property
    def hess(self) -> tuple:
        return ((self.dxx, self.dxy), (self.dxy, self.dyy))

    def __add__(self, o: "Jet2") -> "Jet2":
        return Jet2(self.value + o.value, self.dx + o.dx, self.dy + o.dy,
                    self.dxx + o.dxx, self.dxy + o.dxy, self.dyy + o.dyy)

    def __sub__(self, o: "Jet2") -> "Jet2":
        return Jet2(self.value - o.value, self.dx - o.dx, self.dy - o.dy,
                    self.dxx - o.dxx, self.dxy - o.dxy, self.dyy - o.dyy)

    def __neg__(self) -> "Jet2":
        return Jet2(-self.value, -self.dx, -self.dy, -self.dxx, -self.dxy, -self.dyy)

    def __mul__(self, o: "Jet2") -> "Jet2":
        f, g = self, o
        return Jet2(
            f.value * g.value,
            f.dx * g.value + f.value * g.dx,
            f.dy * g.value + f.value * g.dy,
            f.dxx * g.value + 2 * f.dx * g.dx + f.value * g.dxx,
            f.dxy * g.value + f.dx * g.dy + f.dy * g.dx + f.value * g.dxy,
            f.dyy * g.value + 2 * f.dy * g.dy + f.value * g.dyy,
        )

    def scale(self, c) -> "Jet2":
        return Jet2(c * self.value, c * self.dx, c * self.dy,
                    c * self.dxx, c * self.dxy, c * self.dyy)

    def compose(self, d0, d1, d2) -> "Jet2":
        """Jet of ``phi(self)`` given ``phi``, ``phi'``, ``phi''`` at ``self.value``."""
        u = self
        return Jet2(
            d0,
            d1 * u.dx,
            d1 * u.dy,
            d2 * u.dx * u.dx + d1 * u.dxx,
            d2 * u.dx * u.dy + d1 * u.dxy,
            d2 * u.dy * u.dy + d1 * u.dyy,
        )

    def reciprocal(self) -> "Jet2":
        u = self.value
        if u == 0:
            raise DomainError("division by zero")
        inv = 1 / u
        return self.compose(inv, -inv * inv, 2 * inv * inv * inv)

    def __truediv__(self, o: "Jet2") -> "Jet2":
        return self * o.reciprocal()

    def power(self, n: int) -> "Jet2":
        u = self.value
        if n == 0:
            return Jet2.constant(u * 0 + 1)
        if n < 0:
            return self.reciprocal().power(-n)
        d0 = u**n
        d1 = n * u ** (n - 1)
        d2 = n * (n - 1) * u ** (n - 2) if n >= 2 else u * 0
        return self.compose(d0, d1, d2)


def _sqrt(u: Jet2) -> Jet2:
    if u.value <= 0:
        raise DomainError(f"sqrt is not differentiable at {float(u.value)}")
    r = math.sqrt(u.value)
    return u.compose(r, 0.5 / r, -0.25 / (r * u.value))


def _sin(u: Jet2) -> Jet2:
    s, c = math.sin(u.value), math.cos(u.value)
    return u.compose(s, c, -s)


def _cos(u: Jet2) -> Jet2:
    s, c = math.sin(u.value), math.cos(u.value)
    return u.compose(c, -s, -c)


def _exp(u: Jet2) -> Jet2:
    try:
        e = math.exp(u.value)
    except OverflowError as exc:
        raise DomainError("exp overflow") from exc
    return u.compose(e, e, e)


_FUNCS: dict[str, Callable[[Jet2], Jet2]] = {
    "sin": _sin,
    "cos": _cos,
    "exp": _exp,
    "sqrt": _sqrt,
}


def _eval(e: Expr, env: dict[str, Jet2], exact: bool) -> Jet2:
    t = type(e)
    if t is Var:
        return env[e.name]
    if t is Num:
        return Jet2.constant(e.value if exact else e.float_value)
    if t is BinOp:
        a = _eval(e.left, env, exact)
        b = _eval(e.right, env, exact)
        op = e.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        return a / b
    if t is Pow:
        return _eval(e.base, env, exact).power(e.exponent)
    if t is Neg:
        return -_eval(e.operand, env, exact)
    return _FUNCS[e.func](_eval(e.arg, env, exact))


def jet2(e: Expr | str, point, exact: bool = False) -> Jet2:
    """Second-order jet of ``e`` at ``point = (x0, y0)``.

    Raises :class:`DomainError` when ``e`` has a singularity at ``point``.
    """
    if isinstance(e, str):
        e = parse_expression(e)
    x0, y0 = point
    if exact:
        one, zero = Fraction(1), Fraction(0)
        x0, y0 = Fraction(x0), Fraction(y0)
    else:
        one, zero = 1.0, 0.0
        x0, y0 = float(x0), float(y0)
    env = {
        "x": Jet2(x0, one, zero, zero, zero, zero),
        "y": Jet2(y0, zero, one, zero, zero, zero),
    }
    try:
        return _eval(e, env, exact)
    except ZeroDivisionError as exc:
        raise DomainError("division by zero") from exc
    except OverflowError as exc:
        raise DomainError(str(exc)) from exc


def jet2_seeded(e: Expr, x: Jet2, y: Jet2) -> Jet2:
    """Jet of ``e`` composed with the given jets of its arguments."""
    try:
        return _eval(e, {"x": x, "y": y}, False)
    except ZeroDivisionError as exc:
        raise DomainError("division by zero") from exc
