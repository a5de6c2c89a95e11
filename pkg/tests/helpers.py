"""Shared fixtures-as-functions for the test modules."""

from __future__ import annotations

import math

import numpy as np

from curvloci.expr import BinOp, Call, Pow, Var, format_expr, num
from curvloci.fundforms import MongeSurface4, SecondFundamentalForm

EXAMPLE_I = ("x^2+x*y+y^2", "x^2+2*x*y+y^2")
EXAMPLE_II = ("x^2", "x^2")
EXAMPLE_III = ("x^2+y^2", "x^2+y^2")


def surface(pair) -> MongeSurface4:
    return MongeSurface4.parse(*pair)


def alpha(*coefs) -> SecondFundamentalForm:
    return SecondFundamentalForm(*(float(c) for c in coefs))


def random_smooth_expr(rng: np.random.Generator, depth: int = 3):
    """Random expression that is smooth on [-1, 1]^2 (no poles, sqrt of positives)."""
    if depth == 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.4:
            return Var("x")
        if r < 0.8:
            return Var("y")
        return num(float(rng.integers(1, 5)) / 2)
    kind = int(rng.integers(7))
    a = random_smooth_expr(rng, depth - 1)
    if kind == 0:
        return BinOp("+", a, random_smooth_expr(rng, depth - 1))
    if kind == 1:
        return BinOp("-", a, random_smooth_expr(rng, depth - 1))
    if kind == 2:
        return BinOp("*", a, random_smooth_expr(rng, depth - 1))
    if kind == 3:
        # denominator bounded away from zero
        return BinOp("/", a, BinOp("+", num(2), Pow(random_smooth_expr(rng, depth - 1), 2)))
    if kind == 4:
        return Pow(a, int(rng.integers(0, 4)))
    if kind == 5:
        return Call(["sin", "cos"][int(rng.integers(2))], a)
    if rng.random() < 0.5:
        return Call("sqrt", BinOp("+", num(1), Pow(a, 2)))
    return Call("exp", BinOp("*", num(0.5), a))


def poly_surface(rng: np.random.Generator, degree: int = 3, monge: bool = True) -> MongeSurface4:
    """Random polynomial surface; Monge at the origin when ``monge``."""
    fs = []
    for _ in range(2):
        terms = []
        for i in range(degree + 1):
            for j in range(degree + 1 - i):
                if monge and i + j < 2:
                    continue
                c = float(rng.integers(-4, 5)) / 2
                if c:
                    terms.append(f"{c!r}*x^{i}*y^{j}")
        fs.append(" + ".join(terms) if terms else "0")
    return MongeSurface4.parse(*fs)


def expr_text(e) -> str:
    return format_expr(e)


def angle_close(s: float, t: float, tol: float) -> bool:
    d = abs(s - t) % math.pi
    return min(d, math.pi - d) < tol
