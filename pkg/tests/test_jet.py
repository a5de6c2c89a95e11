import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvloci.expr import BinOp, Num, parse_expression
from curvloci.jet import DomainError, Jet2, jet2
from helpers import random_smooth_expr


def test_exact_polynomial_jet():
    j = jet2("x^2*y - 3*y^3", (1, 2), exact=True)
    assert j == Jet2(Fraction(-22), Fraction(4), Fraction(-35), Fraction(4), Fraction(2), Fraction(-36))


def test_exact_rational_jet():
    j = jet2("1/(1 + x)", (Fraction(1, 2), 0), exact=True)
    assert j.value == Fraction(2, 3)
    assert j.dx == Fraction(-4, 9)
    assert j.dxx == Fraction(16, 27)


def test_transcendental_values():
    j = jet2("sin(x)*exp(y)", (0.3, -0.2))
    e = math.exp(-0.2)
    assert j.value == pytest.approx(math.sin(0.3) * e)
    assert j.dxx == pytest.approx(-math.sin(0.3) * e)
    assert j.dxy == pytest.approx(math.cos(0.3) * e)
    assert j.dyy == pytest.approx(math.sin(0.3) * e)


def test_zero_power_is_one():
    assert jet2("(x - 1)^0", (1, 0)) == Jet2.constant(1.0)


@pytest.mark.parametrize("text, point", [
    ("sqrt(x)", (0, 0)),
    ("sqrt(x)", (-1, 0)),
    ("1/x", (0, 1)),
    ("x^-1", (0, 1)),
    ("y / (x - y)", (2, 2)),
    ("exp(exp(x))", (10, 0)),
])
def test_domain_errors(text, point):
    with pytest.raises(DomainError):
        jet2(text, point)


def _fd_check(e, p, h=1e-5):
    x, y = p
    j = jet2(e, p)

    def val(a, b):
        return jet2(e, (a, b)).value

    def grad(a, b):
        return np.array(jet2(e, (a, b)).grad)

    g = np.array([(val(x + h, y) - val(x - h, y)) / (2 * h), (val(x, y + h) - val(x, y - h)) / (2 * h)])
    hx = (grad(x + h, y) - grad(x - h, y)) / (2 * h)
    hy = (grad(x, y + h) - grad(x, y - h)) / (2 * h)
    fd = np.array([*g, hx[0], hx[1], hy[1]])
    got = np.array([j.dx, j.dy, j.dxx, j.dxy, j.dyy])
    return np.abs(got - fd) <= 1e-6 * np.maximum(1.0, np.abs(fd))


def test_matches_finite_differences_on_sample():
    rng = np.random.default_rng(3)
    for _ in range(50):
        e = random_smooth_expr(rng)
        p = tuple(rng.uniform(-1, 1, 2))
        assert _fd_check(e, p).all()


fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@given(fractions, fractions, fractions)
def test_exact_linearity(a, px, py):
    f = parse_expression("x^3 - 2*x*y + y^2/3")
    g = parse_expression("(x + y)^2 * y")
    combo = BinOp("+", BinOp("*", Num(abs(a)), f), g)
    p = (px, py)
    lhs = jet2(combo, p, exact=True)
    rhs = jet2(f, p, exact=True).scale(abs(a)) + jet2(g, p, exact=True)
    assert lhs == rhs


@given(fractions, fractions)
def test_product_rule_exact(px, py):
    f, g = parse_expression("x^2 - y"), parse_expression("x*y + 1")
    p = (px, py)
    assert jet2(BinOp("*", f, g), p, exact=True) == jet2(f, p, exact=True) * jet2(g, p, exact=True)
