"""Tolerance policy and binary-quadratic root solving shared by the geometry modules."""

from __future__ import annotations

import math
from enum import Enum

TAU_DEG = 1e-9
TAU_FRAME = 1e-9
# relative rounding floor for quantities quadratic in the coefficients
TAU_ROUND = 1e-13
NEAR_FACTOR = 10.0


class Infinite(Enum):
    """Marker for "every direction" results."""

    ALL = "all"

    def __repr__(self) -> str:
        return "ALL"


ALL = Infinite.ALL


def is_zero(value: float, scale: float, tol: float) -> bool:
    return abs(value) <= tol * scale


def is_near(value: float, scale: float, tol: float) -> bool:
    """Nonzero under ``tol`` but within ``NEAR_FACTOR * tol`` of zero."""
    return tol * scale < abs(value) <= NEAR_FACTOR * tol * scale


def tsign(value: float, scale: float, tol: float) -> int:
    if is_zero(value, scale, tol):
        return 0
    return 1 if value > 0 else -1


def _stable_pair(a: float, b: float, c: float, sq: float) -> tuple[tuple[float, float], ...]:
    # roots of a t^2 + b t + c as ratios num/den, citardauq form for the small root;
    # kept as pairs so that a tiny leading coefficient cannot overflow
    q = -0.5 * (b + math.copysign(sq, b))
    if q == 0.0:
        return (0.0, 1.0), (0.0, 1.0)
    return (q, a), (c, q)


def binary_quadratic_roots(a: float, b: float, c: float, disc_sign: int) -> list[tuple[float, float]]:
    """Real projective roots ``[p:q]`` of ``a p^2 + b pq + c q^2 = 0``.

    ``disc_sign`` is the caller's tolerance-aware sign of ``b^2 - 4ac``; the
    form is assumed not to vanish identically.
    """
    if disc_sign < 0:
        return []
    if a == 0 and c == 0:
        return [(1.0, 0.0), (0.0, 1.0)]
    sq = 0.0 if disc_sign == 0 else math.sqrt(max(b * b - 4 * a * c, 0.0))
    if abs(a) >= abs(c):
        # t = p/q solves a t^2 + b t + c = 0
        if disc_sign == 0:
            return [(-b, 2 * a)]
        return list(_stable_pair(a, b, c, sq))
    # u = q/p solves c u^2 + b u + a = 0
    if disc_sign == 0:
        return [(2 * c, -b)]
    return [(den, num) for num, den in _stable_pair(c, b, a, sq)]


def normalize_pair(a: float, b: float) -> tuple[float, float]:
    """Scale so ``max(|a|, |b|) == 1`` with the first nonzero component positive."""
    m = max(abs(a), abs(b))
    if m == 0:
        raise ValueError("zero vector has no direction")
    a, b = a / m, b / m
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return a + 0.0, b + 0.0


def angle_mod_pi(a: float, b: float) -> float:
    t = math.atan2(b, a) % math.pi
    return 0.0 if t >= math.pi else t


def angle_distance_mod_pi(s: float, t: float) -> float:
    d = abs(s - t) % math.pi
    return min(d, math.pi - d)
