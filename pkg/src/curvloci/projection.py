"""Tangent-direction projections R^4 -> R^3 and the geometry of corank 1 surfaces.

After projecting along a tangent direction the source coordinates are
rotated so the projection direction is ``d/dy``; the image is parametrized
as ``(x, g2(x, y), g3(x, y))`` with ``E = 1, F = G = 0`` at the singular point.
Tangent directions of the corank 1 surface are indexed by ``y`` for
``d/dx + y d/dy`` and by ``math.inf`` for the null direction ``d/dy``.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._numeric import (
    ALL,
    TAU_DEG,
    binary_quadratic_roots,
    is_zero,
    normalize_pair,
)
from .expr import Expr, Var, format_expr, linear_combination, num, substitute
from .fundforms import MongeSurface4, SecondFundamentalForm
from .jet import Jet2, jet2, jet2_seeded
from .loci import TangentDirection, bde_vanishes, binormal_angles, resultant_sign

Y_INF = math.inf


class NotCorankOneError(ValueError):
    pass


class ParabolaKind(str, Enum):
    PARABOLA = "parabola"
    HALF_LINE = "half_line"
    LINE = "line"
    POINT = "point"


class MondOrbit(str, Enum):
    CROSSCAP = "(x,y^2,xy)"
    FOLD_Y2 = "(x,y^2,0)"
    XY = "(x,xy,0)"
    FLAT = "(x,0,0)"


class SingularPointType(str, Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"
    INFLECTION = "inflection"


@dataclass(frozen=True)
class CorankSurface:
    """``(g1, g2, g3)`` with a corank 1 singular point at ``point``."""

    g1: Expr
    g2: Expr
    g3: Expr
    point: tuple[float, float] = (0.0, 0.0)
    # jets at ``point`` when the producer already has them
    known_jets: tuple[Jet2, Jet2, Jet2] | None = field(default=None, compare=False, repr=False)

    def jets(self) -> tuple[Jet2, Jet2, Jet2]:
        if self.known_jets is not None:
            return self.known_jets
        return tuple(jet2(g, self.point) for g in (self.g1, self.g2, self.g3))

    def differential(self) -> np.ndarray:
        return np.array([j.grad for j in self.jets()], dtype=float)

    def first_fundamental_form(self) -> tuple[float, float, float]:
        d = self.differential()
        fx, fy = d[:, 0], d[:, 1]
        return float(fx @ fx), float(fx @ fy), float(fy @ fy)

    def __str__(self) -> str:
        return f"({format_expr(self.g1)}, {format_expr(self.g2)}, {format_expr(self.g3)})"


def projection_rotation(v: TangentDirection) -> tuple[float, float]:
    """``(cos phi, sin phi)`` of the tangent rotation taking ``v`` to the second frame vector."""
    a, b = v.unit()
    return b, -a


def projection_angle(v: TangentDirection) -> float:
    c, s = projection_rotation(v)
    return math.atan2(s, c)


def project(S: MongeSurface4, p, v: TangentDirection, check: bool = True) -> CorankSurface:
    """Orthogonal projection of ``S`` along the tangent direction ``v`` at ``p``.

    ``S`` must be in Monge form at ``p`` (vanishing gradients there), so that
    ``v`` given in ``(x, y)`` coordinates is a tangent vector.  The source
    coordinates are rotated (and centered at ``p``) so that ``v`` becomes
    ``d/dy``; the result is ``(x, f1, f2)`` in the new coordinates.
    """
    if check:
        S.require_monge(p)
    c, s = projection_rotation(v)
    x0, y0 = (float(t) for t in p)
    X, Y = Var("x"), Var("y")
    new_x = linear_combination([(1, num(x0)), (c, X), (-s, Y)] if x0 else [(c, X), (-s, Y)])
    new_y = linear_combination([(1, num(y0)), (s, X), (c, Y)] if y0 else [(s, X), (c, Y)])
    mapping = {"x": new_x, "y": new_y}
    return CorankSurface(Var("x"), substitute(S.f1, mapping), substitute(S.f2, mapping),
                         known_jets=projection_jets(S, p, v))


def projection_jets(S: MongeSurface4, p, v: TangentDirection) -> tuple[Jet2, Jet2, Jet2]:
    """Jets of the projected map at the singular point, without building expressions."""
    c, s = projection_rotation(v)
    x0, y0 = (float(t) for t in p)
    # chain rule through the linear chart instead of re-walking substituted trees
    jx = Jet2(x0, c, -s, 0.0, 0.0, 0.0)
    jy = Jet2(y0, s, c, 0.0, 0.0, 0.0)
    return (Jet2(0.0, 1.0, 0.0, 0.0, 0.0, 0.0),
            jet2_seeded(S.f1, jx, jy), jet2_seeded(S.f2, jx, jy))


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _canonical_unit(v: np.ndarray) -> np.ndarray:
    # a line has no preferred orientation
    u = np.array(normalize_pair(float(v[0]), float(v[1])))
    return u / np.linalg.norm(u)


def _dot(u, v) -> float:
    return sum(map(operator.mul, u, v))


def _normalized(u) -> list[float]:
    r = math.sqrt(_dot(u, u))
    return [a / r for a in u]


def corank_sff(M: CorankSurface, tol: float = TAU_DEG) -> SecondFundamentalForm:
    """Second fundamental form at the singular point.

    The source is reparametrized linearly so that ``E = 1, F = G = 0``; the
    normal frame comes from Gram-Schmidt of the 2nd and 3rd ambient axes off
    the tangent line.
    """
    return corank_sff_from_jets(M.jets(), tol)


def corank_sff_from_jets(jets, tol: float = TAU_DEG) -> SecondFundamentalForm:
    """:func:`corank_sff` given the three second-order jets of the map."""
    fx = [j.dx for j in jets]
    fy = [j.dy for j in jets]
    E, F, G = _dot(fx, fx), _dot(fx, fy), _dot(fy, fy)
    trace = E + G
    if trace == 0 or E * G - F * F > (tol * trace) ** 2:
        raise NotCorankOneError(f"differential is not of rank 1 (E={E}, F={F}, G={G})")
    if G <= (tol * tol) * E:
        d, k = (1 / math.sqrt(E), 0.0), (0.0, 1.0)
    else:
        # kernel direction becomes the second source axis
        k = tuple(_normalized((-F, E) if E >= G else (-G, F)))
        d = (k[1], -k[0])
        scale = math.sqrt(_dot([a * d[0] + b * d[1] for a, b in zip(fx, fy)],
                               [a * d[0] + b * d[1] for a, b in zip(fx, fy)]))
        d = (d[0] / scale, d[1] / scale)
    t = _normalized([a * d[0] + b * d[1] for a, b in zip(fx, fy)])
    normals = []
    for axis in ((0.0, 1.0, 0.0), (0.0, 0.0, 1.0)):
        w = [a - _dot(axis, t) * b for a, b in zip(axis, t)]
        for n in normals:
            w = [a - _dot(axis, n) * b for a, b in zip(w, n)]
        normals.append(_normalized(w))

    def pulled(j: Jet2, u, v) -> float:
        return j.dxx * u[0] * v[0] + j.dxy * (u[0] * v[1] + u[1] * v[0]) + j.dyy * u[1] * v[1]

    uu = [pulled(j, d, d) for j in jets]
    uw = [pulled(j, d, k) for j in jets]
    ww = [pulled(j, k, k) for j in jets]
    rows = [(_dot(uu, n), _dot(uw, n), _dot(ww, n)) for n in normals]
    return SecondFundamentalForm.from_rows(*rows)


@dataclass(frozen=True, eq=False)
class ParabolaLocus:
    """``eta(y) = A + B y + C y^2`` in normal coordinates ``(nu1, nu2)``.

    ``base`` is the vertex of a half-line, the point ``A`` of a line, or the
    value of a point locus; ``direction`` is the unit direction of a half-line
    or line.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    kind: ParabolaKind
    base: np.ndarray | None = None
    direction: np.ndarray | None = None
    y_vertex: float | None = None
    through_origin: bool = False  # a degenerate locus on a line through the origin

    def at(self, y):
        y = np.asarray(y, dtype=float)[..., None]
        return self.A + self.B * y + self.C * y * y

    def derivative(self, y):
        y = np.asarray(y, dtype=float)[..., None]
        return self.B + 2 * self.C * y

    def contains_origin_geometrically(self) -> bool:
        """Concave-side test for a non-degenerate parabola.

        Writing ``-A = beta B + gamma C`` the parabola is ``(y, y^2)`` in the
        ``(B, C)`` basis, so the origin is inside iff ``gamma > beta^2``.
        """
        beta, gamma = np.linalg.solve(np.column_stack([self.B, self.C]), -self.A)
        return gamma > beta * beta


def _has_crosscap_term(alpha: SecondFundamentalForm, tol: float) -> bool:
    """Rank 2 with independent xy- and y^2-coefficient columns.

    ``m1 n2 - m2 n1`` is the BDE form at the kernel direction, so this is
    the same test that decides whether that direction is asymptotic.
    """
    return alpha.rank(tol) == 2 and not bde_vanishes(alpha, 0.0, 1.0, tol)


def _degenerate_kind(alpha: SecondFundamentalForm, tol: float) -> ParabolaKind:
    s = alpha.scale
    n_norm, m_norm = math.hypot(alpha.n1, alpha.n2), math.hypot(alpha.m1, alpha.m2)
    # a line has a vanishing resultant, so a negative one forces the half-line
    if not is_zero(n_norm, s, tol) or (n_norm > 0 and resultant_sign(alpha, tol) < 0):
        return ParabolaKind.HALF_LINE
    if not is_zero(m_norm, s, tol):
        return ParabolaKind.LINE
    if alpha.rank(tol) < 2:
        return ParabolaKind.POINT
    # rank 2 needs a second column: keep the larger one
    return ParabolaKind.HALF_LINE if n_norm >= m_norm and n_norm > 0 else ParabolaKind.LINE


def curvature_parabola(alpha: SecondFundamentalForm, tol: float = TAU_DEG) -> ParabolaLocus:
    a = alpha
    A = np.array([a.l1, a.l2])
    B = 2 * np.array([a.m1, a.m2])
    C = np.array([a.n1, a.n2])
    if _has_crosscap_term(a, tol):
        return ParabolaLocus(A, B, C, ParabolaKind.PARABOLA)
    kind = _degenerate_kind(a, tol)
    # rank <= 1 puts every value of eta on one line through the origin
    through = alpha.rank(tol) < 2
    if kind is ParabolaKind.HALF_LINE:
        k = float(B @ C) / (2 * float(C @ C))
        return ParabolaLocus(A, B, C, kind, A - k * k * C, _unit(C), -k + 0.0, through)
    if kind is ParabolaKind.LINE:
        return ParabolaLocus(A, B, C, kind, A.copy(), _canonical_unit(B), None, through)
    return ParabolaLocus(A, B, C, kind, A.copy(), None, None, through)


def mond_orbit(alpha: SecondFundamentalForm, tol: float = TAU_DEG) -> MondOrbit:
    """Mond 2-jet orbit read off the xy- and y^2-coefficient columns."""
    s = alpha.scale
    if s == 0:
        return MondOrbit.FLAT
    if _has_crosscap_term(alpha, tol):
        return MondOrbit.CROSSCAP
    kind = _degenerate_kind(alpha, tol)
    if kind is ParabolaKind.HALF_LINE:
        return MondOrbit.FOLD_Y2
    if kind is ParabolaKind.LINE:
        return MondOrbit.XY
    return MondOrbit.FLAT


def _finite_roots(alpha: SecondFundamentalForm, tol: float) -> list[float]:
    A, B, C = alpha.minors()
    disc_sign = -resultant_sign(alpha, tol)
    return sorted(q / p for p, q in binary_quadratic_roots(A, B, C, disc_sign))


def asymptotic_directions_corank(alpha: SecondFundamentalForm, tol: float = TAU_DEG):
    """Asymptotic parameters ``y`` (``math.inf`` for the null direction), or ``ALL``."""
    par = curvature_parabola(alpha, tol)
    if par.kind is ParabolaKind.PARABOLA:
        return tuple(_finite_roots(alpha, tol))
    if par.kind is ParabolaKind.HALF_LINE:
        if par.through_origin:
            return ALL
        if resultant_sign(alpha, tol) == 0:
            # vertex direction and null direction coincide: a double root at y = inf
            return (Y_INF,)
        return (par.y_vertex, Y_INF)
    if par.kind is ParabolaKind.LINE:
        if par.through_origin:
            return ALL
        return (Y_INF,)
    return ALL


def count_directions(dirs) -> float:
    return math.inf if dirs is ALL else len(dirs)


def classify_point_corank(alpha: SecondFundamentalForm, tol: float = TAU_DEG) -> SingularPointType:
    n = count_directions(asymptotic_directions_corank(alpha, tol))
    return {
        0: SingularPointType.ELLIPTIC,
        1: SingularPointType.PARABOLIC,
        2: SingularPointType.HYPERBOLIC,
        math.inf: SingularPointType.INFLECTION,
    }[n]


def binormal_directions_corank(alpha: SecondFundamentalForm, tol: float = TAU_DEG):
    """Binormal normal angles in ``[0, pi)``; ``ALL`` when the parabola is a point."""
    if curvature_parabola(alpha, tol).kind is ParabolaKind.POINT:
        return ALL
    return binormal_angles(alpha, tol)


def parabola_position(alpha: SecondFundamentalForm, tol: float = TAU_DEG) -> str:
    """``inside``/``on``/``outside`` for a non-degenerate parabola (0/1/2 asymptotic directions)."""
    n = len(_finite_roots(alpha, tol))
    return ("inside", "on", "outside")[n]


def direction_for_parameter(y: float) -> TangentDirection:
    """Tangent direction ``d/dx + y d/dy`` of the corank 1 source (``inf`` is ``d/dy``)."""
    return TangentDirection(0.0, 1.0) if math.isinf(y) else TangentDirection(1.0, y)
