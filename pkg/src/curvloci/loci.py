"""Curvature ellipse, resultant and point classification for surfaces in R^4."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._numeric import (
    ALL,
    TAU_DEG,
    TAU_ROUND,
    Infinite,
    angle_mod_pi,
    binary_quadratic_roots,
    is_near,
    is_zero,
    normalize_pair,
    tsign,
)
from .fundforms import QuadraticForm2, SecondFundamentalForm


class PointType(str, Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    SEMIUMBILIC = "semiumbilic"
    PARABOLIC = "parabolic"
    INFLECTION_REAL = "inflection_real"
    INFLECTION_IMAGINARY = "inflection_imaginary"
    INFLECTION_AT = "inflection_at"
    UMBILIC_NONFLAT = "umbilic_nonflat"
    FLAT_UMBILIC = "flat_umbilic"

    @property
    def is_inflection(self) -> bool:
        return self in _INFLECTION_LIKE


_INFLECTION_LIKE = {
    PointType.INFLECTION_REAL,
    PointType.INFLECTION_IMAGINARY,
    PointType.INFLECTION_AT,
    PointType.UMBILIC_NONFLAT,
    PointType.FLAT_UMBILIC,
}


class EllipseKind(str, Enum):
    ELLIPSE = "ellipse"
    SEGMENT = "segment"
    POINT = "point"


class GOrbit(str, Enum):
    """Orbits of pairs of binary quadratic forms under GL(2) x GL(2)."""

    HYPERBOLIC = "(x^2,y^2)"
    ELLIPTIC = "(xy,x^2-y^2)"
    PARABOLIC = "(x^2,xy)"
    INFLECTION = "(x^2+-y^2,0)"
    DEGENERATE_INFLECTION = "(x^2,0)"
    ZERO = "(0,0)"


@dataclass(frozen=True)
class TangentDirection:
    """Projective tangent direction ``[a : b]``, stored with ``max(|a|,|b|) = 1``."""

    a: float
    b: float

    def __post_init__(self):
        a, b = normalize_pair(float(self.a), float(self.b))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_angle(cls, theta: float) -> "TangentDirection":
        return cls(math.cos(theta), math.sin(theta))

    @property
    def angle(self) -> float:
        """Angle in ``[0, pi)``."""
        return angle_mod_pi(self.a, self.b)

    def unit(self) -> tuple[float, float]:
        r = math.hypot(self.a, self.b)
        return self.a / r, self.b / r

    def same_as(self, other: "TangentDirection", tol: float = 1e-9) -> bool:
        # cross product of unit representatives
        (a1, b1), (a2, b2) = self.unit(), other.unit()
        return abs(a1 * b2 - a2 * b1) <= tol

    def __str__(self) -> str:
        return f"[{self.a:.12g}:{self.b:.12g}]"


@dataclass(frozen=True, eq=False)
class EllipseLocus:
    """``eta(theta) = center + M @ (cos 2 theta, sin 2 theta)`` in normal coordinates."""

    center: np.ndarray
    M: np.ndarray
    kind: EllipseKind
    endpoints: tuple[np.ndarray, np.ndarray] | None = None
    direction: np.ndarray | None = None  # unit direction of a segment
    through_origin: bool = False  # for a segment: its supporting line passes through the origin

    def at(self, theta):
        theta = np.asarray(theta, dtype=float)
        w = np.stack([np.cos(2 * theta), np.sin(2 * theta)])
        return (self.center.reshape(2, *([1] * theta.ndim)) + np.tensordot(self.M, w, axes=1)).T


def ellipse_point(alpha: SecondFundamentalForm, theta: float) -> np.ndarray:
    """Image of the unit tangent vector at angle ``theta`` under the second fundamental form."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([q(c, s) for q in alpha.forms()])


def curvature_ellipse(alpha: SecondFundamentalForm, tol: float = TAU_DEG) -> EllipseLocus:
    a = alpha
    center = np.array([(a.l1 + a.n1) / 2, (a.l2 + a.n2) / 2])
    M = np.array([[(a.l1 - a.n1) / 2, a.m1], [(a.l2 - a.n2) / 2, a.m2]])
    s = alpha.scale
    norm2 = float(np.sum(M * M))
    # the rank decides first: rank <= 1 keeps the locus on a line through the origin
    rank = alpha.rank(tol)
    if rank < 2 and (norm2 == 0 or all(is_zero(v, s, tol) for v in M.flat)):
        return EllipseLocus(center, M, EllipseKind.POINT)
    # det M is half the trace A + C of the BDE form; since the resultant equals
    # ((A + C)^2 - |BDE|^2) / 2, a vanishing trace makes the resultant negative
    A, _, C = alpha.minors()
    if rank == 2 and abs(A + C) > bde_noise(alpha, tol):
        return EllipseLocus(center, M, EllipseKind.ELLIPSE)
    col = M[:, 0] if math.hypot(*M[:, 0]) >= math.hypot(*M[:, 1]) else M[:, 1]
    ux, uy = normalize_pair(*col)
    u = np.array([ux, uy]) / math.hypot(ux, uy)
    half = math.hypot(*M.flat)
    ends = sorted([center - half * u, center + half * u], key=lambda p: (p[0], p[1]))
    return EllipseLocus(center, M, EllipseKind.SEGMENT, (ends[0], ends[1]), u, rank < 2)


def resultant(alpha: SecondFundamentalForm) -> float:
    """Little's resultant; positive where the origin is inside the curvature ellipse."""
    A, B, C = alpha.minors()
    return 0.25 * (4 * A * C - B * B)


def resultant_scale(alpha: SecondFundamentalForm) -> float:
    """Magnitude against which the resultant is compared.

    This is the squared Frobenius norm of the BDE form, which tangent
    rotations preserve, so the sign test does not depend on the frame.
    """
    A, B, C = alpha.minors()
    k = math.hypot(A, B / math.sqrt(2.0), C)
    return k * k


def bde_noise(alpha: SecondFundamentalForm, tol: float = TAU_DEG) -> float:
    """Level below which a value of the BDE form counts as zero.

    It is ``tol`` times the norm of the form over ``sqrt(2)``, floored by the
    rounding error of the minors.  Every zero test on the form (a vanishing
    direction, the trace that separates ellipse from segment, the resultant
    sign) is measured against this one level.
    """
    s = alpha.scale
    return max(tol * math.sqrt(resultant_scale(alpha) / 2), TAU_ROUND * s * s)


def bde_vanishes(alpha: SecondFundamentalForm, u: float, w: float, tol: float = TAU_DEG) -> bool:
    """Whether the BDE form vanishes at the unit vector ``(u, w)``.

    The noise level sits below the smaller eigenvalue of any form with a
    positive resultant sign, so an elliptic point never has a vanishing
    direction.
    """
    A, B, C = alpha.minors()
    return abs(A * u * u + B * u * w + C * w * w) <= bde_noise(alpha, tol)


def resultant_sign(alpha: SecondFundamentalForm, tol: float = TAU_DEG) -> int:
    delta = resultant(alpha)
    if abs(delta) <= bde_noise(alpha, tol) * math.sqrt(2 * resultant_scale(alpha)):
        return 0
    return 1 if delta > 0 else -1


def bde_coefficients(alpha: SecondFundamentalForm) -> tuple[float, float, float]:
    """Coefficients of ``A dx^2 + B dx dy + C dy^2 = 0`` for the asymptotic directions."""
    return alpha.minors()


def bde_discriminant(alpha: SecondFundamentalForm) -> float:
    A, B, C = alpha.minors()
    return B * B - 4 * A * C


def ellipse_degeneracy_test(alpha: SecondFundamentalForm) -> float:
    """``(l1 m2 - l2 m1) + (m1 n2 - m2 n1)``; twice the determinant of the ellipse matrix."""
    A, _, C = alpha.minors()
    return A + C


def _asymptotic_roots(alpha: SecondFundamentalForm, tol: float):
    if alpha.rank(tol) < 2:
        return ALL
    A, B, C = alpha.minors()
    disc_sign = -resultant_sign(alpha, tol)
    return binary_quadratic_roots(A, B, C, disc_sign)


def asymptotic_directions_r4(alpha: SecondFundamentalForm, tol: float = TAU_DEG):
    """Asymptotic tangent directions (in the orthonormal tangent frame), or ``ALL``."""
    roots = _asymptotic_roots(alpha, tol)
    if roots is ALL:
        return ALL
    dirs = [TangentDirection(p, q) for p, q in roots]
    return tuple(sorted(dirs, key=lambda d: d.angle))


def binormal_form(alpha: SecondFundamentalForm) -> tuple[float, float, float]:
    """Coefficients of ``det Hess(h_nu)`` as a binary quadratic in ``(cos phi, sin phi)``."""
    a = alpha
    return (a.l1 * a.n1 - a.m1 * a.m1,
            a.l1 * a.n2 + a.l2 * a.n1 - 2 * a.m1 * a.m2,
            a.l2 * a.n2 - a.m2 * a.m2)


def binormal_angles(alpha: SecondFundamentalForm, tol: float = TAU_DEG):
    """Normal angles ``phi`` in ``[0, pi)`` of binormal directions, or ``ALL``."""
    a, b, c = binormal_form(alpha)
    s = alpha.scale
    if all(is_zero(v, s * s, tol) for v in (a, b, c)):
        return ALL
    k = max(abs(a), abs(b), abs(c))
    disc_sign = tsign(b * b - 4 * a * c, k * k, tol)
    roots = binary_quadratic_roots(a, b, c, disc_sign)
    return tuple(sorted(angle_mod_pi(p, q) for p, q in roots))


binormal_directions_r4 = binormal_angles


@dataclass(frozen=True, eq=False)
class PointReport:
    alpha: SecondFundamentalForm
    delta: float
    det_m: float
    rank: int
    point_type: PointType
    ellipse: EllipseLocus
    asymptotic: tuple[TangentDirection, ...] | Infinite
    binormals: tuple[float, ...] | Infinite
    g_orbit: GOrbit
    near_degenerate: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def n_asymptotic(self) -> int | float:
        return math.inf if self.asymptotic is ALL else len(self.asymptotic)


def _segment_point_type(ell: EllipseLocus, scale: float, tol: float) -> PointType:
    if not ell.through_origin:
        return PointType.SEMIUMBILIC
    half = math.sqrt(float(np.sum(ell.M * ell.M)))
    t = abs(float(ell.center @ ell.direction))
    if is_zero(t - half, scale, tol):
        return PointType.INFLECTION_AT
    return PointType.INFLECTION_REAL if t < half else PointType.INFLECTION_IMAGINARY


def analyze_point(alpha: SecondFundamentalForm, tol: float = TAU_DEG) -> PointReport:
    """Every second-order invariant of ``alpha`` computed with one tolerance."""
    s = alpha.scale
    ell = curvature_ellipse(alpha, tol)
    delta = resultant(alpha)
    det_m = float(np.linalg.det(ell.M))
    rank = alpha.rank(tol)
    notes = []
    if ell.kind is EllipseKind.POINT:
        ptype = PointType.FLAT_UMBILIC if s == 0 else PointType.UMBILIC_NONFLAT
    elif ell.kind is EllipseKind.SEGMENT:
        ptype = _segment_point_type(ell, s, tol)
    else:
        dsign = resultant_sign(alpha, tol)
        ptype = {1: PointType.ELLIPTIC, -1: PointType.HYPERBOLIC, 0: PointType.PARABOLIC}[dsign]

    near = is_near(delta, resultant_scale(alpha), tol)
    if ell.kind is not EllipseKind.POINT:
        near |= is_near(det_m, float(np.sum(ell.M * ell.M)), tol)
    near |= any(is_near(v, s * s, tol) for v in alpha.minors())
    if near:
        notes.append("an invariant lies within the near-degenerate band")
    return PointReport(
        alpha=alpha,
        delta=delta,
        det_m=det_m,
        rank=rank,
        point_type=ptype,
        ellipse=ell,
        asymptotic=asymptotic_directions_r4(alpha, tol),
        binormals=binormal_angles(alpha, tol),
        g_orbit=_g_orbit_alpha(alpha, tol),
        near_degenerate=near,
        notes=notes,
    )


def classify_point_r4(alpha: SecondFundamentalForm, tol: float = TAU_DEG) -> PointType:
    return analyze_point(alpha, tol).point_type


def _g_orbit_alpha(alpha: SecondFundamentalForm, tol: float) -> GOrbit:
    rank = alpha.rank(tol)
    if rank == 0:
        return GOrbit.ZERO
    if rank == 1:
        q1, q2 = alpha.forms()
        n1 = math.sqrt(q1.a**2 + q1.b**2 + q1.c**2)
        n2 = math.sqrt(q2.a**2 + q2.b**2 + q2.c**2)
        q = q1 if n1 >= n2 else q2
        return GOrbit.INFLECTION if q.rank(tol) == 2 else GOrbit.DEGENERATE_INFLECTION
    sign = resultant_sign(alpha, tol)
    return {1: GOrbit.ELLIPTIC, -1: GOrbit.HYPERBOLIC, 0: GOrbit.PARABOLIC}[sign]


def g_orbit(q1: QuadraticForm2, q2: QuadraticForm2, tol: float = TAU_DEG) -> GOrbit:
    """Orbit of the pair ``(q1, q2)`` in the list of six classes."""
    return _g_orbit_alpha(SecondFundamentalForm(q1.a, q1.b, q1.c, q2.a, q2.b, q2.c), tol)
