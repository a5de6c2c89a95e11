"""Adapted frames and second fundamental forms of surfaces in R^4."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._numeric import TAU_DEG, TAU_FRAME, is_zero
from .expr import Expr, format_expr, parse_expression
from .jet import Jet2, jet2


class NotImmersionError(ValueError):
    pass


class NotMongeError(ValueError):
    pass


@dataclass(frozen=True)
class QuadraticForm2:
    """``a x^2 + 2 b xy + c y^2``."""

    a: float
    b: float
    c: float

    def __call__(self, x: float, y: float) -> float:
        return self.a * x * x + 2 * self.b * x * y + self.c * y * y

    @property
    def det(self) -> float:
        return self.a * self.c - self.b * self.b

    @property
    def discriminant(self) -> float:
        """Discriminant of ``a x^2 + 2b xy + c y^2`` as a binary quadratic (``4b^2 - 4ac``)."""
        return -4.0 * self.det

    def rank(self, tol: float = TAU_DEG) -> int:
        s = max(abs(self.a), abs(self.b), abs(self.c))
        if s == 0:
            return 0
        return 1 if is_zero(self.det, s * s, tol) else 2

    def is_degenerate(self, tol: float = TAU_DEG) -> bool:
        return self.rank(tol) < 2


@dataclass(frozen=True)
class SecondFundamentalForm:
    """Coefficient matrix ``(l1, m1, n1; l2, m2, n2)`` in an orthonormal frame.

    Row ``i`` is the quadratic form ``l_i x^2 + 2 m_i xy + n_i y^2`` along the
    ``i``-th normal vector.
    """

    l1: float
    m1: float
    n1: float
    l2: float
    m2: float
    n2: float

    @classmethod
    def from_rows(cls, row1, row2) -> "SecondFundamentalForm":
        return cls(*(float(v) for v in (*row1, *row2)))

    @classmethod
    def from_array(cls, a) -> "SecondFundamentalForm":
        a = np.asarray(a, dtype=float).reshape(2, 3)
        return cls.from_rows(a[0], a[1])

    def as_array(self) -> np.ndarray:
        return np.array([[self.l1, self.m1, self.n1], [self.l2, self.m2, self.n2]])

    def as_tuple(self) -> tuple[float, ...]:
        return (self.l1, self.m1, self.n1, self.l2, self.m2, self.n2)

    @cached_property
    def scale(self) -> float:
        """Frobenius norm of the pair of Hessians; invariant under both frame rotations."""
        r = math.sqrt(2.0)
        return math.hypot(self.l1, r * self.m1, self.n1, self.l2, r * self.m2, self.n2)

    def forms(self) -> tuple[QuadraticForm2, QuadraticForm2]:
        return (QuadraticForm2(self.l1, self.m1, self.n1),
                QuadraticForm2(self.l2, self.m2, self.n2))

    def minors(self) -> tuple[float, float, float]:
        """``(l1 m2 - l2 m1, l1 n2 - l2 n1, m1 n2 - m2 n1)``."""
        return (self.l1 * self.m2 - self.l2 * self.m1,
                self.l1 * self.n2 - self.l2 * self.n1,
                self.m1 * self.n2 - self.m2 * self.n1)

    @cached_property
    def singular_values(self) -> tuple[float, float]:
        """Singular values of the rows ``(l, sqrt(2) m, n)``; both frame rotations preserve them.

        The product of the two is the norm of the cross product of the rows,
        which is built from the minors, so the small one carries no cancellation.
        """
        r = math.sqrt(2.0)
        g11 = self.l1 * self.l1 + 2 * self.m1 * self.m1 + self.n1 * self.n1
        g22 = self.l2 * self.l2 + 2 * self.m2 * self.m2 + self.n2 * self.n2
        g12 = self.l1 * self.l2 + 2 * self.m1 * self.m2 + self.n1 * self.n2
        s1 = math.sqrt((g11 + g22 + math.hypot(g11 - g22, 2 * g12)) / 2)
        if s1 == 0:
            return 0.0, 0.0
        A, B, C = self.minors()
        return s1, min(s1, math.hypot(r * A, B, r * C) / s1)

    def rank(self, tol: float = TAU_DEG) -> int:
        """Rank 0 only for the zero form; rank 1 when the smaller singular value is negligible."""
        s = self.scale
        if s == 0:
            return 0
        return 1 if is_zero(self.singular_values[1], s, tol) else 2

    def __str__(self) -> str:
        return "({:.12g}, {:.12g}, {:.12g}; {:.12g}, {:.12g}, {:.12g})".format(*self.as_tuple())


@dataclass(frozen=True)
class MongeSurface4:
    """The surface ``X(x, y) = (x, y, f1(x, y), f2(x, y))``."""

    f1: Expr
    f2: Expr

    @classmethod
    def parse(cls, f1: str, f2: str) -> "MongeSurface4":
        return cls(parse_expression(f1), parse_expression(f2))

    def jets(self, p) -> tuple[Jet2, Jet2]:
        return jet2(self.f1, p), jet2(self.f2, p)

    def is_monge_at(self, p, tol: float = TAU_FRAME) -> bool:
        j1, j2 = self.jets(p)
        return all(abs(g) <= tol for g in (*j1.grad, *j2.grad))

    def require_monge(self, p, tol: float = TAU_FRAME) -> None:
        if not self.is_monge_at(p, tol):
            raise NotMongeError(f"gradients of f1, f2 do not vanish at {tuple(p)}")

    def __str__(self) -> str:
        return f"(x, y, {format_expr(self.f1)}, {format_expr(self.f2)})"


@dataclass(frozen=True, eq=False)
class AdaptedFrame:
    """Orthonormal frame ``e1..e4`` of R^4 with ``(X_x, X_y) @ P == (e1, e2)``."""

    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    e4: np.ndarray
    P: np.ndarray

    def matrix(self) -> np.ndarray:
        return np.column_stack([self.e1, self.e2, self.e3, self.e4])


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def frame_from_tangents(Xx: np.ndarray, Xy: np.ndarray) -> AdaptedFrame:
    """Gram-Schmidt tangent frame, normals completed from the ambient 3rd/4th axes."""
    a = np.linalg.norm(Xx)
    if a == 0:
        raise NotImmersionError("X_x vanishes")
    e1 = Xx / a
    c = float(e1 @ Xy)
    w = Xy - c * e1
    d = np.linalg.norm(w)
    if d <= 1e-12 * max(np.linalg.norm(Xy), 1.0):
        raise NotImmersionError("X_x and X_y are linearly dependent")
    e2 = w / d
    P = np.array([[1 / a, -c / (a * d)], [0.0, 1 / d]])
    n3 = np.array([0.0, 0.0, 1.0, 0.0])
    n4 = np.array([0.0, 0.0, 0.0, 1.0])
    n3 = _unit(n3 - (n3 @ e1) * e1 - (n3 @ e2) * e2)
    n4 = _unit(n4 - (n4 @ e1) * e1 - (n4 @ e2) * e2 - (n4 @ n3) * n3)
    return AdaptedFrame(e1, e2, n3, n4, P)


def _embedding_data(S: MongeSurface4, p) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    j1, j2 = S.jets(p)
    Xx = np.array([1.0, 0.0, j1.dx, j2.dx])
    Xy = np.array([0.0, 1.0, j1.dy, j2.dy])
    H = np.zeros((4, 2, 2))
    H[2] = j1.hess
    H[3] = j2.hess
    return Xx, Xy, H


def _project_hessians(H: np.ndarray, normals) -> SecondFundamentalForm:
    rows = []
    for nu in normals:
        Hn = np.einsum("k,kij->ij", nu, H)
        rows.append((Hn[0, 0], Hn[0, 1], Hn[1, 1]))
    return SecondFundamentalForm.from_rows(*rows)


def adapted_sff(S: MongeSurface4, p=(0.0, 0.0)) -> tuple[AdaptedFrame, SecondFundamentalForm]:
    """Adapted orthonormal frame at ``p`` and the second fundamental form in it."""
    Xx, Xy, H = _embedding_data(S, p)
    frame = frame_from_tangents(Xx, Xy)
    Ht = np.einsum("ia,kij,jb->kab", frame.P, H, frame.P)
    return frame, _project_hessians(Ht, (frame.e3, frame.e4))


def coordinate_sff(S: MongeSurface4, p) -> SecondFundamentalForm:
    """Coefficients w.r.t. the coordinate tangent basis ``(X_x, X_y)`` and the adapted normals.

    Asymptotic directions computed from these coefficients are coordinate
    directions ``dx : dy``.
    """
    Xx, Xy, H = _embedding_data(S, p)
    frame = frame_from_tangents(Xx, Xy)
    return _project_hessians(H, (frame.e3, frame.e4))


def rotate_tangent(alpha: SecondFundamentalForm, phi: float) -> SecondFundamentalForm:
    """Coefficients after rotating the tangent frame by ``phi``.

    The new frame is ``e1' = cos(phi) e1 + sin(phi) e2``, ``e2' = -sin(phi) e1 + cos(phi) e2``.
    """
    c, s = math.cos(phi), math.sin(phi)
    return rotate_tangent_cs(alpha, c, s)


def rotate_tangent_cs(alpha: SecondFundamentalForm, c: float, s: float) -> SecondFundamentalForm:
    rows = []
    for l, m, n in ((alpha.l1, alpha.m1, alpha.n1), (alpha.l2, alpha.m2, alpha.n2)):
        rows.append((
            l * c * c + 2 * m * c * s + n * s * s,
            -l * c * s + m * (c * c - s * s) + n * c * s,
            l * s * s - 2 * m * c * s + n * c * c,
        ))
    return SecondFundamentalForm.from_rows(*rows)


def rotate_normal(alpha: SecondFundamentalForm, psi: float) -> SecondFundamentalForm:
    """Coefficients after rotating the normal frame by ``psi``."""
    c, s = math.cos(psi), math.sin(psi)
    a = alpha.as_array()
    return SecondFundamentalForm.from_array(np.array([[c, s], [-s, c]]) @ a)


def height_hessian(alpha: SecondFundamentalForm, phi: float) -> QuadraticForm2:
    """Hessian of the height function along ``cos(phi) e3 + sin(phi) e4``."""
    c, s = math.cos(phi), math.sin(phi)
    return QuadraticForm2(alpha.l1 * c + alpha.l2 * s,
                          alpha.m1 * c + alpha.m2 * s,
                          alpha.n1 * c + alpha.n2 * s)
