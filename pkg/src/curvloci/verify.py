"""Cross-checks between the curvature ellipse of a surface in R^4 and the
curvature parabola of its projections along tangent directions.

Each side is classified by its own module; the checks compare the two
classifications against the five-row correspondence table, the equality of
asymptotic-direction counts, the equality of binormal directions and the
cross-cap criterion.  Position claims are additionally re-derived with
brute-force oracles (winding numbers, sign scans).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from ._numeric import ALL, TAU_DEG, angle_distance_mod_pi, is_zero
from .expr import quadratic_expr
from .fundforms import MongeSurface4, SecondFundamentalForm, adapted_sff
from .loci import (
    EllipseKind,
    PointReport,
    PointType,
    TangentDirection,
    analyze_point,
    bde_vanishes,
    curvature_ellipse,
)
from .projection import (
    MondOrbit,
    ParabolaKind,
    _finite_roots,
    asymptotic_directions_corank,
    binormal_directions_corank,
    corank_sff_from_jets,
    count_directions,
    curvature_parabola,
    mond_orbit,
    parabola_position,
    projection_jets,
)

FIXED_DIRECTIONS = (
    TangentDirection(0, 1),
    TangentDirection(1, 0),
    TangentDirection(1, 1),
    TangentDirection(1, -1),
)
BINORMAL_SET_TOL = 1e-6
WINDING_SAMPLES = 4096
EPS_ON = 1e-7


class OracleDisagreement(RuntimeError):
    """Two independent computations of the same fact disagree."""


class Row(str, Enum):
    I = "i"
    II = "ii"
    III = "iii"
    IV = "iv"
    V = "v"


# --------------------------------------------------------------------------
# Oracles
# --------------------------------------------------------------------------


def _ellipse_samples(alpha: SecondFundamentalForm, theta: np.ndarray) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    q1, q2 = alpha.forms()
    return np.stack([q1.a * c * c + 2 * q1.b * c * s + q1.c * s * s,
                     q2.a * c * c + 2 * q2.b * c * s + q2.c * s * s], axis=-1)


def winding_number(points: np.ndarray) -> float:
    """Winding number of the closed polygon ``points`` about the origin."""
    ang = np.arctan2(points[:, 1], points[:, 0])
    d = np.diff(np.concatenate([ang, ang[:1]]))
    d = (d + np.pi) % (2 * np.pi) - np.pi
    return float(d.sum() / (2 * np.pi))


def _segment_distances(points: np.ndarray) -> np.ndarray:
    a = points
    b = np.roll(points, -1, axis=0)
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.where(denom > 0, -np.einsum("ij,ij->i", a, ab) / np.where(denom > 0, denom, 1), 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = a + t[:, None] * ab
    return np.hypot(closest[:, 0], closest[:, 1])


def ellipse_min_distance(alpha: SecondFundamentalForm, n: int = WINDING_SAMPLES) -> float:
    """Distance from the origin to the curvature ellipse, sampled then refined."""
    theta = np.linspace(0.0, np.pi, n, endpoint=False)
    pts = _ellipse_samples(alpha, theta)
    dist = _segment_distances(pts)
    k = int(np.argmin(dist))
    if dist[k] > 1e-3 * float(np.max(np.hypot(pts[:, 0], pts[:, 1]))):
        # far from the curve; the polygon distance is accurate enough
        return float(dist[k])
    step = np.pi / n

    def f(t):
        p = _ellipse_samples(alpha, np.array([t]))[0]
        return float(np.hypot(p[0], p[1]))

    res = minimize_scalar(f, bounds=(theta[k] - 2 * step, theta[k] + 3 * step),
                          method="bounded", options={"xatol": 1e-14})
    return min(float(res.fun), float(dist[k]))


def ellipse_position_oracle(alpha: SecondFundamentalForm, tol: float = TAU_DEG,
                            n: int = WINDING_SAMPLES) -> str:
    """Position of the origin relative to the curvature ellipse from a winding number.

    Returns ``inside``, ``outside``, ``on`` or ``degenerate``.
    """
    if curvature_ellipse(alpha, tol).kind is not EllipseKind.ELLIPSE:
        return "degenerate"
    scale = alpha.scale
    if ellipse_min_distance(alpha, n) < EPS_ON * scale:
        return "on"
    theta = np.linspace(0.0, np.pi, n, endpoint=False)
    w = winding_number(_ellipse_samples(alpha, theta))
    rounded = round(w)
    if abs(w - rounded) > 1e-6 or abs(rounded) > 1:
        raise OracleDisagreement(f"winding number {w} is not 0 or +-1")
    return "inside" if abs(rounded) == 1 else "outside"


def _trig(theta):
    theta = np.asarray(theta, dtype=float)
    return np.cos(theta), np.sin(theta)


def _homogeneous_jacobians(alpha: SecondFundamentalForm, theta, trig=None):
    # eta(u, w) = A u^2 + B u w + C w^2; columns of its Jacobian along the unit
    # circle and their derivatives in theta, each as (first, second) component
    u, w = _trig(theta) if trig is None else trig
    l1, m1, n1, l2, m2, n2 = alpha.as_tuple()
    j1 = (2 * (l1 * u + m1 * w), 2 * (l2 * u + m2 * w))
    j2 = (2 * (m1 * u + n1 * w), 2 * (m2 * u + n2 * w))
    d1 = (2 * (m1 * u - l1 * w), 2 * (m2 * u - l2 * w))
    d2 = (2 * (n1 * u - m1 * w), 2 * (n2 * u - m2 * w))
    return j1, j2, d1, d2


def _det2(p, q):
    return p[0] * q[1] - p[1] * q[0]


def _parabola_det(alpha: SecondFundamentalForm, theta, trig=None) -> np.ndarray:
    """``det(eta, eta')`` in homogeneous form: half the Jacobian determinant at ``(cos, sin)``.

    Homogenizing keeps every sample at unit size, so no cancellation of large
    powers of the parameter occurs near degenerate parabolas.
    """
    j1, j2, _, _ = _homogeneous_jacobians(alpha, theta, trig)
    return 0.5 * _det2(j1, j2)


def _parabola_det_slope(alpha: SecondFundamentalForm, theta, trig=None) -> np.ndarray:
    j1, j2, d1, d2 = _homogeneous_jacobians(alpha, theta, trig)
    return 0.5 * (_det2(d1, j2) + _det2(j1, d2))


def _sign_changes(values: np.ndarray, cyclic: bool = False) -> int:
    signs = np.sign(values)
    signs = signs[signs != 0]
    if cyclic and signs.size:
        signs = np.append(signs, signs[0])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


@lru_cache(maxsize=4)
def _scan_grid(samples: int):
    grid = np.linspace(0.0, np.pi, samples + 1)
    trig = _trig(grid)
    for arr in (grid, *trig):
        arr.setflags(write=False)
    return grid, trig


def scan_parabola_roots(alpha: SecondFundamentalForm, tol: float = TAU_DEG,
                        samples: int = 64) -> float:
    """Number of asymptotic directions found by scanning all source directions.

    The sign of ``det(eta, eta')`` is sampled around the projective line, its
    extrema are located by root finding on the slope, and an extremum that is
    negligible next to the other one counts as a tangential (double) root.
    """
    grid, trig = _scan_grid(samples)
    slope = _parabola_det_slope(alpha, grid, trig)
    def slope_at(t: float) -> float:
        return _parabola_det_slope(alpha, None, (math.cos(t), math.sin(t)))

    critical = [brentq(slope_at, grid[i], grid[i + 1], xtol=1e-15)
                for i in np.nonzero(np.sign(slope[1:]) * np.sign(slope[:-1]) < 0)[0]]
    theta = np.sort(np.concatenate([grid[:-1], critical, grid[:-1][slope[:-1] == 0]]))
    values = _parabola_det(alpha, theta)
    hi, lo = float(values.max()), float(values.min())
    if hi == lo == 0:
        return math.inf
    if abs(hi * lo) <= tol * (hi * hi + lo * lo):
        return 1
    return _sign_changes(values, cyclic=True)


def parabola_position_oracle(alpha: SecondFundamentalForm, tol: float = TAU_DEG) -> str:
    """Origin position w.r.t. a non-degenerate curvature parabola.

    The sign-scan root count and the closed-form root count must agree;
    otherwise :class:`OracleDisagreement` is raised.
    """
    if curvature_parabola(alpha, tol).kind is not ParabolaKind.PARABOLA:
        return "degenerate"
    scanned = scan_parabola_roots(alpha, tol)
    closed = len(_finite_roots(alpha, tol))
    if scanned != closed:
        raise OracleDisagreement(
            f"sign scan found {scanned} roots, closed form {closed} for alpha={alpha}")
    return ("inside", "on", "outside")[closed]


# --------------------------------------------------------------------------
# Correspondence
# --------------------------------------------------------------------------


@dataclass
class CorrespondenceReport:
    direction: TangentDirection
    alpha: SecondFundamentalForm
    alpha_projected: SecondFundamentalForm
    ellipse_side: dict
    parabola_side: dict
    v_asymptotic: bool
    theorem_row: Row | None
    parabola_row: Row | None
    passed: bool
    asymptotic_counts: tuple[float, float]
    binormals_match: bool
    crosscap_ok: bool
    oracle_ok: bool = True
    diagnostics: list[str] = field(default_factory=list)

    @property
    def counts_match(self) -> bool:
        return self.asymptotic_counts[0] == self.asymptotic_counts[1]

    @property
    def all_ok(self) -> bool:
        return (self.passed and self.counts_match and self.binormals_match
                and self.crosscap_ok and self.oracle_ok)

    def to_dict(self) -> dict:
        def count(n):
            return "inf" if math.isinf(n) else int(n)

        return {
            "direction": [self.direction.a, self.direction.b],
            "alpha": list(self.alpha.as_tuple()),
            "alpha_projected": list(self.alpha_projected.as_tuple()),
            "ellipse_side": self.ellipse_side,
            "parabola_side": self.parabola_side,
            "v_asymptotic": self.v_asymptotic,
            "theorem_row": self.theorem_row.value if self.theorem_row else None,
            "parabola_row": self.parabola_row.value if self.parabola_row else None,
            "pass": self.passed,
            "asymptotic_counts": [count(n) for n in self.asymptotic_counts],
            "binormals_match": self.binormals_match,
            "crosscap_ok": self.crosscap_ok,
            "oracle_ok": self.oracle_ok,
            "diagnostics": list(self.diagnostics),
        }


_ELLIPSE_POSITION = {
    PointType.ELLIPTIC: "inside",
    PointType.HYPERBOLIC: "outside",
    PointType.PARABOLIC: "on",
}


def _ellipse_side(report: PointReport, tol: float) -> tuple[dict, Row]:
    ell = report.ellipse
    s = report.alpha.scale
    if ell.kind is EllipseKind.ELLIPSE:
        pos = _ELLIPSE_POSITION[report.point_type]
        row = {"inside": Row.I, "outside": Row.II, "on": Row.III}[pos]
    elif ell.kind is EllipseKind.SEGMENT:
        through = ell.through_origin
        pos = "line_contains_p" if through else "line_misses_p"
        row = Row.IV if through else Row.II
    else:
        at_p = is_zero(float(np.hypot(*ell.center)), s, tol)
        pos = "is_p" if at_p else "not_p"
        row = Row.V if at_p else Row.IV
    side = {"point_type": report.point_type.value, "locus": ell.kind.value, "position": pos}
    return side, row


def _parabola_side(alpha: SecondFundamentalForm, tol: float, mond: MondOrbit) -> tuple[dict, Row, ParabolaKind]:
    par = curvature_parabola(alpha, tol)
    s = alpha.scale
    if par.kind is ParabolaKind.PARABOLA:
        pos = parabola_position(alpha, tol)
        row = {"inside": Row.I, "outside": Row.II, "on": Row.III}[pos]
    elif par.kind is ParabolaKind.POINT:
        at_p = is_zero(float(np.hypot(*par.base)), s, tol)
        pos = "is_p" if at_p else "not_p"
        row = Row.V if at_p else Row.IV
    else:
        through = par.through_origin
        pos = "line_contains_p" if through else "line_misses_p"
        if through:
            row = Row.IV
        else:
            n = count_directions(asymptotic_directions_corank(alpha, tol))
            row = Row.II if n == 2 else Row.III
    side = {"locus": par.kind.value, "position": pos, "mond_orbit": mond.value}
    return side, row, par.kind


def _binormal_sets_equal(a, b) -> bool:
    if a is ALL or b is ALL:
        return a is b
    if len(a) != len(b):
        return False
    return all(min(angle_distance_mod_pi(s, t) for t in b) < BINORMAL_SET_TOL for s in a)


def is_asymptotic(report: PointReport, v: TangentDirection, tol: float = TAU_DEG) -> bool:
    """Whether the BDE vanishes at ``v``.

    This is the test the projection side applies to its cross-cap term, so
    both sides agree on directions close to a (double) asymptotic direction.
    """
    if report.asymptotic is ALL:
        return True
    return bde_vanishes(report.alpha, *v.unit(), tol)


def _compare(report: PointReport, S: MongeSurface4, p, v: TangentDirection,
             tol: float, oracles: bool) -> CorrespondenceReport:
    alpha_p = corank_sff_from_jets(projection_jets(S, p, v), tol)
    v_asym = is_asymptotic(report, v, tol)
    e_side, e_row = _ellipse_side(report, tol)
    mond = mond_orbit(alpha_p, tol)
    p_side, p_row, p_kind = _parabola_side(alpha_p, tol, mond)
    diagnostics = []

    passed = e_row == p_row
    if not passed:
        diagnostics.append(f"ellipse side gives row {e_row.value}, parabola side row {p_row.value}")
    if e_row in (Row.II, Row.III) and (p_kind is ParabolaKind.PARABOLA) == v_asym:
        passed = False
        diagnostics.append(f"parabola kind {p_kind.value} inconsistent with v_asymptotic={v_asym}")
    if e_row is Row.I and v_asym:
        passed = False
        diagnostics.append("row i with an asymptotic projection direction")

    n_r4 = report.n_asymptotic
    n_cr = count_directions(asymptotic_directions_corank(alpha_p, tol))
    if n_r4 != n_cr:
        diagnostics.append(f"asymptotic counts differ: {n_r4} vs {n_cr}")
    binormals_ok = _binormal_sets_equal(report.binormals, binormal_directions_corank(alpha_p, tol))
    if not binormals_ok:
        diagnostics.append("binormal direction sets differ")
    crosscap = mond is MondOrbit.CROSSCAP
    crosscap_ok = crosscap == (not v_asym)
    if not crosscap_ok:
        diagnostics.append(f"cross-cap={crosscap} but v_asymptotic={v_asym}")

    oracle_ok = True
    if oracles and p_kind is ParabolaKind.PARABOLA:
        try:
            scanned = parabola_position_oracle(alpha_p, tol)
        except OracleDisagreement as exc:
            oracle_ok = False
            diagnostics.append(str(exc))
        else:
            if scanned != p_side["position"]:
                oracle_ok = False
                diagnostics.append(f"parabola oracle says {scanned}, classifier {p_side['position']}")

    return CorrespondenceReport(
        direction=v,
        alpha=report.alpha,
        alpha_projected=alpha_p,
        ellipse_side=e_side,
        parabola_side=p_side,
        v_asymptotic=v_asym,
        theorem_row=e_row,
        parabola_row=p_row,
        passed=passed,
        asymptotic_counts=(n_r4, n_cr),
        binormals_match=binormals_ok,
        crosscap_ok=crosscap_ok,
        oracle_ok=oracle_ok,
        diagnostics=diagnostics,
    )


def _ellipse_oracle_check(report: PointReport, tol: float) -> str | None:
    """Disagreement message between the winding oracle and the resultant, if any.

    An oracle answer of "on" only says the origin lies within ``EPS_ON`` of the
    sampled curve, where the winding number is not trustworthy; it is taken as
    inconclusive unless the resultant also says "on".
    """
    if report.ellipse.kind is not EllipseKind.ELLIPSE:
        return None
    try:
        pos = ellipse_position_oracle(report.alpha, tol)
    except OracleDisagreement as exc:
        return str(exc)
    expected = _ELLIPSE_POSITION[report.point_type]
    if pos != expected and pos != "on":
        return f"winding oracle says {pos}, resultant says {expected}"
    return None


def check_correspondence_many(S: MongeSurface4, p, directions, tol: float = TAU_DEG,
                              oracles: bool = True) -> list[CorrespondenceReport]:
    """:func:`check_correspondence` for several directions, sharing the R^4 analysis."""
    S.require_monge(p)
    _, alpha = adapted_sff(S, p)
    report = analyze_point(alpha, tol)
    ellipse_msg = _ellipse_oracle_check(report, tol) if oracles else None
    out = []
    for v in directions:
        r = _compare(report, S, p, v, tol, oracles)
        if ellipse_msg:
            r.oracle_ok = False
            r.diagnostics.append(ellipse_msg)
        out.append(r)
    return out


def check_correspondence(S: MongeSurface4, p, v: TangentDirection, tol: float = TAU_DEG,
                         oracles: bool = True) -> CorrespondenceReport:
    """Classify both loci independently and match them against the five rows."""
    return check_correspondence_many(S, p, [v], tol, oracles)[0]


# --------------------------------------------------------------------------
# Sample construction
# --------------------------------------------------------------------------


def surface_from_alpha(alpha: SecondFundamentalForm) -> MongeSurface4:
    """Quadratic Monge surface whose second fundamental form at the origin is ``alpha``."""
    a = alpha
    return MongeSurface4(quadratic_expr(a.l1 / 2, a.m1, a.n1 / 2),
                         quadratic_expr(a.l2 / 2, a.m2, a.n2 / 2))


def _ints(rng: np.random.Generator, k: int, lo: int = -5, hi: int = 5) -> list[int]:
    return [int(v) for v in rng.integers(lo, hi + 1, size=k)]


def random_alpha(rng: np.random.Generator) -> SecondFundamentalForm:
    return SecondFundamentalForm(*_ints(rng, 6))


def _from_forms(q1, q2) -> SecondFundamentalForm:
    return SecondFundamentalForm(*q1, *q2)


def _product_form(p0, q0, p1, q1) -> tuple[float, float, float]:
    # (p0 x + q0 y)(p1 x + q1 y) as (l, m, n) of l x^2 + 2 m xy + n y^2
    return (p0 * p1, (p0 * q1 + q0 * p1) / 2, q0 * q1)


def _rejection(rng, make, accept, tries: int = 10_000) -> SecondFundamentalForm:
    for _ in range(tries):
        alpha = make()
        if accept(alpha):
            return alpha
    raise RuntimeError("stratum constructor exhausted its attempts")


def stratum_alpha(row: Row, rng: np.random.Generator, tol: float = TAU_DEG) -> SecondFundamentalForm:
    """Integer-coefficient second fundamental form on the stratum of ``row``."""
    def ptype(a):
        return analyze_point(a, tol).point_type

    if row is Row.I:
        return _rejection(rng, lambda: random_alpha(rng), lambda a: ptype(a) is PointType.ELLIPTIC)
    if row is Row.II:
        variant = int(rng.integers(3))
        if variant == 0:
            return _rejection(rng, lambda: random_alpha(rng),
                              lambda a: ptype(a) is PointType.HYPERBOLIC)
        if variant == 1:
            return _rejection(rng, lambda: random_alpha(rng),
                              lambda a: ptype(a) is PointType.SEMIUMBILIC)

        def make_asym():
            # (m2, n2) proportional to (m1, n1): [0:1] is asymptotic
            l1, m1, n1, l2 = _ints(rng, 4)
            k = int(rng.integers(-2, 3))
            return SecondFundamentalForm(l1, m1, n1, l2, k * m1, k * n1)

        return _rejection(rng, make_asym, lambda a: ptype(a) in (PointType.HYPERBOLIC,
                                                                PointType.SEMIUMBILIC))
    if row is Row.III:
        def make_parabolic():
            # both forms share the linear factor (b x - a y), so [a:b] is the asymptotic direction
            a, b = FIXED_DIRECTIONS[int(rng.integers(4))].a, FIXED_DIRECTIONS[int(rng.integers(4))].b
            if rng.random() < 0.5:
                a, b = _ints(rng, 2, -3, 3)
            p1, q1, p2, q2 = _ints(rng, 4, -3, 3)
            return _from_forms(_product_form(b, -a, p1, q1), _product_form(b, -a, p2, q2))

        return _rejection(rng, make_parabolic, lambda a: ptype(a) is PointType.PARABOLIC)
    if row is Row.IV:
        def make_rank_one():
            w1, w2 = _ints(rng, 2, -3, 3)
            variant = int(rng.integers(3))
            if variant == 0:
                q = _ints(rng, 3)
            elif variant == 1:
                k = _ints(rng, 1)[0]
                q = [k, 0, k]
            else:
                p0, q0 = _ints(rng, 2, -3, 3)
                q = _product_form(p0, q0, p0, q0)
            return _from_forms([w1 * v for v in q], [w2 * v for v in q])

        return _rejection(rng, make_rank_one,
                          lambda a: a.scale > 0 and ptype(a).is_inflection
                          and ptype(a) is not PointType.FLAT_UMBILIC)
    return SecondFundamentalForm(0, 0, 0, 0, 0, 0)


# --------------------------------------------------------------------------
# Fuzzing
# --------------------------------------------------------------------------


@dataclass
class FuzzSummary:
    n_samples: int
    seed: int
    n_checks: int = 0
    theorem_pass: int = 0
    count_pass: int = 0
    binormal_pass: int = 0
    crosscap_pass: int = 0
    oracle_pass: int = 0
    rows: dict = field(default_factory=lambda: {r.value: 0 for r in Row})
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = asdict(self)
        d["failure_count"] = len(self.failures)
        d["ok"] = self.ok
        return d


def _sample_kinds(rng: np.random.Generator, n: int, strata_fraction: float):
    kinds = []
    for _ in range(n):
        if rng.random() < strata_fraction:
            kinds.append(list(Row)[int(rng.integers(5))])
        else:
            kinds.append(None)
    return kinds


def fuzz_correspondence(n: int, seed: int, tol: float = TAU_DEG, strata_fraction: float = 0.5,
                        random_directions: int = 4, oracles: bool = True) -> FuzzSummary:
    """Run the correspondence checks on ``n`` integer samples.

    A ``strata_fraction`` share of the samples comes from the per-row
    constructors; the rest are uniform in ``[-5, 5]^6``.  Each sample is
    projected along the four fixed directions and ``random_directions``
    uniformly random ones.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    summary = FuzzSummary(n_samples=n, seed=seed)
    for index, kind in enumerate(_sample_kinds(rng, n, strata_fraction)):
        alpha = random_alpha(rng) if kind is None else stratum_alpha(kind, rng, tol)
        dirs = list(FIXED_DIRECTIONS)
        dirs += [TangentDirection.from_angle(t) for t in rng.uniform(0, np.pi, random_directions)]
        S = surface_from_alpha(alpha)
        for rep in check_correspondence_many(S, (0.0, 0.0), dirs, tol, oracles):
            summary.n_checks += 1
            summary.theorem_pass += rep.passed
            summary.count_pass += rep.counts_match
            summary.binormal_pass += rep.binormals_match
            summary.crosscap_pass += rep.crosscap_ok
            summary.oracle_pass += rep.oracle_ok
            if rep.theorem_row is not None:
                summary.rows[rep.theorem_row.value] += 1
            if not rep.all_ok:
                failure = rep.to_dict()
                failure["sample"] = index
                summary.failures.append(failure)
    return summary
