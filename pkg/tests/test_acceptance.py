"""Acceptance suite: one recorded pass/fail line per criterion."""

import math

import numpy as np
import pytest

from curvloci.fundforms import SecondFundamentalForm, adapted_sff, rotate_normal, rotate_tangent
from curvloci.jet import jet2
from curvloci.loci import (
    EllipseKind,
    PointType,
    TangentDirection,
    analyze_point,
    bde_discriminant,
    curvature_ellipse,
    ellipse_degeneracy_test,
    resultant,
)
from curvloci.projection import (
    ParabolaKind,
    _finite_roots,
    asymptotic_directions_corank,
    corank_sff,
    count_directions,
    curvature_parabola,
    mond_orbit,
    project,
    projection_angle,
)
from curvloci.verify import (
    Row,
    check_correspondence,
    ellipse_min_distance,
    ellipse_position_oracle,
    fuzz_correspondence,
    scan_parabola_roots,
)
from helpers import EXAMPLE_I, EXAMPLE_II, EXAMPLE_III, random_smooth_expr, surface

TOL = 1e-9
V_Y, V_X = TangentDirection(0, 1), TangentDirection(1, 0)


@pytest.fixture(scope="module")
def fuzz_summary():
    return fuzz_correspondence(10_000, seed=42)


def test_criterion_1_example_i(criterion):
    S = surface(EXAMPLE_I)
    _, a = adapted_sff(S, (0, 0))
    rep = analyze_point(a)
    ell = rep.ellipse
    par = curvature_parabola(corank_sff(project(S, (0, 0), V_Y)))
    corr = check_correspondence(S, (0, 0), V_Y)
    checks = {
        "semiumbilic": rep.point_type is PointType.SEMIUMBILIC,
        "segment": ell.kind is EllipseKind.SEGMENT,
        "line misses p": not ell.through_origin,
        "endpoints": ell.endpoints is not None
        and np.allclose(ell.endpoints[0], [1, 0], atol=TOL)
        and np.allclose(ell.endpoints[1], [3, 4], atol=TOL),
        "nondegenerate parabola": par.kind is ParabolaKind.PARABOLA,
        "origin outside": corr.parabola_side["position"] == "outside",
        "row ii": corr.theorem_row is Row.II and corr.all_ok,
    }
    ok = all(checks.values())
    criterion(1, ok, ", ".join(k for k, v in checks.items() if not v) or "all facts hold")
    assert ok, checks


def test_criterion_2_example_ii(criterion):
    S = surface(EXAMPLE_II)
    _, a = adapted_sff(S, (0, 0))
    rep = analyze_point(a)
    ell = rep.ellipse
    along_y = curvature_parabola(corank_sff(project(S, (0, 0), V_Y)))
    along_x = curvature_parabola(corank_sff(project(S, (0, 0), V_X)))
    reports = [check_correspondence(S, (0, 0), v) for v in (V_Y, V_X)]
    checks = {
        "inflection endpoint": rep.point_type is PointType.INFLECTION_AT,
        "segment (0,0)-(2,2)": ell.kind is EllipseKind.SEGMENT
        and [e.tolist() for e in ell.endpoints] == [[0, 0], [2, 2]],
        "point (2,2) along y": along_y.kind is ParabolaKind.POINT and along_y.base.tolist() == [2, 2],
        "half-line from origin along x": along_x.kind is ParabolaKind.HALF_LINE
        and np.allclose(along_x.base, [0, 0], atol=TOL)
        and np.allclose(along_x.direction, np.array([1, 1]) / math.sqrt(2), atol=TOL),
        "row iv both": all(r.theorem_row is Row.IV and r.all_ok for r in reports),
    }
    ok = all(checks.values())
    criterion(2, ok, ", ".join(k for k, v in checks.items() if not v) or "all facts hold")
    assert ok, checks


def test_criterion_3_example_iii(criterion):
    S = surface(EXAMPLE_III)
    _, a = adapted_sff(S, (0, 0))
    rep = analyze_point(a)
    par = curvature_parabola(corank_sff(project(S, (0, 0), V_Y)))
    corr = check_correspondence(S, (0, 0), V_Y)
    checks = {
        "umbilic nonflat": rep.point_type is PointType.UMBILIC_NONFLAT,
        "point (2,2)": rep.ellipse.kind is EllipseKind.POINT and rep.ellipse.center.tolist() == [2, 2],
        "half-line from (2,2)": par.kind is ParabolaKind.HALF_LINE
        and np.allclose(par.base, [2, 2], atol=TOL)
        and np.allclose(par.direction, np.array([1, 1]) / math.sqrt(2), atol=TOL),
        "row iv": corr.theorem_row is Row.IV and corr.all_ok,
    }
    ok = all(checks.values())
    criterion(3, ok, ", ".join(k for k, v in checks.items() if not v) or "all facts hold")
    assert ok, checks


def test_criterion_4_fuzz(criterion, fuzz_summary):
    s = fuzz_summary
    rows_hit = all(s.rows.get(r.value, 0) > 0 for r in Row)
    ok = (s.n_samples == 10_000 and s.n_checks == 80_000 and s.theorem_pass == s.n_checks
          and s.count_pass == s.n_checks and s.binormal_pass == s.n_checks and rows_hit)
    criterion(4, ok, f"{s.n_samples} samples x 8 directions, {len(s.failures)} failures, rows {s.rows}")
    assert ok, s.failures[:5]


def test_criterion_5_oracles(criterion):
    rng = np.random.default_rng(5)
    ellipses = agree_e = 0
    while ellipses < 1000:
        a = SecondFundamentalForm(*rng.normal(size=6))
        rep = analyze_point(a)
        if rep.ellipse.kind is not EllipseKind.ELLIPSE or ellipse_min_distance(a) <= 1e-6:
            continue
        ellipses += 1
        expected = {PointType.ELLIPTIC: "inside", PointType.HYPERBOLIC: "outside",
                    PointType.PARABOLIC: "on"}[rep.point_type]
        agree_e += ellipse_position_oracle(a) == expected
    parabolas = agree_p = 0
    while parabolas < 1000:
        coefs = rng.integers(-3, 4, 6) if parabolas % 2 else rng.normal(size=6)
        a = SecondFundamentalForm(*(float(c) for c in coefs))
        if curvature_parabola(a).kind is not ParabolaKind.PARABOLA:
            continue
        parabolas += 1
        agree_p += scan_parabola_roots(a) == len(_finite_roots(a, TOL))
    ok = agree_e == ellipses and agree_p == parabolas
    criterion(5, ok, f"ellipses {agree_e}/{ellipses}, parabolas {agree_p}/{parabolas}")
    assert ok


def test_criterion_6_identities(criterion):
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(1000):
        a = SecondFundamentalForm(*rng.normal(size=6))
        A, B, C = a.minors()
        M = curvature_ellipse(a).M
        errors = [
            bde_discriminant(a) + 4 * resultant(a),
            ellipse_degeneracy_test(a) - 2 * np.linalg.det(M),
            ellipse_degeneracy_test(a) - (A + C),
        ]
        par = curvature_parabola(a)
        for theta in rng.uniform(0, math.pi, 8):
            if abs(math.cos(theta)) <= 0.1:
                continue
            eta_e = curvature_ellipse(a).at(theta)
            errors.extend(eta_e / math.cos(theta) ** 2 - par.at(math.tan(theta)))
        worst = max(worst, max(abs(float(e)) for e in errors))
    ok = worst <= 1e-10
    criterion(6, ok, f"max deviation {worst:.3g} over 1000 random forms")
    assert ok


def test_criterion_7_crosscap(criterion, fuzz_summary):
    s = fuzz_summary
    ok = s.crosscap_pass == s.n_checks
    criterion(7, ok, f"{s.crosscap_pass}/{s.n_checks} directions")
    assert ok


def _classes(a: SecondFundamentalForm, v_angle: float):
    rep = analyze_point(a)
    a_p = rotate_tangent(a, projection_angle(TangentDirection.from_angle(v_angle)))
    return (rep.point_type, rep.n_asymptotic, rep.g_orbit, curvature_parabola(a_p).kind,
            mond_orbit(a_p), count_directions(asymptotic_directions_corank(a_p)))


def test_criterion_8_rotation_invariance(criterion):
    rng = np.random.default_rng(8)
    samples = mismatches = 0
    for i in range(100):
        coefs = rng.integers(-3, 4, 6) if i % 2 else rng.normal(size=6)
        a = SecondFundamentalForm(*(float(c) for c in coefs))
        v_angle = float(rng.uniform(0, math.pi))
        ref = _classes(a, v_angle)
        for _ in range(100):
            phi, psi = rng.uniform(0, 2 * math.pi, 2)
            r = rotate_normal(rotate_tangent(a, phi), psi)
            # the projection direction moves with the tangent frame
            mismatches += _classes(r, v_angle - phi) != ref
            samples += 1
    ok = mismatches == 0
    criterion(8, ok, f"{samples - mismatches}/{samples} rotated forms keep every class")
    assert ok


def test_criterion_9_jets(criterion):
    rng = np.random.default_rng(9)
    h = 1e-5
    bad = 0
    for _ in range(500):
        e = random_smooth_expr(rng)
        x, y = rng.uniform(-1, 1, 2)
        j = jet2(e, (x, y))

        def val(a, b):
            return jet2(e, (a, b)).value

        def grad(a, b):
            return np.array(jet2(e, (a, b)).grad)

        # Hessian from central differences of the exact gradient: a second
        # difference of values would carry roundoff near 1e-6 at this h
        g = np.array([(val(x + h, y) - val(x - h, y)) / (2 * h), (val(x, y + h) - val(x, y - h)) / (2 * h)])
        hx = (grad(x + h, y) - grad(x - h, y)) / (2 * h)
        hy = (grad(x, y + h) - grad(x, y - h)) / (2 * h)
        fd = np.array([*g, hx[0], hx[1], hy[1]])
        got = np.array([j.dx, j.dy, j.dxx, j.dxy, j.dyy])
        bad += not np.all(np.abs(got - fd) <= 1e-6 * np.maximum(1.0, np.abs(fd)))
    ok = bad == 0
    criterion(9, ok, f"{500 - bad}/500 expressions within 1e-6")
    assert ok
