import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvloci._numeric import ALL
from curvloci.fundforms import QuadraticForm2, SecondFundamentalForm, height_hessian, rotate_normal, rotate_tangent
from curvloci.loci import (
    EllipseKind,
    GOrbit,
    PointType,
    TangentDirection,
    analyze_point,
    asymptotic_directions_r4,
    bde_vanishes,
    bde_discriminant,
    binormal_directions_r4,
    classify_point_r4,
    curvature_ellipse,
    ellipse_degeneracy_test,
    ellipse_point,
    g_orbit,
    resultant,
    resultant_scale,
)
from helpers import alpha


def test_segment_example_i():
    ell = curvature_ellipse(alpha(2, 1, 2, 2, 2, 2))
    assert ell.kind is EllipseKind.SEGMENT
    assert np.allclose(ell.endpoints[0], [1, 0], atol=1e-9)
    assert np.allclose(ell.endpoints[1], [3, 4], atol=1e-9)


def test_segment_example_ii():
    ell = curvature_ellipse(alpha(2, 0, 0, 2, 0, 0))
    assert ell.kind is EllipseKind.SEGMENT
    assert ell.endpoints[0].tolist() == [0, 0]
    assert ell.endpoints[1].tolist() == [2, 2]


def test_point_example_iii():
    ell = curvature_ellipse(alpha(2, 0, 2, 2, 0, 2))
    assert ell.kind is EllipseKind.POINT
    assert ell.center.tolist() == [2, 2]


def test_ellipse_parametrization_matches_definition():
    a = alpha(1, -2, 0.5, 3, 1, -1)
    ell = curvature_ellipse(a)
    thetas = np.linspace(0, math.pi, 17)
    assert np.allclose(ell.at(thetas), [ellipse_point(a, t) for t in thetas])


@pytest.mark.parametrize("a, delta", [
    (alpha(2, 0, 0, 0, 0, 2), -4),
    (alpha(0, 1, 0, 2, 0, -2), 4),
    (alpha(0, 0, 0, 0, 0, 0), 0),
    (alpha(2, 1, 2, 2, 2, 2), -4),
])
def test_resultant_examples(a, delta):
    assert resultant(a) == delta


@pytest.mark.parametrize("a, expected", [
    (alpha(2, 1, 2, 2, 2, 2), PointType.SEMIUMBILIC),
    (alpha(2, 0, 0, 2, 0, 0), PointType.INFLECTION_AT),
    (alpha(2, 0, -2, 0, 0, 0), PointType.INFLECTION_REAL),
    (alpha(1, 0, 2, 3, 0, 6), PointType.INFLECTION_IMAGINARY),
    (alpha(2, 0, 2, 2, 0, 2), PointType.UMBILIC_NONFLAT),
    (alpha(0, 0, 0, 0, 0, 0), PointType.FLAT_UMBILIC),
    (alpha(2, 0, 0, 0, 0, 2), PointType.SEMIUMBILIC),
    (alpha(2, 0, 0, 0, 1, 1), PointType.HYPERBOLIC),
    (alpha(0, 1, 0, 2, 0, -2), PointType.ELLIPTIC),
    (alpha(0, 1, 1, 0, 0, 1), PointType.PARABOLIC),
    (alpha(2, 0, -2, 0, 1, 0), PointType.ELLIPTIC),
])
def test_classification(a, expected):
    assert classify_point_r4(a) is expected


def test_asymptotic_examples():
    dirs = asymptotic_directions_r4(alpha(2, 1, 2, 2, 2, 2))
    assert dirs == (TangentDirection(1, 1), TangentDirection(1, -1))
    assert asymptotic_directions_r4(alpha(0, 1, 0, 2, 0, -2)) == ()
    assert asymptotic_directions_r4(alpha(2, 0, 0, 2, 0, 0)) is ALL


def test_asymptotic_includes_vertical_direction():
    # x^2 and xy: BDE 2 dx^2 = 0 has the double root [0:1]
    assert asymptotic_directions_r4(alpha(2, 0, 0, 0, 1, 0)) == (TangentDirection(0, 1),)


def test_binormal_examples():
    assert binormal_directions_r4(alpha(2, 0, 0, 0, 0, 2)) == pytest.approx((0, math.pi / 2))
    assert binormal_directions_r4(alpha(2, 0, 0, 2, 0, 0)) is ALL
    assert binormal_directions_r4(alpha(2, 0, 2, 0, 0, 0)) == pytest.approx((math.pi / 2,))


@pytest.mark.parametrize("q1, q2, orbit", [
    (QuadraticForm2(1, 0, 0), QuadraticForm2(0, 0, 1), GOrbit.HYPERBOLIC),
    (QuadraticForm2(0, 0.5, 0), QuadraticForm2(1, 0, -1), GOrbit.ELLIPTIC),
    (QuadraticForm2(1, 0, 0), QuadraticForm2(0, 0.5, 0), GOrbit.PARABOLIC),
    (QuadraticForm2(1, 0, -1), QuadraticForm2(0, 0, 0), GOrbit.INFLECTION),
    (QuadraticForm2(1, 0, 0), QuadraticForm2(0, 0, 0), GOrbit.DEGENERATE_INFLECTION),
    (QuadraticForm2(0, 0, 0), QuadraticForm2(0, 0, 0), GOrbit.ZERO),
    (QuadraticForm2(1, 0.5, 1), QuadraticForm2(1, 1, 1), GOrbit.HYPERBOLIC),
])
def test_g_orbit(q1, q2, orbit):
    assert g_orbit(q1, q2) is orbit


def test_near_degenerate_flag():
    # parabolic (2,0,0;0,1,0) nudged so that delta sits inside the band
    rep = analyze_point(alpha(2, 0, 4e-8, 0, 1, 0))
    assert rep.point_type is PointType.HYPERBOLIC
    assert rep.near_degenerate
    assert not analyze_point(alpha(2, 0, 0.5, 0, 1, 0)).near_degenerate


def test_tangent_direction_normalization():
    d = TangentDirection(-2, 4)
    assert (d.a, d.b) == (-0.5, 1.0) or (d.a, d.b) == (0.5, -1.0)
    assert d == TangentDirection(1, -2)
    assert TangentDirection(0, -3) == TangentDirection(0, 1)
    assert TangentDirection.from_angle(math.pi / 4).same_as(TangentDirection(1, 1))


ints = st.integers(-5, 5)
int_alphas = st.tuples(ints, ints, ints, ints, ints, ints).map(
    lambda t: SecondFundamentalForm(*(float(v) for v in t)))
floats = st.floats(-10, 10, allow_nan=False)
float_alphas = st.tuples(floats, floats, floats, floats, floats, floats).map(
    lambda t: SecondFundamentalForm(*t))


@given(int_alphas)
def test_asymptotic_count_contract(a):
    rep = analyze_point(a)
    n = rep.n_asymptotic
    if rep.point_type is PointType.ELLIPTIC:
        assert n == 0 and rep.delta > 0
    elif rep.point_type is PointType.PARABOLIC:
        assert n == 1 and rep.delta == 0 and rep.rank == 2
    elif rep.point_type in (PointType.HYPERBOLIC, PointType.SEMIUMBILIC):
        assert n == 2 and rep.delta < 0
    else:
        assert n == math.inf and rep.rank < 2


@given(int_alphas)
def test_degenerate_ellipse_implies_nonpositive_resultant(a):
    if curvature_ellipse(a).kind is not EllipseKind.ELLIPSE:
        assert resultant(a) <= 0


@given(float_alphas)
def test_bde_discriminant_identity(a):
    assert bde_discriminant(a) == pytest.approx(-4 * resultant(a), abs=1e-10 * max(1, a.scale) ** 4)


@given(float_alphas)
def test_degeneracy_test_is_twice_det_m(a):
    M = curvature_ellipse(a).M
    assert ellipse_degeneracy_test(a) == pytest.approx(2 * np.linalg.det(M), abs=1e-10 * max(1, a.scale) ** 2)


@given(float_alphas)
def test_asymptotic_directions_are_bde_roots(a):
    dirs = asymptotic_directions_r4(a)
    if dirs is ALL:
        return
    A, B, C = a.minors()
    for d in dirs:
        u, v = d.unit()
        assert abs(A * u * u + B * u * v + C * v * v) <= 1e-8 * max(1, a.scale) ** 2


def _brute_binormals(a, n=20000):
    phis = np.linspace(0, math.pi, n, endpoint=False)
    dets = np.array([height_hessian(a, p).det for p in phis])
    return dets


@given(int_alphas)
def test_binormals_are_degenerate_height_functions(a):
    angles = binormal_directions_r4(a)
    if angles is ALL:
        assert np.allclose(_brute_binormals(a, 64), 0)
        return
    for phi in angles:
        assert abs(height_hessian(a, phi).det) <= 1e-9 * max(1, a.scale) ** 2


@given(float_alphas, st.floats(0, math.pi))
def test_elliptic_points_have_no_vanishing_direction(a, angle):
    if analyze_point(a).point_type is PointType.ELLIPTIC:
        assert not bde_vanishes(a, math.cos(angle), math.sin(angle))


@given(float_alphas)
def test_resultant_trace_identity(a):
    A, B, C = a.minors()
    assert resultant(a) == pytest.approx(((A + C) ** 2 - resultant_scale(a)) / 2, abs=1e-9 * max(1, a.scale) ** 4)


@given(float_alphas)
def test_decisions_follow_the_rank(a):
    rep = analyze_point(a)
    if rep.rank < 2:
        assert rep.asymptotic is ALL
        assert rep.ellipse.kind is not EllipseKind.ELLIPSE
        if rep.ellipse.kind is EllipseKind.SEGMENT:
            assert rep.ellipse.through_origin
    elif rep.ellipse.kind is EllipseKind.SEGMENT:
        assert not rep.ellipse.through_origin
        assert rep.point_type is PointType.SEMIUMBILIC and rep.delta < 0
    else:
        assert rep.ellipse.kind is EllipseKind.ELLIPSE


@given(float_alphas, st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_rank_is_frame_independent(a, phi, psi):
    r = rotate_normal(rotate_tangent(a, phi), psi)
    s1, s2 = a.singular_values
    t1, t2 = r.singular_values
    assert (t1, t2) == pytest.approx((s1, s2), abs=1e-12 * max(1, a.scale))
    assert r.scale == pytest.approx(a.scale, abs=1e-12 * max(1, a.scale))
