import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hilbert_lab.bodies import Ellipsoid, HPolytope, RadialBody, regular_polygon
from hilbert_lab.errors import HyperplaneMissesBody, NegativeRadius, ParameterOutOfRange, PointNotInterior
from hilbert_lab.hilbert import (
    HilbertGeometry,
    Hyperplane,
    asymptotic_ball,
    ball_radial_extent,
    chord_segment_lower_bound,
    distance,
    finsler_norm,
    metric_projection,
)
from hilbert_lab.radial import FourierRadial

DISK = Ellipsoid.ball(2)
SQUARE = HPolytope([[1, 0], [0, 1], [-1, 0], [0, -1]], [1, 1, 1, 1])
HALF_LN3 = 0.5 * np.log(3.0)

BODIES = {
    "disk": DISK,
    "square": SQUARE,
    "hexagon": regular_polygon(6),
    "ellipse": Ellipsoid.axes([1.4, 0.6]),
    "blob": RadialBody(np.zeros(2), FourierRadial(1.0, [(2, 0.08, 0.0), (3, 0.0, 0.04)])),
}

coord = st.floats(-0.45, 0.45)
point = st.tuples(coord, coord).map(np.array)


# ---------------------------------------------------------------- distance


def test_distance_disk():
    assert distance(DISK, [0, 0], [0.5, 0]) == pytest.approx(HALF_LN3, abs=1e-12)
    assert distance(DISK, [0, 0], [0.5, 0]) == pytest.approx(np.arctanh(0.5), abs=1e-12)


def test_distance_square():
    assert distance(SQUARE, [0, 0], [0.5, 0]) == pytest.approx(HALF_LN3, abs=1e-12)


def test_distance_zero_and_outside():
    assert distance(SQUARE, [0.2, 0.3], [0.2, 0.3]) == 0.0
    with pytest.raises(PointNotInterior):
        distance(DISK, [0, 0], [1.0, 0])


def test_distance_vectorized():
    p = np.zeros((3, 2))
    q = np.array([[0.5, 0], [0, 0.5], [0, 0]])
    np.testing.assert_allclose(distance(DISK, p, q), [HALF_LN3, HALF_LN3, 0.0], atol=1e-12)


def test_distance_near_boundary_no_cancellation():
    # d(0, x) = artanh(x) on the disk; 1 - x = 1e-12 loses nothing in chord-time form
    x = 1 - 1e-12
    assert distance(DISK, [0, 0], [x, 0]) == pytest.approx(np.arctanh(x), rel=1e-6)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(BODIES)), point, point)
def test_distance_symmetric(name, p, q):
    body = BODIES[name]
    assert distance(body, p, q) == pytest.approx(distance(body, q, p), abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(BODIES)), point, point, point)
def test_triangle_inequality(name, p, q, r):
    body = BODIES[name]
    assert distance(body, p, r) <= distance(body, p, q) + distance(body, q, r) + 1e-10


@settings(max_examples=40, deadline=None)
@given(point, point)
def test_disk_matches_klein_model(p, q):
    # closed form of the Klein model: cosh d = (1 - p.q) / sqrt((1 - |p|^2)(1 - |q|^2))
    c = (1 - p @ q) / np.sqrt((1 - p @ p) * (1 - q @ q))
    assert distance(DISK, p, q) == pytest.approx(np.arccosh(max(c, 1.0)), abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(point, point, st.floats(0.05, 0.95))
def test_distance_additive_on_segments(p, q, s):
    # straight lines are geodesics
    x = p + s * (q - p)
    for body in (SQUARE, BODIES["blob"]):
        assert distance(body, p, q) == pytest.approx(distance(body, p, x) + distance(body, x, q), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(point, point, st.floats(1.05, 2.0))
def test_comparison_monotone(p, q, scale):
    # enlarging the body shrinks distances
    big = Ellipsoid.ball(2, scale)
    assert distance(big, p, q) <= distance(DISK, p, q) + 1e-12


# ------------------------------------------------------------------ Finsler


def test_finsler_examples():
    assert finsler_norm(DISK, [0, 0], [1, 0]) == pytest.approx(1.0)
    assert finsler_norm(DISK, [0.5, 0], [1, 0]) == pytest.approx(4 / 3)
    assert finsler_norm(SQUARE, [0.3, 0.1], [0, 0]) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(BODIES)), point, st.tuples(st.floats(-1, 1), st.floats(-1, 1)).map(np.array),
       st.floats(0.1, 5.0))
def test_finsler_homogeneous_and_symmetric(name, p, v, lam):
    assume(np.linalg.norm(v) > 1e-3)
    body = BODIES[name]
    f = finsler_norm(body, p, v)
    assert finsler_norm(body, p, lam * v) == pytest.approx(lam * f, rel=1e-9)
    assert finsler_norm(body, p, -v) == pytest.approx(f, rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(BODIES)), point, st.floats(0, 2 * np.pi))
def test_finsler_is_derivative_of_distance(name, p, theta):
    body = BODIES[name]
    v = np.array([np.cos(theta), np.sin(theta)])
    h = 1e-6
    assert distance(body, p, p + h * v) / h == pytest.approx(finsler_norm(body, p, v), rel=1e-4)


# ------------------------------------------------------------------- balls


def test_ball_extent_disk():
    u = np.array([[1.0, 0.0], [0.6, 0.8], [0.0, -1.0]])
    for r in (0.1, 1.0, 4.0):
        np.testing.assert_allclose(ball_radial_extent(DISK, np.zeros(2), u, r), np.tanh(r), rtol=1e-12)
    assert ball_radial_extent(DISK, np.zeros(2), [1.0, 0.0], 0.0) == 0.0


def test_ball_extent_square_round_trip():
    s = ball_radial_extent(SQUARE, np.zeros(2), [1.0, 0.0], 1.0)
    assert abs(distance(SQUARE, [0, 0], [s, 0]) - 1.0) < 1e-10


def test_ball_extent_negative_radius():
    with pytest.raises(NegativeRadius):
        ball_radial_extent(DISK, np.zeros(2), [1.0, 0.0], -1.0)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(BODIES)), point, st.floats(0, 2 * np.pi), st.floats(0.01, 12.0))
def test_ball_extent_round_trip(name, o, theta, r):
    body = BODIES[name]
    u = np.array([np.cos(theta), np.sin(theta)])
    s = ball_radial_extent(body, o, u, r)
    # rounding o + s u alone perturbs d by about eps * e^{2r} this close to the boundary
    assert distance(body, o, o + s * u) == pytest.approx(r, abs=1e-9 + 1e-15 * np.exp(2 * r))


def test_asymptotic_ball_examples():
    assert asymptotic_ball(DISK, 0.0).degenerate
    b = asymptotic_ball(DISK, 1.5)
    np.testing.assert_allclose(b.body.semi_axes, np.tanh(1.5), rtol=1e-12)
    sq = asymptotic_ball(SQUARE, 1.0)
    np.testing.assert_allclose(np.abs(sq.body.vertices), np.tanh(1.0), rtol=1e-12)
    with pytest.raises(NegativeRadius):
        asymptotic_ball(DISK, -0.1)


def test_asymptotic_ball_uses_geometry_center():
    g = HilbertGeometry(DISK, center=np.array([0.2, 0.0]))
    b = asymptotic_ball(g, np.arctanh(0.5))
    np.testing.assert_allclose(b.body.center, [0.1, 0.0], atol=1e-12)


# -------------------------------------------------------------- projection


def test_projection_symmetric_disk():
    res = metric_projection(DISK, np.array([0.0, 0.5]), Hyperplane([0.0, 1.0], 0.0))
    np.testing.assert_allclose(res.foot, [0.0, 0.0], atol=1e-6)
    assert res.distance == pytest.approx(HALF_LN3, abs=1e-9)
    assert not res.non_unique


def test_projection_ellipse_minor_axis():
    body = Ellipsoid.axes([2.0, 1.0])
    res = metric_projection(body, np.array([0.0, 0.4]), Hyperplane([0.0, 1.0], 0.0))
    np.testing.assert_allclose(res.foot, [0.0, 0.0], atol=1e-6)


def test_projection_matches_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(5):
        p = rng.uniform(-0.5, 0.5, 2)
        n = rng.normal(size=2)
        h = Hyperplane(n, 0.1 * rng.normal())
        res = metric_projection(DISK, p, h)
        e = np.array([-h.normal[1], h.normal[0]])
        base = h.offset * h.normal
        half = np.sqrt(1 - h.offset**2)
        t = np.linspace(-half, half, 100002)[1:-1]
        brute = distance(DISK, np.broadcast_to(p, (len(t), 2)), base + t[:, None] * e).min()
        assert abs(res.distance - brute) < 1e-6
        assert res.certificate["concurrency_residual"] < 1e-6


def test_projection_square_edge_is_non_unique():
    # the Hilbert metric of a square is not uniquely geodesic, so projections onto lines parallel to a side tie
    res = metric_projection(SQUARE, np.array([0.0, 0.5]), Hyperplane([0.0, 1.0], -0.2))
    assert res.non_unique


def test_projection_misses_body():
    with pytest.raises(HyperplaneMissesBody):
        metric_projection(DISK, np.zeros(2), Hyperplane([1.0, 0.0], 2.0))


# ------------------------------------------------------------- chord bound


def test_chord_bound_example():
    assert chord_segment_lower_bound(1.0, 1.0, 0.5, np.arctanh(0.5)) == pytest.approx(np.log(3.0), abs=1e-12)


def test_chord_bound_vanishes_with_ratio():
    assert chord_segment_lower_bound(1.0, 1.0, 0.3, 1e-9) < 1e-8


def test_chord_bound_rejects_bad_parameters():
    for args in ((1.0, 1.0, 0.0, 1.0), (0.0, 1.0, 0.5, 1.0), (1.0, 1.0, 0.5, 0.0)):
        with pytest.raises(ParameterOutOfRange):
            chord_segment_lower_bound(*args)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0.1, 3.0), st.floats(0.1, 6.0))
def test_chord_bound_monotone_in_radius(s, ratio, r):
    assert chord_segment_lower_bound(ratio, 1.0, s, r + 0.5) >= chord_segment_lower_bound(ratio, 1.0, s, r)


def test_chord_bound_matches_symbolic():
    import sympy as sp

    bc, big, s, t = sp.Rational(3, 5), sp.Rational(7, 5), sp.Rational(1, 3), sp.Rational(2, 3)
    k = bc * t / (big * (1 - t))
    exact = sp.log(1 + k / s) / 2 + sp.log(1 + k / (1 - s)) / 2
    assert chord_segment_lower_bound(0.6, 1.4, 1 / 3, np.arctanh(2 / 3)) == pytest.approx(float(exact), abs=1e-12)
