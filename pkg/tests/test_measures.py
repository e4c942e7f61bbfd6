import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbert_lab.bodies import Ellipsoid, HPolytope, RadialBody, cube, regular_polygon
from hilbert_lab.errors import BodyNotSmooth, NegativeRadius, PointNotInterior
from hilbert_lab.measures import (
    DensityKind,
    QuadratureConfig,
    ball_volume,
    ball_volume_mc,
    ball_volumes,
    busemann_density,
    centro_projective_area,
    ht_density,
    log_densities,
    sphere_area,
)
from hilbert_lab.radial import FourierRadial

DISK = Ellipsoid.ball(2)
BALL3 = Ellipsoid.ball(3)
SQUARE = HPolytope([[1, 0], [0, 1], [-1, 0], [0, -1]], [1, 1, 1, 1])
BLOB = RadialBody(np.zeros(2), FourierRadial(1.0, [(2, 0.08, 0.0), (3, 0.0, 0.04)]))
# fitted densities are costly, so smooth non-ellipsoids get a coarse rule here
COARSE = QuadratureConfig(angular=256, rel_tol=1e-2, max_doublings=0, mc_samples=20_000)


def hyperbolic_area(r):
    return 2 * np.pi * (np.cosh(r) - 1)


def hyperbolic_volume_3d(r):
    return np.pi * (np.sinh(2 * r) - 2 * r)


# ---------------------------------------------------------------- densities


def test_disk_densities():
    assert busemann_density(DISK, np.zeros(2)) == pytest.approx(1.0, abs=1e-9)
    assert busemann_density(DISK, np.array([0.5, 0.0])) == pytest.approx(0.75**-1.5, rel=1e-6)
    assert ht_density(DISK, np.zeros(2)) == pytest.approx(1.0, abs=1e-9)


def test_square_densities_at_center():
    assert busemann_density(SQUARE, np.zeros(2)) == pytest.approx(np.pi / 4, rel=1e-12)
    assert ht_density(SQUARE, np.zeros(2)) == pytest.approx(2 / np.pi, rel=1e-12)


def test_cube_densities_at_center():
    c = cube(1.0)
    omega3 = 4 * np.pi / 3
    assert busemann_density(c, np.zeros(3)) == pytest.approx(omega3 / 8, rel=1e-12)
    # the polar of the unit cube is the octahedron of volume 4/3
    assert ht_density(c, np.zeros(3)) == pytest.approx((4 / 3) / omega3, rel=1e-12)


def test_density_outside_raises():
    with pytest.raises(PointNotInterior):
        busemann_density(DISK, np.array([1.2, 0.0]))


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 0.95), st.floats(0, 2 * np.pi))
def test_klein_density_closed_form(rho, theta):
    p = rho * np.array([np.cos(theta), np.sin(theta)])
    lb, lh = log_densities(DISK, p)
    expected = -1.5 * np.log1p(-(rho**2))
    assert lb[0] == pytest.approx(expected, abs=1e-6)
    assert lh[0] == pytest.approx(expected, abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["square", "hexagon", "triangle", "cube", "blob"]),
       st.lists(st.floats(-0.6, 0.6), min_size=3, max_size=3))
def test_ht_never_exceeds_busemann(name, xyz):
    # Blaschke-Santalo: Leb(K) Leb(K*) <= omega_n^2 for centrally symmetric unit balls
    body = {"square": SQUARE, "hexagon": regular_polygon(6), "triangle": regular_polygon(3), "cube": cube(1.0),
            "blob": BLOB}[name]
    p = np.array(xyz[: body.dim]) * (0.5 if name in ("triangle", "blob") else 1.0)
    lb, lh = log_densities(body, p)
    assert lh[0] <= lb[0] + 1e-9


def test_polytope_density_far_into_corner_is_finite():
    lb, lh = log_densities(regular_polygon(3), np.array([[1 - 1e-12, 0.0], [-0.5 + 1e-9, 0.0]]))
    assert np.all(np.isfinite(lb)) and np.all(np.isfinite(lh))
    lb, lh = log_densities(SQUARE, np.array([[1 - 1e-12, 1 - 1e-12], [1 - 1e-9, 0.0]]))
    assert np.all(np.isfinite(lb)) and np.all(np.isfinite(lh))


# ------------------------------------------------------------------ volumes


def test_disk_volumes_closed_form():
    radii = np.arange(1.0, 9.0)
    res = ball_volumes(DISK, radii)
    np.testing.assert_allclose(res.values, hyperbolic_area(radii), rtol=5e-3)
    assert ball_volume(DISK, np.zeros(2), 1.0)[0] == pytest.approx(3.41228, abs=1e-4)


def test_ball3_volume_closed_form():
    res = ball_volumes(BALL3, [1.0, 2.0, 4.0])
    np.testing.assert_allclose(res.values, hyperbolic_volume_3d(np.array([1.0, 2.0, 4.0])), rtol=5e-3)


def test_volume_zero_radius_and_negative():
    assert ball_volumes(DISK, [0.0]).values[0] == 0.0
    with pytest.raises(NegativeRadius):
        ball_volumes(DISK, [-1.0])


def test_triangle_volume_is_pi_r_squared():
    # the triangle geometry is isometric to the normed plane with a hexagonal unit ball
    radii = np.array([2.0, 10.0, 30.0])
    res = ball_volumes(regular_polygon(3), radii)
    np.testing.assert_allclose(res.values, np.pi * radii**2, rtol=1e-6)


def test_square_volume_quadratic():
    radii = np.array([20.0, 40.0])
    res = ball_volumes(SQUARE, radii)
    np.testing.assert_allclose(res.values / radii**2, 4 * np.pi / 3, rtol=0.02)


def test_volumes_monotone():
    for body in (DISK, SQUARE, BLOB):
        v = ball_volumes(body, np.linspace(0.5, 5.0, 10), cfg=COARSE).values
        assert np.all(np.diff(v) > 0)


@pytest.mark.parametrize("body", [SQUARE, DISK, BLOB], ids=["square", "disk", "blob"])
def test_quadrature_matches_monte_carlo(body):
    r = 5.0 if body is SQUARE else 2.0
    cfg = COARSE if body is BLOB else QuadratureConfig()
    val, _ = ball_volume(body, body.interior_point, r, cfg=cfg)
    mc, se = ball_volume_mc(body, body.interior_point, r, cfg=cfg)
    assert abs(val - mc) < 4 * se + 1e-3 * val


def test_ht_volume_below_busemann():
    for body in (SQUARE, BLOB):
        b = ball_volumes(body, [3.0], cfg=COARSE).values[0]
        h = ball_volumes(body, [3.0], kind=DensityKind.HOLMES_THOMPSON, cfg=COARSE).values[0]
        assert h <= b * (1 + 1e-6)


def test_volume_projective_invariance_on_disk():
    # every interior point of the disk is the center of an isometry
    a = ball_volume(DISK, np.zeros(2), 2.0)[0]
    b = ball_volume(DISK, np.array([0.4, -0.3]), 2.0)[0]
    assert b == pytest.approx(a, rel=2e-3)


# ------------------------------------------------------------------- spheres


def test_disk_circle_length():
    val, _ = sphere_area(DISK, np.zeros(2), 1.0)
    assert val == pytest.approx(2 * np.pi * np.sinh(1.0), rel=1e-3)
    assert val == pytest.approx(7.3843, abs=1e-2)


def test_sphere_area_3d_ball():
    val, _ = sphere_area(BALL3, np.zeros(3), 1.0)
    assert val == pytest.approx(4 * np.pi * np.sinh(1.0) ** 2, rel=1e-2)


def test_sphere_length_is_volume_derivative():
    h = 1e-3
    vol = ball_volumes(BLOB, [2.0 - h, 2.0 + h], cfg=COARSE).values
    length, _ = sphere_area(BLOB, np.zeros(2), 2.0, cfg=COARSE)
    assert length == pytest.approx((vol[1] - vol[0]) / (2 * h), rel=2e-2)


# ------------------------------------------------------------ boundary area


def test_centro_projective_area_disk():
    assert centro_projective_area(DISK, np.zeros(2)) == pytest.approx(2 * np.pi, rel=1e-9)


def test_centro_projective_area_sphere():
    assert centro_projective_area(BALL3, np.zeros(3)) == pytest.approx(4 * np.pi, rel=1e-6)


def test_centro_projective_area_ellipse_self_convergence():
    e = Ellipsoid.axes([2.0, 1.0])
    a = centro_projective_area(e, np.zeros(2), resolution=1024)
    b = centro_projective_area(e, np.zeros(2), resolution=2048)
    assert abs(a - b) < 1e-3 * abs(b)
    # an affine image of the disk, so the value does not change
    assert b == pytest.approx(2 * np.pi, rel=1e-6)


def test_centro_projective_area_needs_smooth_body():
    with pytest.raises(BodyNotSmooth):
        centro_projective_area(regular_polygon(6), np.zeros(2))
