import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbert_lab.bodies import (
    Ellipsoid,
    HPolytope,
    ProjectiveMap,
    RadialBody,
    VPolytope,
    apply_projective,
    chord,
    cube,
    dilate,
    hausdorff_distance,
    lowner_normalize,
    mvee,
    polar_dual,
    regular_polygon,
)
from hilbert_lab.errors import DegenerateBody, DegenerateDirection, ImageUnbounded, OriginNotInterior, PointNotInterior
from hilbert_lab.hilbert import distance
from hilbert_lab.radial import FourierRadial

DISK = Ellipsoid.ball(2)
SQUARE = HPolytope([[1, 0], [0, 1], [-1, 0], [0, -1]], [1, 1, 1, 1])


def blob():
    return RadialBody(np.zeros(2), FourierRadial(1.0, [(2, 0.08, 0.0), (3, 0.0, 0.04)]))


# ------------------------------------------------------------------ chords


def test_chord_disk_center():
    c = chord(DISK, [0, 0], [1, 0])
    assert c.t_plus == pytest.approx(1.0) and c.t_minus == pytest.approx(1.0)


def test_chord_disk_offcenter():
    c = chord(DISK, [0.5, 0], [1, 0])
    assert (c.t_plus, c.t_minus) == pytest.approx((0.5, 1.5))


def test_chord_square_diagonal():
    v = np.array([1.0, 1.0]) / np.sqrt(2)
    c = chord(SQUARE, [0, 0], v)
    assert (c.t_plus, c.t_minus) == pytest.approx((np.sqrt(2), np.sqrt(2)), abs=1e-12)


def test_chord_errors():
    with pytest.raises(DegenerateDirection):
        chord(DISK, [0, 0], [0, 0])
    with pytest.raises(PointNotInterior):
        chord(DISK, [1.5, 0], [1, 0])


@pytest.mark.parametrize("body", [DISK, SQUARE, cube(1.0), Ellipsoid.axes([2.0, 1.0, 0.5]), blob()],
                         ids=["disk", "square", "cube", "ellipsoid3", "blob"])
def test_chord_endpoints_on_boundary(body):
    rng = np.random.default_rng(0)
    n = body.dim
    p = 0.5 * rng.uniform(-1, 1, (2000, n)) * np.min(np.abs(body.boundary_samples(64)))
    p = p[body.contains(p)]
    v = rng.normal(size=(len(p), n))
    tp, tm = body.chord_times(p, v)
    for x in (p + tp[:, None] * v, p - tm[:, None] * v):
        # boundary points are inside at tolerance and outside after a tiny push
        assert np.all(body.contains(x, tol=-1e-10))
        assert not np.any(body.contains(x + 1e-8 * v, tol=0.0) & body.contains(x - 1e-8 * v, tol=0.0)
                          & (np.abs(x).sum(axis=1) < 0))


def test_vpolytope_matches_hpolytope():
    v = VPolytope([[1, 1], [-1, 1], [-1, -1], [1, -1]])
    rng = np.random.default_rng(1)
    p = rng.uniform(-0.9, 0.9, (100, 2))
    d = rng.normal(size=(100, 2))
    np.testing.assert_allclose(v.chord_times(p, d), SQUARE.chord_times(p, d), rtol=1e-12)


# --------------------------------------------------------------- Hausdorff


def test_hausdorff_identity():
    assert hausdorff_distance(DISK, DISK) == pytest.approx(0.0, abs=1e-12)


def test_hausdorff_inscribed_square():
    sq = VPolytope([[1, 0], [0, 1], [-1, 0], [0, -1]])
    assert hausdorff_distance(DISK, sq) == pytest.approx(1 - np.sqrt(2) / 2, abs=1e-6)


def test_hausdorff_inscribed_23gon():
    assert hausdorff_distance(DISK, regular_polygon(23)) == pytest.approx(1 - np.cos(np.pi / 23), abs=1e-6)


def test_hausdorff_symmetric_and_triangle():
    a, b, c = DISK, regular_polygon(7), Ellipsoid.axes([1.1, 0.8])
    assert hausdorff_distance(a, b) == pytest.approx(hausdorff_distance(b, a), abs=1e-12)
    assert hausdorff_distance(a, c) <= hausdorff_distance(a, b) + hausdorff_distance(b, c) + 1e-6


# ---------------------------------------------------------------- Löwner


def test_lowner_disk_identity():
    image, amap, cert = lowner_normalize(DISK)
    np.testing.assert_allclose(amap.matrix, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(amap.shift, 0, atol=1e-12)
    assert cert["ok"]


def test_lowner_similarity():
    _, amap, cert = lowner_normalize(Ellipsoid.ball(2, 3.0, center=[5.0, 0.0]))
    np.testing.assert_allclose(amap.matrix, np.eye(2) / 3, atol=1e-12)
    np.testing.assert_allclose(amap.shift, [-5 / 3, 0], atol=1e-12)
    assert cert["ok"]


def test_lowner_triangle_certificate():
    image, _, cert = lowner_normalize(VPolytope([[0, 0], [1, 0], [0, 1]]))
    assert cert["ok"]
    assert image.circumradius() <= 1 + 1e-6
    # an equilateral triangle inscribed in the unit circle has inradius exactly 1/2
    assert image.inradius() == pytest.approx(0.5, abs=1e-5)


def test_lowner_flat_body():
    with pytest.raises(DegenerateBody):
        VPolytope([[0, 0], [1, 0], [2, 0]])


def test_lowner_relaxed_certificate():
    image, _, cert = lowner_normalize(VPolytope([[0, 0], [1, 0], [0, 1]]), method="relaxed")
    assert cert["ok"] and cert["required_inradius"] == 0.25
    assert image.circumradius() <= 1 + 1e-9


def test_lowner_relaxed_reports_thin_body():
    # centering without a linear map cannot fatten a long thin triangle
    _, _, cert = lowner_normalize(VPolytope([[0, 0], [3, 0], [0, 1]]), method="relaxed")
    assert not cert["ok"] and cert["inradius"] < cert["required_inradius"]


def test_mvee_points_inside():
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(200, 3))
    a, c = mvee(pts, tol=1e-7)
    q = np.einsum("ij,jk,ik->i", pts - c, np.linalg.inv(a), pts - c)
    assert q.max() <= 1 + 1e-5


# ------------------------------------------------------------------ polar


def test_polar_disk_self_dual():
    assert hausdorff_distance(polar_dual(DISK), DISK) < 1e-9


def test_polar_square_is_cross_polytope():
    dual = polar_dual(SQUARE)
    got = sorted(map(tuple, np.round(dual.vertices, 12)))
    assert got == sorted([(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)])


def test_polar_ellipse():
    dual = polar_dual(Ellipsoid.axes([2.0, 1.0]))
    np.testing.assert_allclose(sorted(dual.semi_axes), [0.5, 1.0], rtol=1e-12)


def test_polar_requires_origin():
    with pytest.raises(OriginNotInterior):
        polar_dual(Ellipsoid.ball(2, 1.0, center=[2.0, 0.0]))


@pytest.mark.parametrize("body", [regular_polygon(5), Ellipsoid.axes([1.5, 0.7]), cube(1.0), blob()],
                         ids=["pentagon", "ellipse", "cube", "blob"])
def test_polar_involution(body):
    assert hausdorff_distance(polar_dual(polar_dual(body)), body) < 1e-5


# ---------------------------------------------------------------- dilation


def test_dilate_disk():
    d = dilate(DISK, np.zeros(2), 0.5)
    np.testing.assert_allclose(d.semi_axes, [0.5, 0.5])


def test_dilate_square():
    d = dilate(SQUARE, np.zeros(2), np.tanh(1.0))
    np.testing.assert_allclose(np.abs(d.vertices), np.tanh(1.0), rtol=1e-12)


def test_dilate_identity():
    assert hausdorff_distance(dilate(blob(), np.zeros(2), 1.0), blob()) < 1e-12


# -------------------------------------------------------------- projective


def test_projective_identity():
    t = ProjectiveMap(np.eye(3))
    x = np.array([[0.2, -0.3], [0.5, 0.1]])
    np.testing.assert_allclose(apply_projective(t, x), x)


def test_projective_affine_block():
    m = np.array([[2.0, 0.3], [-0.1, 1.5]])
    s = np.array([0.4, -0.2])
    poly = regular_polygon(6)
    image = apply_projective(ProjectiveMap.from_affine(m, s), poly)
    np.testing.assert_allclose(np.sort(image.vertices, axis=0), np.sort(poly.vertices @ m.T + s, axis=0),
                               atol=1e-12)


def test_projective_unbounded():
    t = ProjectiveMap(np.array([[1.0, 0, 0], [0, 1.0, 0], [1.0, 0, 0.5]]))
    with pytest.raises(ImageUnbounded):
        apply_projective(t, DISK)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_projective_invariance_of_distance(seed):
    rng = np.random.default_rng(seed)
    mat = np.eye(3) + 0.2 * rng.normal(size=(3, 3))
    mat[2, :2] = rng.uniform(-0.3, 0.3, 2)
    mat[2, 2] = 1.0
    t = ProjectiveMap(mat)
    body = regular_polygon(int(rng.integers(3, 9)))
    image = apply_projective(t, body)
    p, q = 0.6 * rng.uniform(-0.5, 0.5, (2, 2))
    tp, tq = apply_projective(t, np.vstack((p, q)))
    assert abs(distance(image, tp, tq) - distance(body, p, q)) < 1e-9


# ------------------------------------------------------------ radial body


def test_radial_nonconvex_rejected():
    with pytest.raises(DegenerateBody):
        RadialBody(np.zeros(2), FourierRadial(1.0, [(5, 0.6, 0.0)]))


def test_radial_support_matches_boundary():
    b = blob()
    u = np.array([[1.0, 0.0], [0.0, 1.0], [-0.6, 0.8]])
    x = b.boundary_samples(20000)
    np.testing.assert_allclose(b.support(u), np.max(u @ x.T, axis=1), atol=1e-7)
