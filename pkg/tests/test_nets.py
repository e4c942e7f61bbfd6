import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbert_lab.bodies import Ellipsoid, HPolytope, regular_polygon
from hilbert_lab.errors import WindowTooSmall
from hilbert_lab.hilbert import distance
from hilbert_lab.nets import (
    LN3,
    DiscreteSet,
    counting_function,
    covering_radius,
    critical_exponent_from_distances,
    critical_exponent_estimate,
    hull_containment_check,
    separated_net_on_sphere,
    slack_distance,
    sphere_net_family,
    write_set,
)

DISK = Ellipsoid.ball(2)
SQUARE = HPolytope([[1, 0], [0, 1], [-1, 0], [0, -1]], [1, 1, 1, 1])
DELTA = LN3 / 4


@pytest.fixture(scope="module")
def disk_family():
    return sphere_net_family(DISK, 8.0)


def all_pairs_min(body, pts):
    i, j = np.triu_indices(len(pts), 1)
    return distance(body, pts[i], pts[j]).min()


def test_disk_sphere_net_size():
    net = separated_net_on_sphere(DISK, np.zeros(2), 3.0, DELTA)
    expected = 2 * np.pi * np.sinh(3.0) / DELTA
    assert 0.8 * expected <= len(net) <= 1.2 * expected
    assert net.certificates["maximal"]


@pytest.mark.parametrize("body", [DISK, SQUARE, Ellipsoid.axes([1.3, 0.7]), regular_polygon(5)],
                         ids=["disk", "square", "ellipse", "pentagon"])
def test_separation_recheck(body):
    net = separated_net_on_sphere(body, None, 2.0, DELTA)
    assert all_pairs_min(body, net.points) >= DELTA - 1e-12
    assert net.separation >= DELTA - 1e-12
    d = distance(body, np.broadcast_to(body.interior_point, net.points.shape), net.points)
    np.testing.assert_allclose(d, 2.0, atol=1e-9)


def test_net_3d():
    net = separated_net_on_sphere(Ellipsoid.ball(3), np.zeros(3), 1.0, 0.5, resolution=4096)
    assert all_pairs_min(Ellipsoid.ball(3), net.points) >= 0.5 - 1e-12


def test_large_delta_single_point():
    net = separated_net_on_sphere(DISK, np.zeros(2), 0.5, 5.0)
    assert len(net) == 1


def test_slack_distance_matches_coordinates():
    rng = np.random.default_rng(2)
    x, y = rng.uniform(-0.9, 0.9, (2, 50, 2))
    sx = SQUARE.offsets - x @ SQUARE.normals.T
    sy = SQUARE.offsets - y @ SQUARE.normals.T
    np.testing.assert_allclose(slack_distance(sx, sy), distance(SQUARE, x, y), atol=1e-12)


def test_square_net_far_out():
    # at R = 40 the sphere is within e^-80 of the corners; slack coordinates keep it exact
    net = separated_net_on_sphere(SQUARE, None, 40.0, DELTA)
    assert net.slacks is not None
    assert net.separation >= DELTA - 1e-12
    o = SQUARE.offsets - SQUARE.normals @ SQUARE.interior_point
    np.testing.assert_allclose(slack_distance(o[None, :], net.slacks), 40.0, atol=1e-9)


def test_counting_function_basics(disk_family):
    empty = DiscreteSet(np.zeros((0, 2)), np.inf)
    assert counting_function(empty, DISK, 3.0) == 0
    radii = np.linspace(0, 8, 33)
    n = counting_function(disk_family, DISK, radii)
    assert n[0] == 1
    assert np.all(np.diff(n) >= 0)
    assert n[-1] == len(disk_family)


def test_disk_family_growth(disk_family):
    # each layer holds about 2 pi sinh(k ln3) / delta points
    k = np.arange(1, int(8 / LN3) + 1)
    oracle = 1 + np.sum(2 * np.pi * np.sinh(k * LN3)) / DELTA
    assert 0.8 * oracle <= len(disk_family) <= 1.2 * oracle
    assert np.log(len(disk_family)) / 8 == pytest.approx(np.log(oracle) / 8, abs=0.03)
    assert disk_family.separation >= DELTA - 1e-12


def test_disk_family_critical_exponent(disk_family):
    ce = critical_exponent_estimate(disk_family, DISK, window=(4, 8), step=0.25)
    assert abs(ce.slope - 1.0) < 0.15


def test_square_family_critical_exponent():
    fam = sphere_net_family(SQUARE, 40.0)
    ce = critical_exponent_estimate(fam, SQUARE, window=(20, 40), step=2.5)
    assert ce.slope <= 0.1


@settings(max_examples=25, deadline=None)
@given(st.floats(0.3, 3.0))
def test_synthetic_exponential_counts(rate):
    # N(R) = floor(e^{rate R}): the k-th point sits at distance ln(k)/rate.
    # The window starts where N = 500 so rounding of the counts stays negligible.
    lo = np.log(500) / rate
    hi = lo + 2 / rate
    d = np.log(np.arange(1, int(np.exp(rate * hi)) + 2)) / rate
    ce = critical_exponent_from_distances(d, (lo, hi))
    assert ce.slope == pytest.approx(rate, abs=0.01)


def test_synthetic_rate_one_and_a_half():
    n = int(np.ceil(np.exp(1.5 * 8)))
    d = np.log(np.arange(1, n + 1)) / 1.5
    ce = critical_exponent_from_distances(d, (4, 8))
    assert ce.slope == pytest.approx(1.5, abs=0.01)
    below, above = sorted(ce.poincare["partial_sums"])
    # partial sums keep growing below the exponent and flatten above it
    sb, sa = ce.poincare["partial_sums"][below], ce.poincare["partial_sums"][above]
    assert sb[-1] / sb[len(sb) // 2] > sa[-1] / sa[len(sa) // 2]


def test_window_errors():
    with pytest.raises(WindowTooSmall):
        critical_exponent_from_distances(np.ones(10), (2, 4))


def test_covering_radius():
    net = separated_net_on_sphere(DISK, np.zeros(2), 2.0, DELTA)
    theta = np.linspace(0, 2 * np.pi, 500, endpoint=False)
    samples = np.tanh(2.0) * np.column_stack((np.cos(theta), np.sin(theta)))
    assert covering_radius(net, DISK, samples) < DELTA


@pytest.mark.parametrize("body", [DISK, SQUARE], ids=["disk", "square"])
def test_hull_containment(body):
    res = hull_containment_check(body, 2.0, n_samples=2000)
    assert res["ball_not_in_hull"] == 0
    assert res["hull_outside_outer_ball"] == 0


def test_write_set(tmp_path):
    net = separated_net_on_sphere(DISK, np.zeros(2), 1.0, DELTA)
    path = tmp_path / "net.csv"
    write_set(net, path)
    rows = path.read_text().splitlines()
    assert rows[0] == "x,y" and len(rows) == len(net) + 1
    side = json.loads((tmp_path / "net.csv.json").read_text())
    assert side["count"] == len(net)
    assert side["certificates"]["maximal"]
