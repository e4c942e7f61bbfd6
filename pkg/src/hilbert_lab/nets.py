"""Separated nets on metric spheres, counting functions and critical exponents."""

import csv
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, Delaunay

from .bodies import Polytope
from .errors import ResolutionInsufficient, WindowTooSmall
from .growth import _ols
from .hilbert import HilbertGeometry, ball_radial_extent, distance, extent_from_chord
from .sampling import fibonacci_sphere

LN3 = float(np.log(3.0))


@dataclass
class DiscreteSet:
    points: np.ndarray
    separation: float
    covering_radius: float = None
    certificates: dict = field(default_factory=dict)
    # facet slacks of each point (polygons only); exact where the coordinates have rounded away
    slacks: np.ndarray = None

    def __len__(self):
        return len(self.points)


@dataclass
class CriticalExponent:
    slope: float
    half_width: float
    window: tuple
    n_points: int
    poincare: dict = field(default_factory=dict)

    def agrees_with(self, other):
        return abs(self.slope - other.slope) <= np.hypot(self.half_width, other.half_width)


def _geom(g):
    body = g.body if isinstance(g, HilbertGeometry) else g
    center = g.center if isinstance(g, HilbertGeometry) else body.interior_point
    return body, np.asarray(center, dtype=float)


def _sphere_points_2d(body, o, radius, theta):
    u = np.column_stack((np.cos(theta), np.sin(theta)))
    return o + ball_radial_extent(body, o, u, radius)[:, None] * u


def _adaptive_circle(body, o, radius, target, start=2**14, max_points=2**22):
    """Angles on S(o, R) refined until consecutive Hilbert gaps are below ``target``."""
    theta = 2.0 * np.pi * np.arange(start) / start
    while True:
        x = _sphere_points_2d(body, o, radius, theta)
        gaps = distance(body, x, np.roll(x, -1, axis=0))
        coarse = np.flatnonzero(gaps > target)
        if len(coarse) == 0:
            return theta, x
        if len(theta) + len(coarse) > max_points:
            raise ResolutionInsufficient(
                f"sphere sampling would need more than {max_points} points for spacing {target:.3g}"
            )
        nxt = np.append(theta[1:], theta[0] + 2.0 * np.pi)
        grown = np.unique(np.concatenate((theta, (0.5 * (theta[coarse] + nxt[coarse])) % (2.0 * np.pi))))
        if len(grown) == len(theta):
            raise ResolutionInsufficient("angular sampling stalled at double precision")
        theta = grown


# ------------------------------------------------------------ polygon charts


def slack_distance(sx, sy):
    """
    Hilbert distance of a polytope from facet slacks: ½ ln(max_k r_k / min_k r_k)
    with r_k = s_k(y)/s_k(x).  Rows broadcast.
    """
    r = np.asarray(sy, dtype=float) / np.asarray(sx, dtype=float)
    return 0.5 * np.log(np.max(r, axis=-1) / np.min(r, axis=-1))


def _polygon_sphere(body, o, radius, target, start=64, max_points=2**22):
    """
    Slack coordinates and points of S(o, R) for a polygon, sampled through the
    boundary point each ray aims at.  Each edge is parametrized by z with
    t = 1/(1 + e^{-z}) so both ends are resolved on a log scale.
    """
    nv = len(body.vertices)
    s_o = body.offsets - body.normals @ o
    e = np.exp(-2.0 * radius)
    # past |z| = zmax the aimed-at point is closer to the vertex than the sphere can resolve
    zmax = 2.0 * radius + 40.0

    def sample(edge, z):
        a, b = edge, (edge + 1) % nv
        t = 1.0 / (1.0 + np.exp(-z))
        t1 = 1.0 / (1.0 + np.exp(z))
        sb = t1[:, None] * body.vertex_slack[:, a][None, :] + t[:, None] * body.vertex_slack[:, b][None, :]
        pb = t1[:, None] * body.vertices[a] + t[:, None] * body.vertices[b]
        ray = pb - o
        tp = np.linalg.norm(ray, axis=1)
        u = ray / tp[:, None]
        tm = body.chord_times(o[None, :], -u)[0]
        tau = extent_from_chord(tp, tm, radius) / tp
        rest = e * (tp + tm) / (tm + tp * e)
        return rest[:, None] * s_o[None, :] + tau[:, None] * sb, o + tau[:, None] * ray

    zs = [np.linspace(-zmax, zmax, start, endpoint=False) for _ in range(nv)]
    while True:
        parts = [sample(k, zs[k]) for k in range(nv)]
        sl = np.vstack([p[0] for p in parts])
        gaps = slack_distance(sl, np.roll(sl, -1, axis=0))
        if np.all(gaps <= target):
            return sl, np.vstack([p[1] for p in parts])
        total = sum(len(z) for z in zs)
        offsets = np.cumsum([0] + [len(z) for z in zs])
        grown = 0
        for k in range(nv):
            z = zs[k]
            g = gaps[offsets[k] : offsets[k + 1]]
            nxt = np.append(z[1:], zmax)
            mids = 0.5 * (z + nxt)[g > target]
            new = np.unique(np.concatenate((z, mids)))
            grown += len(new) - len(z)
            zs[k] = new
        if grown == 0 or total + grown > max_points:
            raise ResolutionInsufficient(f"polygon sphere sampling cannot reach spacing {target:.3g}")


def _greedy_arc(dist, x, delta, window=256):
    """Greedy selection along a closed curve sample, relying on monotone distance along the arc."""
    m = len(x)
    kept = [0]
    i = 0
    while True:
        j = None
        lo = i + 1
        while lo < m:
            hi = min(m, lo + window)
            d = dist(np.broadcast_to(x[i], (hi - lo, x.shape[1])), x[lo:hi])
            far = np.flatnonzero(d >= delta)
            if len(far):
                j = lo + int(far[0])
                break
            lo = hi
        if j is None:
            break
        # the wrap-around neighbour is the first kept point
        if dist(x[j][None, :], x[:1])[0] < delta:
            break
        kept.append(j)
        i = j
    return np.array(kept)


def _greedy_full(body, x, delta, chunk=4096):
    kept = np.zeros((0, x.shape[1]))
    idx = []
    for j in range(len(x)):
        if len(kept):
            d = np.concatenate(
                [distance(body, np.broadcast_to(x[j], kept[c : c + chunk].shape), kept[c : c + chunk])
                 for c in range(0, len(kept), chunk)]
            )
            if np.min(d) < delta:
                continue
        kept = np.vstack((kept, x[j]))
        idx.append(j)
    return np.array(idx)


def separated_net_on_sphere(g, o=None, radius=1.0, delta=LN3 / 4.0, resolution=None):
    """
    Maximal delta-separated subset of a dense sample of S(o, R).

    In the plane the sphere is sampled adaptively so that consecutive samples
    are within delta/8, then points are chosen greedily along the arc.  In 3D
    a Fibonacci direction set is used with a full pairwise check.  The result
    records the certified minimum separation and the largest distance from
    any sample to the set (maximality on the sampling resolution).
    """
    body, center = _geom(g)
    o = center if o is None else np.asarray(o, dtype=float)
    if radius <= 0 or delta <= 0:
        raise ValueError("radius and delta must be positive")
    slacks = None
    if body.dim == 2:
        if isinstance(body, Polytope):
            coords, x = _polygon_sphere(body, o, radius, delta / 8.0)
            dist = slack_distance
        else:
            _, x = _adaptive_circle(body, o, radius, delta / 8.0, start=resolution or 2**12)
            coords = x

            def dist(a, b):
                return distance(body, a, b)

        kept = _greedy_arc(dist, coords, delta)
        pts = x[kept]
        ck = coords[kept]
        if isinstance(body, Polytope):
            slacks = ck
        if len(pts) > 1:
            nbr = [dist(ck, np.roll(ck, -s, axis=0)).min() for s in range(1, min(4, len(pts)))]
            sep = float(min(nbr))
        else:
            sep = float("inf")
        # maximality: every sample lies between two consecutive kept points on the arc
        owner = np.searchsorted(kept, np.arange(len(x)), side="right") - 1
        nearest = np.minimum(dist(coords, ck[owner]), dist(coords, ck[(owner + 1) % len(ck)]))
    else:
        k = resolution or 2**16
        u = fibonacci_sphere(k)
        x = o + ball_radial_extent(body, o, u, radius)[:, None] * u
        kept = _greedy_full(body, x, delta)
        pts = x[kept]
        sep = _min_pairwise(body, pts)
        nearest = np.array([
            distance(body, np.broadcast_to(x[j], pts.shape), pts).min() for j in range(0, len(x), max(1, len(x) // 4096))
        ])
    cert = {
        "radius": float(radius),
        "samples": int(len(x)),
        "max_sample_to_set": float(nearest.max()),
        "maximal": bool(nearest.max() < delta),
    }
    if not cert["maximal"]:
        raise ResolutionInsufficient("sampling too coarse to certify maximality")
    return DiscreteSet(pts, min(sep, float("inf")), None, cert, slacks)


def _min_pairwise(body, pts, chunk=2048):
    n = len(pts)
    if n < 2:
        return float("inf")
    best = np.inf
    for i in range(n - 1):
        rest = pts[i + 1 :]
        best = min(best, float(distance(body, np.broadcast_to(pts[i], rest.shape), rest).min()))
    return best


def sphere_net_family(g, r_max, delta=LN3 / 4.0, step=LN3, o=None):
    """Union of maximal delta-separated nets on S(o, k*step), k = 1, 2, ... while k*step <= r_max."""
    body, center = _geom(g)
    o = center if o is None else np.asarray(o, dtype=float)
    radii = step * np.arange(1, int(np.floor(r_max / step + 1e-12)) + 1)
    nets = [separated_net_on_sphere(body, o, r, delta) for r in radii]
    return family_from_layers(body, o, radii, nets, delta)


def family_from_layers(body, o, radii, nets, delta):
    """Union of the center and the sphere nets at ``radii``."""
    radii = np.asarray(radii, dtype=float)
    pts = np.vstack([o[None, :]] + [s.points for s in nets])
    slacks = None
    if nets and all(s.slacks is not None for s in nets):
        slacks = np.vstack([_slacks(body, o)[None, :]] + [s.slacks for s in nets])
    # separation across layers follows from |d(o,x) - d(o,y)| <= d(x,y)
    layer_gap = min(np.min(np.diff(radii), initial=radii[0]), radii[0]) if len(radii) else np.inf
    sep = min([layer_gap] + [s.separation for s in nets])
    return DiscreteSet(pts, float(sep), None, {"layers": radii.tolist(), "delta": delta, "center": o.tolist()},
                       slacks)


def _slacks(body, x):
    return body.offsets - np.atleast_2d(x) @ body.normals.T if np.ndim(x) > 1 else body.offsets - body.normals @ x


def _distances_from(s, body, o):
    """d(o, x) for every point of ``s``, through slacks when the set carries them."""
    if isinstance(s, DiscreteSet) and s.slacks is not None and isinstance(body, Polytope):
        return slack_distance(_slacks(body, o)[None, :], s.slacks)
    pts = s.points if isinstance(s, DiscreteSet) else np.asarray(s)
    return distance(body, np.broadcast_to(o, pts.shape), pts)


def counting_function(s, g, radius, o=None):
    """#{x in the set : d(o, x) <= R}; ``radius`` may be an array."""
    body, center = _geom(g)
    o = center if o is None else np.asarray(o, dtype=float)
    pts = s.points if isinstance(s, DiscreteSet) else np.asarray(s)
    if len(pts) == 0:
        return np.zeros(np.shape(radius), dtype=int) if np.ndim(radius) else 0
    d = np.sort(_distances_from(s, body, o))
    out = np.searchsorted(d, np.asarray(radius, dtype=float) + 1e-12, side="right")
    return out if np.ndim(radius) else int(out)


def critical_exponent_from_distances(dists, window, step=None):
    """Slope of ln N(R) against R on a grid over ``window``, with Poincaré partial sums."""
    dists = np.sort(np.asarray(dists, dtype=float))
    lo, hi = window
    step = step or (hi - lo) / 32.0
    grid = np.arange(lo, hi + 1e-12, step)
    counts = np.searchsorted(dists, grid + 1e-12, side="right")
    if len(grid) < 4 or counts[0] == counts[-1] or np.any(counts == 0):
        raise WindowTooSmall("counting function must be positive and nonconstant on the window")
    slope, _, hw, _ = _ols(grid, np.log(counts), np.zeros(len(grid)))
    poincare = {}
    for sexp in (slope - 0.1, slope + 0.1):
        terms = np.exp(-sexp * dists)
        cum = np.cumsum(terms)
        poincare[round(float(sexp), 6)] = cum[np.maximum(counts - 1, 0)].tolist()
    return CriticalExponent(float(slope), float(hw), (float(lo), float(hi)), len(grid),
                            {"radii": grid.tolist(), "partial_sums": poincare})


def critical_exponent_estimate(s, g, o=None, window=None, step=None):
    body, center = _geom(g)
    o = center if o is None else np.asarray(o, dtype=float)
    d = _distances_from(s, body, o)
    if window is None:
        top = float(d.max())
        window = (0.5 * top, top)
    return critical_exponent_from_distances(d, window, step)


def covering_radius(s, g, samples):
    """Largest distance from a sample point to the set (a sampled covering radius)."""
    body, _ = _geom(g)
    pts = s.points
    worst = 0.0
    for x in np.atleast_2d(samples):
        worst = max(worst, float(distance(body, np.broadcast_to(x, pts.shape), pts).min()))
    return worst


def hull_containment_check(g, radius, delta=LN3 / 4.0, n_samples=10_000, seed=0):
    """
    The hull of a maximal delta-separated net on S(o, R + ln(3)/2) should contain
    B(o, R) and stay inside B(o, R + ln(3)/2).  Returns violation counts.
    """
    body, o = _geom(g)
    outer = radius + 0.5 * LN3
    net = separated_net_on_sphere(body, o, outer, delta)
    hull = Delaunay(net.points)
    rng = np.random.default_rng(seed)
    u = rng.normal(size=(n_samples, body.dim))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    # balls are star-shaped about o, so the sphere S(o, R) is the binding case
    frac = rng.uniform(0.0, 1.0, n_samples) ** (1.0 / body.dim)
    frac[: n_samples // 2] = 1.0
    x = o + (frac * ball_radial_extent(body, o, u, radius))[:, None] * u
    inside = hull.find_simplex(x) >= 0
    verts = net.points[ConvexHull(net.points).vertices]
    beyond = distance(body, np.broadcast_to(o, verts.shape), verts) > outer + 1e-9
    return {
        "net_size": len(net),
        "samples": int(n_samples),
        "ball_not_in_hull": int(np.sum(~inside)),
        "hull_outside_outer_ball": int(np.sum(beyond)),
    }


def write_set(s, path):
    """CSV of coordinates plus a JSON sidecar with separation and certificates."""
    dim = s.points.shape[1] if len(s.points) else 2
    header = ["x", "y", "z"][:dim]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for p in s.points:
            w.writerow([repr(float(c)) for c in p])
    side = {"count": len(s), "separation": s.separation, "covering_radius": s.covering_radius,
            "certificates": s.certificates}
    with open(str(path) + ".json", "w") as fh:
        json.dump(side, fh, indent=2, default=float)
