"""Polytope approximation of convex bodies in the Hausdorff distance.

Upper bounds for N(eps, Ω), the fewest vertices of a polytope within
Hausdorff distance eps of Ω, come from two constructions: greedy insertion of
support points (any dimension) and, in the plane, polygons whose edges are
tangent to an asymptotic ball with vertices on the boundary of its
eps-neighbourhood.
"""

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .bodies import Polytope, VPolytope, hausdorff_distance, polar_dual
from .errors import BudgetExceeded, RadiusTooSmall, ScheduleTooShort
from .hilbert import HilbertGeometry
from .sampling import sphere_directions


@dataclass
class ApproxRecord:
    eps: float
    polytope: VPolytope
    vertex_count: int
    achieved_gap: float
    method: str
    meta: dict = field(default_factory=dict)

    @property
    def count_interval(self):
        """[count / slack, count]: the construction only bounds N(eps) from above."""
        slack = self.meta.get("slack", 2.0)
        return self.vertex_count / slack, self.vertex_count


@dataclass
class ApproximabilityEstimate:
    slope: float
    half_width: float
    eps: np.ndarray
    counts: np.ndarray
    records: list
    dim: int = 2

    @property
    def polytopal_dimension(self):
        return 2.0 * self.slope

    @property
    def within_upper_bound(self):
        """a <= (n-1)/2 up to the fit half-width."""
        return self.slope <= 0.5 * (self.dim - 1) + self.half_width

    def critical_series(self, exponents=None):
        """N(eps) * eps^s for each exponent s; decays for s > a and grows for s < a."""
        if exponents is None:
            exponents = self.slope + np.array([-0.25, -0.1, 0.1, 0.25])
        return {float(s): self.counts * self.eps**s for s in exponents}


def _body(g):
    return g.body if isinstance(g, HilbertGeometry) else g


def _direction_count(dim, eps, base=None):
    # near a kinked maximum the sampled gap is off by about spacing * sqrt(2 eps)
    if dim == 2:
        return max(base or 4096, int(2 ** np.ceil(np.log2(8.0 * np.pi / np.sqrt(eps)))))
    return max(base or 8192, int(300.0 / eps))


def greedy_vertex_insertion(g, eps, max_vertices=10**6, directions=None):
    """
    Inscribed polytope with Hausdorff gap at most ``eps``.

    Start from the support points of a regular simplex of directions and keep
    adding the support point in the direction where the current gap
    h_Ω - h_P is largest (first index on ties).  The final gap is re-verified
    with ``hausdorff_distance``; if that check fails, the direction set is
    doubled and insertion resumes.
    """
    body = _body(g)
    n = body.dim
    if eps <= 0:
        raise ValueError("eps must be positive")
    k = directions or _direction_count(n, eps)
    if n == 2:
        start = sphere_directions(2, 3)[0]
    else:
        start = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float) / np.sqrt(3.0)
    verts = list(body.support_point(start))
    u, _ = sphere_directions(n, k)
    h_body = body.support(u)
    h_poly = np.max(u @ np.array(verts).T, axis=1)
    threshold = eps
    for _ in range(40):
        gap = h_body - h_poly
        while True:
            j = int(np.argmax(gap))
            if gap[j] <= threshold:
                break
            if len(verts) >= max_vertices:
                raise BudgetExceeded(f"vertex budget {max_vertices} exhausted at eps={eps}")
            v = body.support_point(u[j : j + 1])[0]
            verts.append(v)
            h_poly = np.maximum(h_poly, u @ v)
            gap = h_body - h_poly
            gap[j] = min(gap[j], 0.0)
        poly = VPolytope(np.array(verts))
        achieved = hausdorff_distance(body, poly)
        if achieved <= eps:
            return ApproxRecord(eps, poly, poly.n_vertices, achieved, "greedy",
                                {"directions": k, "threshold": threshold, "slack": 2.0})
        # the sampled gap misses kinked maxima between directions: tighten and resume
        threshold -= 2.0 * (achieved - eps)
    raise BudgetExceeded(f"could not certify gap {eps} (last {achieved})")


# ----------------------------------------------------------- tangent polygon


def _segment_distance(x, a, b):
    """Distance from points x (k, 2) to the polygon with edges a[i] -> b[i]."""
    ab = b - a
    t = np.clip(np.einsum("kij,ij->ki", x[:, None, :] - a[None], ab) / np.sum(ab * ab, axis=1), 0.0, 1.0)
    foot = a[None] + t[..., None] * ab[None]
    return np.min(np.linalg.norm(x[:, None, :] - foot, axis=2), axis=1)


def _forward_tangent(poly, x):
    """Vertex t of the convex ccw polygon with every vertex left of (or on) the line x -> t."""
    rel = poly - x
    ref = rel.mean(axis=0)
    ang = np.arctan2(rel[:, 1] * ref[0] - rel[:, 0] * ref[1], rel @ ref)
    return int(np.argmin(ang))


def tangent_polygon_2d(g, radius=None, eps=None, resolution=None):
    """
    Polygon circumscribed about AsB(o, R), all vertices on the boundary of the
    eps(R)-neighbourhood of AsB(o, R) with eps(R) = (1 - tanh R)/4.

    Give either ``radius`` or ``eps`` (then tanh R = 1 - 4 eps).  Starting from
    a point x_1 of the neighbourhood boundary, draw the forward tangent to
    AsB(o, R) and take its second intersection with the neighbourhood boundary
    as the next vertex; stop once the next vertex would pass x_1.

    The record's ``eps``/``achieved_gap`` refer to AsB(o, R); ``meta`` holds
    the rescaled values for Ω (divided by tanh R) and the rescaled polygon.
    """
    body = _body(g)
    if body.dim != 2:
        raise ValueError("tangent polygons are planar")
    center = g.center if isinstance(g, HilbertGeometry) else np.zeros(2)
    if (radius is None) == (eps is None):
        raise ValueError("give exactly one of radius or eps")
    if eps is not None:
        if not 0 < eps < 0.25:
            raise RadiusTooSmall("eps must lie in (0, 1/4)")
        t = 1.0 - 4.0 * eps
    else:
        t = float(np.tanh(radius))
        eps = (1.0 - t) / 4.0
    if t < 0.5:
        raise RadiusTooSmall("tanh R below 1/2: the neighbourhood is comparable to AsB itself")
    asb = body.dilate(center, t)
    if isinstance(asb, Polytope):
        poly = asb.vertices
    else:
        m = resolution or max(4096, int(2 ** np.ceil(np.log2(np.pi / np.sqrt(eps / 50.0)))))
        poly = asb.boundary_samples(m)
    a, b = poly, np.roll(poly, -1, axis=0)

    def dist(x):
        return _segment_distance(np.atleast_2d(x), a, b)

    def exit_point(x0, direction):
        lo, hi = 0.0, eps
        while dist(x0 + hi * direction)[0] < eps:
            hi *= 2.0
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if dist(x0 + mid * direction)[0] < eps:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-15:
                break
        return x0 + lo * direction

    # x_1: straight out from a boundary point of AsB along its outward normal
    start_dir = poly[0] - center
    start_dir /= np.linalg.norm(start_dir)
    x1 = exit_point(poly[0], start_dir)
    verts = [x1]
    turned = 0.0
    ang_prev = np.arctan2(*(x1 - center)[::-1])
    x = x1
    for _ in range(10**6):
        j = _forward_tangent(poly, x)
        d = poly[j] - x
        d /= np.linalg.norm(d)
        nxt = exit_point(poly[j], d)
        if np.linalg.norm(nxt - x) <= 2.0 * eps * (1.0 - 1e-9):
            raise RuntimeError("consecutive tangent points closer than 2 eps")
        ang = np.arctan2(*(nxt - center)[::-1])
        turned += (ang - ang_prev) % (2.0 * np.pi)
        ang_prev = ang
        if turned >= 2.0 * np.pi - 1e-12:
            break
        verts.append(nxt)
        x = nxt
    polygon = VPolytope(np.array(verts))
    gap = hausdorff_distance(asb, polygon)
    scaled = polygon.dilate(center, 1.0 / t)
    meta = {
        "tanh_R": t,
        "eps_omega": eps / t,
        "gap_omega": gap / t,
        "scaled_polytope": scaled,
        "construction_vertices": len(verts),
        "slack": 2.0,
    }
    return ApproxRecord(eps, polygon, polygon.n_vertices, gap, "tangent", meta)


# ------------------------------------------------------------- regression


def default_eps_schedule(dim):
    low = 12 if dim == 2 else 9
    return 2.0 ** -np.arange(3, low + 1)


def approximability_estimate(g, eps_schedule=None, method="greedy"):
    """
    Slope of ln N(eps) against -ln eps over a geometric schedule.

    For ``method="tangent"`` each eps is used as eps(R) and the regression is
    done against the Ω-side value eps(R)/tanh R.
    """
    body = _body(g)
    eps_schedule = default_eps_schedule(body.dim) if eps_schedule is None else np.asarray(eps_schedule, float)
    if len(eps_schedule) < 4:
        raise ScheduleTooShort("need at least 4 values of eps")
    records, xs, counts = [], [], []
    for e in eps_schedule:
        if method == "greedy":
            rec = greedy_vertex_insertion(g, e)
            xs.append(e)
        elif method == "tangent":
            rec = tangent_polygon_2d(g, eps=e)
            xs.append(rec.meta["eps_omega"])
        else:
            raise ValueError(f"unknown method {method!r}")
        records.append(rec)
        counts.append(rec.vertex_count)
    xs, counts = np.array(xs), np.array(counts, dtype=float)
    slope, hw = _slope_ci(-np.log(xs), np.log(counts))
    return ApproximabilityEstimate(slope, hw, xs, counts, records, body.dim)


def _slope_ci(x, y):
    res = stats.linregress(x, y)
    dof = len(x) - 2
    hw = stats.t.ppf(0.975, dof) * res.stderr if dof > 0 else np.inf
    return float(res.slope), float(hw)


def polar_facet_approximation(g, eps, max_halvings=30):
    """
    Facet-count approximation of the polar body: the polar of a greedy
    inscribed polytope P of Ω contains Ω* and has one facet per vertex of P.
    The inner tolerance is halved until Hausdorff(P*, Ω*) <= eps.
    """
    body = _body(g)
    target = polar_dual(body)
    inner = eps
    for _ in range(max_halvings):
        rec = greedy_vertex_insertion(body, inner)
        if rec.polytope.contains(np.zeros((1, body.dim)), tol=1e-12)[0]:
            dual = polar_dual(rec.polytope)
            gap = hausdorff_distance(dual, target)
            if gap <= eps:
                return ApproxRecord(eps, dual, dual.n_facets, gap, "polar-greedy", {"inner_eps": inner})
        inner /= 2.0
    raise BudgetExceeded("polar approximation did not reach the requested gap")


def write_csv(records, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["eps", "count", "gap", "method"])
        for r in records:
            w.writerow([repr(float(r.eps)), r.vertex_count, repr(float(r.achieved_gap)), r.method])
