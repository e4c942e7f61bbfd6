"""Hilbert metric on a bounded convex body: distance, Finsler norm, balls, projections."""

from dataclasses import dataclass, field

import numpy as np

from .bodies import ConvexBody, Ellipsoid, RadialBody, TOL_BOUNDARY, lowner_normalize, require_interior
from .errors import (
    DegenerateDirection,
    HyperplaneMissesBody,
    NegativeRadius,
    ParameterOutOfRange,
    PointNotInterior,
)
from .sampling import tangent_basis

INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass
class HilbertGeometry:
    """A body together with its normalization center and certificate."""

    body: ConvexBody
    center: np.ndarray = None
    normalization: str = "none"
    certificate: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.center is None:
            self.center = np.zeros(self.body.dim) if self.normalization != "none" else self.body.interior_point
        self.center = np.asarray(self.center, dtype=float)
        require_interior(self.body, self.center)

    @property
    def dim(self):
        return self.body.dim

    @classmethod
    def normalized(cls, body, method="lowner"):
        """Normalize ``body`` and return (geometry, affine map used)."""
        image, amap, cert = lowner_normalize(body, method=method)
        return cls(image, np.zeros(body.dim), method, cert), amap


def _body(g):
    return g.body if isinstance(g, HilbertGeometry) else g


@dataclass(frozen=True)
class Hyperplane:
    """{x : <normal, x> = offset} with unit ``normal``."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        scale = np.linalg.norm(n)
        if scale == 0:
            raise DegenerateDirection("hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", n / scale)
        object.__setattr__(self, "offset", float(self.offset) / scale)

    def interior_point(self, body):
        """A point of H strictly inside ``body``; raises if H misses the interior."""
        n, c = self.normal, self.offset
        hi = body.support(n[None, :])[0]
        lo = -body.support(-n[None, :])[0]
        if not lo < c < hi:
            raise HyperplaneMissesBody("hyperplane does not meet the interior of the body")
        o = body.interior_point
        level = n @ o
        if level == c:
            return o.copy()
        far = body.support_point((n if c > level else -n)[None, :])[0]
        lam = (c - level) / (n @ far - level)
        return o + lam * (far - o)


def distance(g, p, q):
    """
    Hilbert distance ½ ln [a, p, q, b], vectorized over rows of ``p`` and ``q``.

    Written in chord times along u = (q - p)/|q - p| so that nothing cancels
    near the boundary.
    """
    body = _body(g)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    single = p.ndim == 1 and q.ndim == 1
    pp, qq = np.broadcast_arrays(np.atleast_2d(p), np.atleast_2d(q))
    require_interior(body, pp)
    require_interior(body, qq)
    diff = qq - pp
    length = np.linalg.norm(diff, axis=1)
    out = np.zeros(len(pp))
    move = length > 0
    if np.any(move):
        u = diff[move] / length[move, None]
        tp, tm = body.chord_times(pp[move], u)
        ell = length[move]
        out[move] = 0.5 * (np.log1p(ell / tm) - np.log1p(-ell / tp))
    return float(out[0]) if single else out


def finsler_norm(g, p, v):
    """F(p, v) = ½ (1/t⁺ + 1/t⁻), with t± the boundary times along ±v."""
    body = _body(g)
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    single = p.ndim == 1 and v.ndim == 1
    pp, vv = np.broadcast_arrays(np.atleast_2d(p), np.atleast_2d(v))
    require_interior(body, pp)
    out = np.zeros(len(pp))
    move = np.linalg.norm(vv, axis=1) > 0
    if np.any(move):
        tp, tm = body.chord_times(pp[move], vv[move])
        out[move] = 0.5 * (1.0 / tp + 1.0 / tm)
    return float(out[0]) if single else out


def extent_from_chord(tp, tm, r):
    """Euclidean length s along a unit direction with Hilbert distance r, given its chord."""
    e = np.exp(-2.0 * np.asarray(r, dtype=float))
    return tp * tm * (-np.expm1(-2.0 * np.asarray(r, dtype=float))) / (tm + tp * e)


def ball_radial_extent(g, o, u, r):
    """
    Radius of the metric ball B(o, r) in direction ``u``.

    Solves distance(o, o + s u) = r in closed form from the chord through o.
    Vectorized over rows of ``u`` (and broadcast against ``r``).
    """
    body = _body(g)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise NegativeRadius("radius must be nonnegative")
    o = np.asarray(o, dtype=float)
    u = np.asarray(u, dtype=float)
    single = u.ndim == 1 and r.ndim == 0
    uu = np.atleast_2d(u)
    uu = uu / np.linalg.norm(uu, axis=1, keepdims=True)
    require_interior(body, o)
    tp, tm = body.chord_times(np.atleast_2d(o), uu)
    s = extent_from_chord(tp, tm, r)
    return float(np.ravel(s)[0]) if single else s


@dataclass(frozen=True)
class AsymptoticBall:
    """Image of the body under the dilation of ratio tanh R at the center."""

    center: np.ndarray
    radius: float
    ratio: float
    body: ConvexBody = None

    @property
    def degenerate(self):
        return self.ratio == 0.0

    def contains(self, x, tol=0.0):
        if self.degenerate:
            return np.zeros(len(np.atleast_2d(x)), dtype=bool)
        return self.body.contains(x, tol)


def asymptotic_ball(g, radius):
    if radius < 0:
        raise NegativeRadius("radius must be nonnegative")
    body = _body(g)
    center = g.center if isinstance(g, HilbertGeometry) else body.interior_point
    ratio = float(np.tanh(radius))
    if ratio == 0.0:
        return AsymptoticBall(center, float(radius), 0.0, None)
    return AsymptoticBall(center, float(radius), ratio, body.dilate(center, ratio))


def _golden(f, a, b, tol):
    """Golden-section minimization of a quasiconvex function on [a, b]."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


@dataclass
class Projection:
    foot: np.ndarray
    distance: float
    non_unique: bool
    certificate: dict = None


def _boundary_normal(body, x):
    if isinstance(body, Ellipsoid):
        return (x - body.center) @ body.shape
    if isinstance(body, RadialBody):
        h = 1e-6
        grad = np.zeros(body.dim)
        for i in range(body.dim):
            e = np.zeros(body.dim)
            e[i] = h
            grad[i] = (body.gauge(x + e)[0] - body.gauge(x - e)[0]) / (2 * h)
        return grad
    return None


def metric_projection(g, p, hyperplane, tol=1e-8):
    """
    Nearest point of H ∩ Ω to ``p`` for the Hilbert distance.

    Golden-section search along the trace of H (nested in 3D).  For smooth
    planar bodies the result carries a concurrency certificate: the lines
    supporting Ω at the ends of the chord through p and the foot, together
    with H, should meet in one (possibly ideal) point.
    """
    body = _body(g)
    p = np.asarray(p, dtype=float)
    require_interior(body, p)
    h = hyperplane
    y = h.interior_point(body)
    basis = tangent_basis(h.normal[None, :])[0]

    def dist_to(x):
        return distance(body, p, x)

    def trace_interval(base, e):
        tp, tm = body.chord_times(base[None, :], e[None, :])
        span = tp[0] + tm[0]
        shrink = TOL_BOUNDARY * max(1.0, span)
        return -tm[0] + shrink, tp[0] - shrink

    if body.dim == 2:
        e = basis[0]
        a, b = trace_interval(y, e)
        s, best = _golden(lambda t: dist_to(y + t * e), a, b, tol)
        foot = y + s * e
        probe = 1e-4 * (b - a)
        flat = [dist_to(y + np.clip(s + d, a, b) * e) - best for d in (probe, -probe)]
    else:
        e1, e2 = basis

        def inner(t1):
            base = y + t1 * e1
            a2, b2 = trace_interval(base, e2)
            t2, val = _golden(lambda t: dist_to(base + t * e2), a2, b2, tol)
            inner.last = base + t2 * e2
            return val

        a, b = trace_interval(y, e1)
        s, best = _golden(inner, a, b, tol)
        foot = inner.last
        probe = 1e-4 * (b - a)
        flat = []
        for e in (e1, e2):
            for d in (probe, -probe):
                x = foot + d * e
                if body.contains(x[None, :])[0]:
                    flat.append(dist_to(x) - best)
    non_unique = bool(min(flat, default=1.0) < 1e-12)
    cert = None
    if body.dim == 2 and body.smooth and np.linalg.norm(foot - p) > 0:
        u = (foot - p) / np.linalg.norm(foot - p)
        tp, tm = body.chord_times(p[None, :], u[None, :])
        ends = (p + tp[0] * u, p - tm[0] * u)
        rows = []
        for x in ends:
            n = _boundary_normal(body, x)
            n = n / np.linalg.norm(n)
            rows.append(np.append(n, -n @ x))
        rows.append(np.append(h.normal, -h.offset))
        cert = {"concurrency_residual": float(abs(np.linalg.det(np.array(rows))))}
    return Projection(foot, float(best), non_unique, cert)


def chord_segment_lower_bound(bc, BC, s, R):
    """
    Lower bound for the Hilbert length of a dilated chord segment.

    ``bc`` is the Euclidean length of the segment, ``BC`` the length of the
    comparison segment, ``s`` the split ratio in (0, 1) and ``R`` the dilation
    radius (ratio tanh R).
    """
    t = np.tanh(R)
    if not (0 < s < 1) or bc <= 0 or BC <= 0 or not (0 < t < 1):
        raise ParameterOutOfRange("need 0 < s < 1, bc > 0, BC > 0 and 0 < tanh R < 1")
    k = bc * t / (BC * (1.0 - t))
    return 0.5 * np.log1p(k / s) + 0.5 * np.log1p(k / (1.0 - s))


def segment_point(p, q, s):
    """Point at parameter s of the straight geodesic from p to q."""
    p = np.asarray(p, dtype=float)
    return p + np.multiply.outer(np.asarray(s, dtype=float), np.asarray(q, dtype=float) - p)
