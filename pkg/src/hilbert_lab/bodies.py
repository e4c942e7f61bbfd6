"""Convex bodies in dimension 2 and 3 and their affine/projective operations.

Four representations are supported: H-polytopes, V-polytopes, ellipsoids and
radial bodies.  Every body answers the same small set of vectorized queries
(``chord_times``, ``support``, ``support_point``, ``contains``) which is all the
metric code needs.  Bodies are immutable once built.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize_scalar
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from .errors import (
    DegenerateBody,
    DegenerateDirection,
    ImageUnbounded,
    OriginNotInterior,
    PointNotInterior,
)
from .radial import FourierRadial, HarmonicRadial, SupportReciprocal
from .sampling import circle_directions, fibonacci_sphere, sphere_directions, tangent_basis

TOL_BOUNDARY = 1e-10
TOL_HAUSDORFF = 1e-6


def _as_points(x, dim):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[-1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got shape {x.shape}")
    return x, single


class ConvexBody:
    """Common interface.  Subclasses fill in the geometric primitives."""

    dim = 2
    smooth = False
    kind = "abstract"

    def chord_times(self, p, v):
        """Exit times (t_plus, t_minus) with p + t_plus v and p - t_minus v on the boundary."""
        raise NotImplementedError

    def support(self, u):
        raise NotImplementedError

    def support_point(self, u):
        raise NotImplementedError

    def contains(self, x, tol=0.0):
        raise NotImplementedError

    def boundary_samples(self, k):
        raise NotImplementedError

    def affine(self, matrix, shift):
        """Image under x -> matrix @ x + shift."""
        raise NotImplementedError

    def dilate(self, center, ratio):
        center = np.asarray(center, dtype=float)
        ratio = float(ratio)
        return self.affine(ratio * np.eye(self.dim), (1.0 - ratio) * center)

    def circumradius(self, k=None):
        """max_u h(u): radius of the smallest origin-centred ball containing the body."""
        u, _ = sphere_directions(self.dim, k or (4096 if self.dim == 2 else 8192))
        return float(np.max(_refined_extreme(self.support, u, sign=1.0)))

    def inradius(self, k=None):
        """min_u h(u): radius of the largest origin-centred ball inside (origin interior)."""
        u, _ = sphere_directions(self.dim, k or (4096 if self.dim == 2 else 8192))
        return float(np.min(_refined_extreme(self.support, u, sign=-1.0)))


# ---------------------------------------------------------------- polytopes


def _dedupe_rows(x, decimals=9):
    _, idx = np.unique(np.round(x, decimals), axis=0, return_index=True)
    return x[np.sort(idx)]


class Polytope(ConvexBody):
    """Shared machinery for H- and V-polytopes (both keep both representations)."""

    smooth = False

    def _setup(self, normals, offsets, vertices, interior_point=None):
        normals = np.asarray(normals, dtype=float)
        offsets = np.asarray(offsets, dtype=float)
        scale = np.linalg.norm(normals, axis=1)
        normals = normals / scale[:, None]
        offsets = offsets / scale
        vertices = np.asarray(vertices, dtype=float)
        dim = vertices.shape[1]
        if vertices.shape[0] <= dim or np.linalg.matrix_rank(vertices[1:] - vertices[0], tol=1e-12) < dim:
            raise DegenerateBody("polytope vertices do not span the ambient dimension")
        diam = float(np.max(np.linalg.norm(vertices - vertices.mean(0), axis=1)))
        gap = offsets[:, None] - normals @ vertices.T  # facet x vertex slack
        tol = 1e-9 * max(1.0, diam)
        incidence = np.abs(gap) < tol
        keep = incidence.sum(axis=1) >= dim
        normals, offsets, incidence, gap = normals[keep], offsets[keep], incidence[keep], gap[keep]
        gap[incidence] = 0.0
        self.dim = dim
        self.normals = normals
        self.offsets = offsets
        self.vertices = vertices
        self.incidence = incidence
        self.vertex_slack = gap
        self.interior_point = (
            np.asarray(interior_point, dtype=float) if interior_point is not None else vertices.mean(axis=0)
        )
        if dim == 2:
            self._order_2d()
        else:
            self._facet_cycles()

    def _order_2d(self):
        # vertices counter-clockwise, facet k is the edge from vertex k to vertex k+1
        c = self.vertices.mean(axis=0)
        ang = np.arctan2(self.vertices[:, 1] - c[1], self.vertices[:, 0] - c[0])
        order = np.argsort(ang)
        self.vertices = self.vertices[order]
        self.incidence = self.incidence[:, order]
        self.vertex_slack = self.vertex_slack[:, order]
        k = len(self.vertices)
        facet_of_edge = []
        for i in range(k):
            both = self.incidence[:, i] & self.incidence[:, (i + 1) % k]
            facet_of_edge.append(int(np.flatnonzero(both)[0]))
        fo = np.array(facet_of_edge)
        self.normals, self.offsets = self.normals[fo], self.offsets[fo]
        self.incidence, self.vertex_slack = self.incidence[fo], self.vertex_slack[fo]

    def _facet_cycles(self):
        cycles = []
        for f in range(len(self.normals)):
            idx = np.flatnonzero(self.incidence[f])
            pts = self.vertices[idx]
            cen = pts.mean(axis=0)
            e = tangent_basis(self.normals[f][None, :])[0]
            rel = pts - cen
            ang = np.arctan2(rel @ e[1], rel @ e[0])
            cycles.append(idx[np.argsort(ang)])
        self.facet_cycles = cycles

    # queries
    def slacks(self, p):
        return self.offsets[None, :] - p @ self.normals.T

    def chord_times(self, p, v):
        p = np.atleast_2d(p)
        v = np.atleast_2d(v)
        av = v @ self.normals.T
        sl = self.offsets[None, :] - p @ self.normals.T
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            tp = np.where(av > 0, sl / np.where(av > 0, av, 1.0), np.inf).min(axis=1)
            tm = np.where(av < 0, sl / np.where(av < 0, -av, 1.0), np.inf).min(axis=1)
        return tp, tm

    def support(self, u):
        return np.max(np.atleast_2d(u) @ self.vertices.T, axis=1)

    def support_point(self, u):
        return self.vertices[np.argmax(np.atleast_2d(u) @ self.vertices.T, axis=1)]

    def contains(self, x, tol=0.0):
        return np.all(self.slacks(np.atleast_2d(x)) > tol, axis=1)

    def boundary_samples(self, k=None):
        return self.vertices.copy()

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_facets(self):
        return len(self.normals)

    def _affine_data(self, matrix, shift):
        matrix = np.asarray(matrix, dtype=float)
        shift = np.asarray(shift, dtype=float)
        inv_t = np.linalg.inv(matrix).T
        normals = self.normals @ inv_t.T
        offsets = self.offsets + normals @ shift
        vertices = self.vertices @ matrix.T + shift
        return normals, offsets, vertices, matrix @ self.interior_point + shift


class HPolytope(Polytope):
    """Intersection of half-spaces {x : <a_i, x> <= b_i}."""

    kind = "hpoly"

    def __init__(self, normals, offsets, interior_point=None, _vertices=None):
        normals = np.atleast_2d(np.asarray(normals, dtype=float))
        offsets = np.asarray(offsets, dtype=float).ravel()
        if _vertices is None:
            if interior_point is None:
                interior_point = _chebyshev_center(normals, offsets)
            interior_point = np.asarray(interior_point, dtype=float)
            if not np.all(offsets - normals @ interior_point > 0):
                raise DegenerateBody("interior point violates a constraint")
            halfspaces = np.hstack((normals, -offsets[:, None]))
            try:
                hs = HalfspaceIntersection(halfspaces, interior_point)
            except QhullError as exc:
                raise DegenerateBody(f"half-space intersection failed: {exc}") from exc
            verts = _dedupe_rows(hs.intersections)
            if not np.all(np.isfinite(verts)):
                raise DegenerateBody("half-spaces do not bound a polytope")
        else:
            verts = _vertices
        self._setup(normals, offsets, verts, interior_point)

    def affine(self, matrix, shift):
        n, b, v, ip = self._affine_data(matrix, shift)
        return HPolytope(n, b, interior_point=ip, _vertices=v)


class VPolytope(Polytope):
    """Convex hull of a finite point set."""

    kind = "vpoly"

    def __init__(self, vertices, interior_point=None, _halfspaces=None):
        pts = np.atleast_2d(np.asarray(vertices, dtype=float))
        if _halfspaces is None:
            try:
                hull = ConvexHull(pts)
            except QhullError as exc:
                raise DegenerateBody(f"convex hull failed: {exc}") from exc
            eq = _dedupe_rows(hull.equations)
            normals, offsets = eq[:, :-1], -eq[:, -1]
            pts = pts[hull.vertices]
        else:
            normals, offsets = _halfspaces
        self._setup(normals, offsets, pts, interior_point)

    def affine(self, matrix, shift):
        n, b, v, ip = self._affine_data(matrix, shift)
        return VPolytope(v, interior_point=ip, _halfspaces=(n, b))


def _chebyshev_center(normals, offsets):
    m, n = normals.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_ub = np.hstack((normals, np.linalg.norm(normals, axis=1)[:, None]))
    res = linprog(c, A_ub=a_ub, b_ub=offsets, bounds=[(None, None)] * n + [(0, None)])
    if not res.success or res.x[-1] <= 0:
        raise DegenerateBody("half-spaces have empty interior or are unbounded")
    return res.x[:n]


def regular_polygon(m, radius=1.0, phase=0.0):
    """Regular m-gon inscribed in the circle of the given radius."""
    theta = phase + 2.0 * np.pi * np.arange(m) / m
    return VPolytope(radius * np.column_stack((np.cos(theta), np.sin(theta))))


def cube(half_side=1.0, dim=3):
    normals = np.vstack((np.eye(dim), -np.eye(dim)))
    return HPolytope(normals, np.full(2 * dim, half_side), interior_point=np.zeros(dim))


# --------------------------------------------------------------- ellipsoids


class Ellipsoid(ConvexBody):
    """{x : (x - c)^T Q (x - c) < 1} with Q symmetric positive definite."""

    kind = "ellipsoid"
    smooth = True

    def __init__(self, center, shape):
        self.center = np.asarray(center, dtype=float)
        q = np.asarray(shape, dtype=float)
        q = 0.5 * (q + q.T)
        w, vec = np.linalg.eigh(q)
        if np.any(w <= 0):
            raise DegenerateBody("ellipsoid shape form must be positive definite")
        self.shape = q
        self.shape_inv = (vec / w) @ vec.T
        self.sqrt_inv = (vec / np.sqrt(w)) @ vec.T  # maps the unit ball onto the ellipsoid
        self.dim = len(self.center)
        self.interior_point = self.center.copy()

    @classmethod
    def ball(cls, dim=2, radius=1.0, center=None):
        c = np.zeros(dim) if center is None else center
        return cls(c, np.eye(dim) / radius**2)

    @classmethod
    def axes(cls, semi_axes, center=None):
        a = np.asarray(semi_axes, dtype=float)
        c = np.zeros(len(a)) if center is None else center
        return cls(c, np.diag(1.0 / a**2))

    @property
    def semi_axes(self):
        return 1.0 / np.sqrt(np.linalg.eigvalsh(self.shape))

    def chord_times(self, p, v):
        p = np.atleast_2d(p)
        v = np.atleast_2d(v)
        d = p - self.center
        qv = v @ self.shape
        a = np.sum(qv * v, axis=1)
        b = np.sum(qv * d, axis=1)
        c = np.sum((d @ self.shape) * d, axis=1) - 1.0
        sq = np.sqrt(np.maximum(b * b - a * c, 0.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            tp = np.where(b > 0, -c / (b + sq), (sq - b) / a)
            tm = np.where(b < 0, -c / (sq - b), (sq + b) / a)
        return tp, tm

    def support(self, u):
        u = np.atleast_2d(u)
        return u @ self.center + np.sqrt(np.sum((u @ self.shape_inv) * u, axis=1))

    def support_point(self, u):
        u = np.atleast_2d(u)
        qu = u @ self.shape_inv
        return self.center + qu / np.sqrt(np.sum(qu * u, axis=1))[:, None]

    def contains(self, x, tol=0.0):
        d = np.atleast_2d(x) - self.center
        return np.sum((d @ self.shape) * d, axis=1) < 1.0 - tol

    def boundary_samples(self, k=None):
        w, _ = sphere_directions(self.dim, k or (1024 if self.dim == 2 else 4096))
        return self.center + w @ self.sqrt_inv.T

    def affine(self, matrix, shift):
        matrix = np.asarray(matrix, dtype=float)
        inv = np.linalg.inv(matrix)
        return Ellipsoid(matrix @ self.center + shift, inv.T @ self.shape @ inv)


# ------------------------------------------------------------ radial bodies


class RadialBody(ConvexBody):
    """
    {center + L y : |y| < r(y/|y|)} for a radial function r and linear map L.

    Convexity of the region is checked at construction by sampled midpoint
    tests; a failure raises ``DegenerateBody``.
    """

    kind = "radial"

    def __init__(self, center, radial, linear=None, check=True):
        self.center = np.asarray(center, dtype=float)
        self.dim = len(self.center)
        self.radial = radial
        self.linear = np.eye(self.dim) if linear is None else np.asarray(linear, dtype=float)
        self.linear_inv = np.linalg.inv(self.linear)
        self.smooth = bool(getattr(radial, "smooth", False))
        self.interior_point = self.center.copy()
        self._rmax = float(np.linalg.norm(self.linear, 2) * radial.bound())
        k = 2048 if self.dim == 2 else 4096
        self._sample_dirs, _ = sphere_directions(self.dim, k)
        if check:
            self._check()

    def _check(self):
        r = self.radial(self._sample_dirs)
        if not np.all(r > 0):
            raise DegenerateBody("radial function must be positive")
        x = self.boundary_point(self._sample_dirs)
        rng = np.random.default_rng(0)
        i = rng.integers(0, len(x), 4000)
        j = rng.integers(0, len(x), 4000)
        mid = 0.5 * (x[i] + x[j])
        if np.any(self.gauge(mid) > 1.0 + 1e-6):
            raise DegenerateBody("radial function does not describe a convex body")

    def boundary_point(self, w):
        w = np.atleast_2d(w)
        return self.center + (self.radial(w)[:, None] * w) @ self.linear.T

    def gauge(self, x):
        y = (np.atleast_2d(x) - self.center) @ self.linear_inv.T
        rho = np.linalg.norm(y, axis=1)
        w = np.where((rho > 0)[:, None], y / np.where(rho > 0, rho, 1.0)[:, None], np.eye(self.dim)[0])
        return np.where(rho > 0, rho / self.radial(w), 0.0)

    def chord_times(self, p, v):
        p = np.atleast_2d(p)
        v = np.atleast_2d(v)
        p, v = np.broadcast_arrays(p, v)
        speed = np.linalg.norm(v, axis=1)
        hi_p = (np.linalg.norm(p - self.center, axis=1) + 1.01 * self._rmax) / speed
        return self._exit(p, v, hi_p), self._exit(p, -v, hi_p)

    def _exit(self, p, v, hi):
        """Bisection down to a 1e-4 bracket, then Illinois false position on gauge - 1."""
        lo = np.zeros(len(p))
        hi = hi.copy()
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            inside = self.gauge(p + mid[:, None] * v) < 1.0
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
            if np.all(hi - lo <= 1e-4 * hi):
                break
        f_lo = self.gauge(p + lo[:, None] * v) - 1.0
        f_hi = self.gauge(p + hi[:, None] * v) - 1.0
        side = np.zeros(len(p))
        for _ in range(40):
            open_ = (hi - lo > 4.0 * np.finfo(float).eps * np.maximum(hi, 1e-300)) & (f_hi > f_lo)
            if not np.any(open_):
                break
            c = np.where(open_, (lo * f_hi - hi * f_lo) / np.where(open_, f_hi - f_lo, 1.0), lo)
            c = np.clip(c, lo, hi)
            fc = self.gauge(p + c[:, None] * v) - 1.0
            left = open_ & (fc < 0)
            right = open_ & (fc >= 0)
            lo, f_lo = np.where(left, c, lo), np.where(left, fc, f_lo)
            hi, f_hi = np.where(right, c, hi), np.where(right, fc, f_hi)
            # Illinois: halve the stale end when the same side moves twice
            f_hi = np.where(left & (side == -1), 0.5 * f_hi, f_hi)
            f_lo = np.where(right & (side == 1), 0.5 * f_lo, f_lo)
            side = np.where(left, -1, np.where(right, 1, side))
            done = open_ & (np.abs(fc) <= 2.0 * np.finfo(float).eps)
            lo = np.where(done, c, lo)
            hi = np.where(done, c, hi)
        return 0.5 * (lo + hi)

    def support(self, u):
        u = np.atleast_2d(u)
        exact = getattr(self.radial, "polar_support", None)
        if exact is not None and exact.available:
            # polar bodies: the support function is the gauge of the original body
            return u @ self.center + exact(u @ self.linear)
        return np.sum(u * self.support_point(u), axis=1)

    def support_point(self, u):
        u = np.atleast_2d(u)
        x = self.boundary_point(self._sample_dirs)
        w0 = self._sample_dirs[np.argmax(u @ x.T, axis=1)]
        step = 2.0 * np.sqrt(4.0 * np.pi / len(self._sample_dirs)) if self.dim == 3 else 4.0 * np.pi / len(
            self._sample_dirs
        )
        w = _pattern_search(lambda ww: np.sum(u * self.boundary_point(ww), axis=1), w0, step)
        return self.boundary_point(w)

    def contains(self, x, tol=0.0):
        return self.gauge(x) < 1.0 - tol

    def boundary_samples(self, k=None):
        w, _ = sphere_directions(self.dim, k or (4096 if self.dim == 2 else 4096))
        return self.boundary_point(w)

    def affine(self, matrix, shift):
        matrix = np.asarray(matrix, dtype=float)
        return RadialBody(matrix @ self.center + shift, self.radial, matrix @ self.linear, check=False)


def _pattern_search(f, w0, step, iters=60):
    """Vectorized local maximization of f over unit vectors, one start per row."""
    w = w0 / np.linalg.norm(w0, axis=1, keepdims=True)
    best = f(w)
    step = np.full(len(w), step)
    for _ in range(iters):
        basis = tangent_basis(w)
        improved = np.zeros(len(w), dtype=bool)
        for j in range(basis.shape[1]):
            for sgn in (1.0, -1.0):
                cand = w + sgn * step[:, None] * basis[:, j, :]
                cand /= np.linalg.norm(cand, axis=1, keepdims=True)
                val = f(cand)
                better = val > best
                w = np.where(better[:, None], cand, w)
                best = np.where(better, val, best)
                improved |= better
        step = np.where(improved, step, 0.5 * step)
        if np.all(step < 1e-9):
            break
    return w


def _refined_extreme(func, u, sign=1.0, top=8):
    """Sampled extreme of ``sign * func`` over directions, polished around the best rows."""
    vals = sign * func(u)
    idx = np.argsort(vals)[-top:]
    dim = u.shape[1]
    spacing = 2.0 * np.pi / len(u) if dim == 2 else np.sqrt(4.0 * np.pi / len(u))
    w = _pattern_search(lambda ww: sign * func(ww), u[idx], spacing)
    return sign * np.concatenate((vals, sign * func(w)))


# ----------------------------------------------------------- operations


@dataclass(frozen=True)
class Chord:
    t_plus: float
    t_minus: float


def chord(body, p, v):
    """
    Exit times of the line through ``p`` with velocity ``v``.

    Vectorized over rows of ``p``/``v``; returns a ``Chord`` of floats for a
    single point and of arrays otherwise.
    """
    pp, single = _as_points(p, body.dim)
    vv, vsingle = _as_points(v, body.dim)
    if np.any(np.linalg.norm(vv, axis=1) == 0):
        raise DegenerateDirection("direction must be nonzero")
    require_interior(body, pp)
    tp, tm = body.chord_times(pp, vv)
    if single and vsingle:
        return Chord(float(tp[0]), float(tm[0]))
    return Chord(tp, tm)


def require_interior(body, p):
    if not np.all(body.contains(np.atleast_2d(p))):
        raise PointNotInterior("point is not strictly inside the body")


def hausdorff_distance(a, b, tol=TOL_HAUSDORFF, start=None, cap=None):
    """
    Euclidean Hausdorff distance between convex bodies via support functions.

    max_u |h_A(u) - h_B(u)| is sampled on a direction set that is doubled until
    the polished maximum changes by less than ``tol``.
    """
    dim = a.dim
    k = start or (4096 if dim == 2 else 8192)
    cap = cap or (2**16 if dim == 2 else 2**16)

    def gap(u):
        return np.abs(a.support(u) - b.support(u))

    prev = None
    while True:
        u, _ = sphere_directions(dim, k)
        val = float(np.max(_refined_extreme(gap, u, sign=1.0)))
        if prev is not None and abs(val - prev) < tol:
            return max(val, prev)
        if k >= cap:
            return val if prev is None else max(val, prev)
        prev = val
        k *= 2


@dataclass(frozen=True)
class AffineMap:
    """x -> matrix @ x + shift."""

    matrix: np.ndarray
    shift: np.ndarray

    def __call__(self, x):
        return np.asarray(x, dtype=float) @ self.matrix.T + self.shift

    def inverse(self):
        inv = np.linalg.inv(self.matrix)
        return AffineMap(inv, -inv @ self.shift)


def _ky_initial_support(pts):
    """Kumar-Yildirim start: extreme points along d mutually orthogonal directions."""
    d = pts.shape[1]
    idx = []
    basis = np.zeros((0, d))
    direction = np.eye(d)[0]
    for _ in range(d):
        proj = pts @ direction
        hi, lo = int(np.argmax(proj)), int(np.argmin(proj))
        idx += [hi, lo]
        diff = pts[hi] - pts[lo]
        for b in basis:
            diff = diff - (diff @ b) * b
        basis = np.vstack((basis, diff / np.linalg.norm(diff)))
        # next direction: orthogonal to everything found so far
        _, _, vt = np.linalg.svd(np.vstack((basis, np.zeros((d - len(basis), d)))))
        direction = vt[-1]
    return np.unique(idx)


def mvee(points, tol=1e-7, max_iter=200000):
    """
    Minimum-volume enclosing ellipsoid by Khachiyan's barycentric ascent with
    Todd-Yildirim away steps, started from a Kumar-Yildirim core set.

    Returns (A, c) such that the ellipsoid is {x : (x-c)^T A^{-1} (x-c) <= 1}.
    Iteration stops when the weights satisfy the (1+tol) optimality conditions.
    """
    pts = np.asarray(points, dtype=float)
    n_pts, d = pts.shape
    q = np.vstack((pts.T, np.ones(n_pts)))
    lifted = d + 1
    u = np.zeros(n_pts)
    start = _ky_initial_support(pts)
    u[start] = 1.0 / len(start)
    for it in range(max_iter):
        if it % 500 == 0:
            u /= u.sum()
            # refresh to keep the rank-one updates from drifting
            xinv = np.linalg.inv((q * u) @ q.T)
            m = np.einsum("ij,ji->i", q.T, xinv @ q)
        j = int(np.argmax(m))
        support = np.flatnonzero(u > 0)
        i = int(support[np.argmin(m[support])])
        up = m[j] / lifted - 1.0
        down = 1.0 - m[i] / lifted
        if up < tol and down < tol:
            break
        k = j if up >= down else i
        step = (m[k] - lifted) / (lifted * (m[k] - 1.0))
        drop = False
        if k == i and step <= -u[i] / (1.0 - u[i]):
            step, drop = -u[i] / (1.0 - u[i]), True
        u *= 1.0 - step
        u[k] = 0.0 if drop else u[k] + step
        # Sherman-Morrison for X <- (1 - step) X + step q_k q_k^T
        w = xinv @ q[:, k]
        proj = q.T @ w
        denom = 1.0 - step + step * m[k]
        xinv = (xinv - step * np.outer(w, w) / denom) / (1.0 - step)
        m = (m - step * proj**2 / denom) / (1.0 - step)
    c = u @ pts
    a = ((pts * u[:, None]).T @ pts - np.outer(c, c)) * d
    return a, c


def _lowner_points(body):
    if isinstance(body, Polytope):
        return body.vertices
    return body.boundary_samples(4096)


def lowner_normalize(body, method="lowner", tol=1e-6):
    """
    Affine normalization used throughout the Hilbert-metric code.

    ``method="lowner"``: the image has the Euclidean unit ball as Löwner
    ellipsoid, certified by image ⊂ B(0,1) and B(0,1/n) ⊂ image.
    ``method="relaxed"``: only B(0,1/(2n)) ⊂ image ⊂ B(0,1) is required.

    Returns ``(image, affine_map, certificate)``.
    """
    n = body.dim
    if method == "lowner":
        if isinstance(body, Ellipsoid):
            a, c = body.shape_inv, body.center
        else:
            # boundary samples only resolve a smooth body to O(h^2); the rescale below keeps it in B(0,1)
            a, c = mvee(_lowner_points(body), tol=1e-7 if isinstance(body, Polytope) else 1e-4)
        w, vec = np.linalg.eigh(0.5 * (a + a.T))
        if np.any(w <= 1e-14 * np.max(w)):
            raise DegenerateBody("body is flat")
        mat = (vec / np.sqrt(w)) @ vec.T
        shift = -mat @ c
        required = 1.0 / n
    elif method == "relaxed":
        pts = _lowner_points(body)
        c = pts.mean(axis=0)
        mat = np.eye(n)
        shift = -c
        required = 1.0 / (2 * n)
    else:
        raise ValueError(f"unknown normalization {method!r}")
    image = body.affine(mat, shift)
    circ = image.circumradius()
    if circ > 1.0 or method == "relaxed":
        mat = mat / circ
        shift = shift / circ
        image = body.affine(mat, shift)
        circ = image.circumradius()
    inr = image.inradius()
    cert = {
        "method": method,
        "circumradius": circ,
        "inradius": inr,
        "required_inradius": required,
        "ok": bool(circ <= 1.0 + tol and inr >= required - tol),
    }
    if inr <= 0:
        raise DegenerateBody("normalized body does not contain the origin")
    return image, AffineMap(mat, shift), cert


def polar_dual(body):
    """Polar body {u : <u, x> <= 1 for x in body}; the origin must be interior."""
    origin = np.zeros(body.dim)
    if not body.contains(origin[None, :], tol=1e-12)[0]:
        raise OriginNotInterior("polar dual needs the origin strictly inside")
    if isinstance(body, VPolytope):
        return HPolytope(body.vertices, np.ones(len(body.vertices)), interior_point=origin)
    if isinstance(body, HPolytope):
        return VPolytope(body.normals / body.offsets[:, None], interior_point=origin)
    if isinstance(body, Ellipsoid):
        c = body.center
        a = body.shape_inv - np.outer(c, c)
        a_inv_c = np.linalg.solve(a, c)
        return Ellipsoid(-a_inv_c, a / (1.0 + c @ a_inv_c))
    if isinstance(body, RadialBody):
        return RadialBody(origin, SupportReciprocal(body))
    raise TypeError(f"no polar for {type(body).__name__}")


def dilate(body, center, ratio):
    """Image under x -> center + ratio (x - center)."""
    if ratio <= 0:
        raise ValueError("dilation ratio must be positive")
    return body.dilate(center, ratio)


@dataclass(frozen=True)
class ProjectiveMap:
    """Invertible (n+1)x(n+1) matrix acting on homogeneous coordinates."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if abs(np.linalg.det(m)) < 1e-14:
            raise ValueError("projective map must be invertible")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_affine(cls, matrix, shift):
        n = len(shift)
        m = np.eye(n + 1)
        m[:n, :n] = matrix
        m[:n, n] = shift
        return cls(m)

    def points(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        h = np.hstack((x, np.ones((len(x), 1)))) @ self.matrix.T
        return h[:, :-1] / h[:, -1:]

    def weight(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return np.hstack((x, np.ones((len(x), 1)))) @ self.matrix[-1]


def apply_projective(t, obj):
    """
    Apply a projective map to a point array or a body.

    Bodies must stay inside one affine chart: the last homogeneous coordinate
    may not vanish on the closed body, otherwise ``ImageUnbounded`` is raised.
    """
    if not isinstance(obj, ConvexBody):
        x = np.asarray(obj, dtype=float)
        if np.any(np.abs(t.weight(x)) < 1e-14):
            raise ImageUnbounded("point sent to the hyperplane at infinity")
        out = t.points(x)
        return out[0] if x.ndim == 1 else out
    n = obj.dim
    g, g0 = t.matrix[-1, :n], t.matrix[-1, n]
    if isinstance(obj, Ellipsoid):
        spread = np.sqrt(g @ obj.shape_inv @ g)
        lo, hi = g @ obj.center + g0 - spread, g @ obj.center + g0 + spread
        if lo <= 0 <= hi:
            raise ImageUnbounded("ellipsoid meets the hyperplane sent to infinity")
        m = np.zeros((n + 1, n + 1))
        m[:n, :n] = obj.shape
        m[:n, n] = m[n, :n] = -obj.shape @ obj.center
        m[n, n] = obj.center @ obj.shape @ obj.center - 1.0
        ti = np.linalg.inv(t.matrix)
        mp = ti.T @ m @ ti
        a, b, d = mp[:n, :n], mp[:n, n], mp[n, n]
        if np.any(np.linalg.eigvalsh(0.5 * (a + a.T)) <= 0):
            raise ImageUnbounded("image quadric is not an ellipsoid")
        center = -np.linalg.solve(a, b)
        scale = b @ np.linalg.solve(a, b) - d
        return Ellipsoid(center, a / scale)
    pts = obj.vertices if isinstance(obj, Polytope) else obj.boundary_samples(4096 if n == 2 else 8192)
    w = t.weight(pts)
    if not (np.all(w > 0) or np.all(w < 0)) or np.min(np.abs(w)) < 1e-14:
        raise ImageUnbounded("body meets the hyperplane sent to infinity")
    ip = t.points(obj.interior_point)[0]
    image = VPolytope(t.points(pts), interior_point=ip)
    if isinstance(obj, HPolytope):
        return HPolytope(image.normals, image.offsets, interior_point=ip, _vertices=image.vertices)
    return image
