"""Busemann and Holmes-Thompson densities, ball volumes, sphere areas.

At a point p the Finsler norm is the support function of X = ½(K - K) with
K = (Ω - p)*, so the Finsler unit ball is β = X* and its polar is X.  For
polytopes K = conv{a_i / slack_i}, which gives both densities exactly from the
facet slacks.  For smooth bodies the densities are computed by angular
quadrature after an ellipse fit that makes the Finsler ball nearly round.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .bodies import Ellipsoid, Polytope, RadialBody, require_interior
from .errors import BodyNotSmooth, DimensionUnsupported, NegativeRadius
from .hilbert import HilbertGeometry, ball_radial_extent, extent_from_chord
from .radial import FourierRadial, HarmonicRadial
from .sampling import (
    circle_directions,
    fibonacci_sphere,
    gauss_legendre_panels,
    pairwise_sum,
    sphere_directions,
    tangent_basis,
    unit_ball_volume,
)


class DensityKind(str, Enum):
    BUSEMANN = "busemann"
    HOLMES_THOMPSON = "ht"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("-", "").replace("_", "")
        if key in ("busemann", "b"):
            return cls.BUSEMANN
        if key in ("ht", "holmesthompson"):
            return cls.HOLMES_THOMPSON
        raise ValueError(f"unknown density kind {value!r}")


@dataclass
class QuadratureConfig:
    """
    Resolution knobs.  ``None`` picks a dimension-dependent default.

    angular : ray count for polar quadrature (2048 in 2D, 4096 in 3D)
    radial_order : Gauss-Legendre order per radial panel (the error estimate
        reruns with order - 2)
    panel_width : radial panel width in Hilbert-radius units
    fit_directions, density_directions : direction counts used for a single
        density evaluation on smooth bodies
    chart_panel_width, chart_tail : boundary-chart resolution for polytopes;
        the tail is how far past 2r the log-barycentric coordinate runs
    qmc_points, qmc_replicates : randomized QMC budget for 3D polytopes
    mc_samples : Monte-Carlo cross-check budget
    """

    angular: int = None
    radial_order: int = 6
    panel_width: float = 1.0
    fit_directions: int = None
    density_directions: int = None
    chart_panel_width: float = 1.0
    chart_tail: float = 40.0
    qmc_points: int = 2**13
    qmc_replicates: int = 4
    mc_samples: int = 200_000
    seed: int = 0
    rel_tol: float = 1e-4
    max_doublings: int = 2

    def angular_for(self, dim):
        return self.angular or (2048 if dim == 2 else 4096)

    def fit_for(self, dim):
        return self.fit_directions or (32 if dim == 2 else 64)

    def dens_for(self, dim):
        return self.density_directions or (64 if dim == 2 else 128)


DEFAULT_CONFIG = QuadratureConfig()


def _body(g):
    return g.body if isinstance(g, HilbertGeometry) else g


def _center(g):
    return g.center if isinstance(g, HilbertGeometry) else _body(g).interior_point


# ------------------------------------------------------- polytope densities


def _select_facets(normals, slacks):
    """Per point, the n smallest-slack facets with linearly independent normals."""
    n = normals.shape[1]
    npts = len(slacks)
    order = np.argsort(slacks, axis=1)
    chosen = np.empty((npts, n), dtype=int)
    chosen[:, 0] = order[:, 0]
    rows = np.arange(npts)
    for k in range(1, n):
        picked = normals[chosen[:, :k]]  # (P, k, n)
        cand = normals[order]  # (P, m, n)
        if k == 1 and n == 2:
            score = np.abs(picked[:, 0, None, 0] * cand[..., 1] - picked[:, 0, None, 1] * cand[..., 0])
        elif k == 1:
            score = np.linalg.norm(np.cross(picked[:, 0, None, :], cand), axis=2)
        else:
            score = np.abs(np.einsum("pmi,pi->pm", cand, np.cross(picked[:, 0], picked[:, 1])))
        first = np.argmax(score > 1e-8, axis=1)
        chosen[:, k] = order[rows, first]
    return chosen


def _rescaled_poles(normals, slacks):
    """
    Poles a_i/s_i expressed in coordinates where the selected facets become
    the unit covectors; returns (c_hat, log_scale) with
    log_scale = log(|det A_sel| / prod s_sel).
    """
    chosen = _select_facets(normals, slacks)
    a_sel = normals[chosen]  # (P, n, n)
    s_sel = np.take_along_axis(slacks, chosen, axis=1)
    inv = np.linalg.inv(a_sel)
    coef = np.einsum("mk,pkl->pml", normals, inv)
    # roundoff here is multiplied by slack ratios that can reach 1e30 near the boundary
    coef[np.abs(coef) < 1e-12] = 0.0
    rows = np.arange(len(slacks))[:, None]
    coef[rows, chosen] = np.eye(normals.shape[1])
    c_hat = coef * s_sel[:, None, :] / slacks[:, :, None]
    log_scale = np.log(np.abs(np.linalg.det(a_sel))) - np.sum(np.log(s_sel), axis=1)
    return c_hat, log_scale


def _leb_2d(c):
    """(Leb X, Leb β) for X = ½(K - K), K = conv of the cyclically ordered rows of c."""
    edge = np.roll(c, -1, axis=1) - c  # (P, m, 2)
    rel = c[:, None, :, :] - c[:, :, None, :]  # rel[p, i, j] = c_j - c_i
    cross = edge[:, :, None, 0] * rel[..., 1] - edge[:, :, None, 1] * rel[..., 0]
    leb_x = 0.25 * np.sum(np.max(np.abs(cross), axis=2), axis=1)
    w = np.stack((-edge[..., 1], edge[..., 0]), axis=2)
    w = w / np.linalg.norm(w, axis=2, keepdims=True)
    w = np.concatenate((w, -w), axis=1)  # (P, 2m, 2)
    ang = np.arctan2(w[..., 1], w[..., 0])
    w = np.take_along_axis(w, np.argsort(ang, axis=1)[..., None], axis=1)
    proj = np.einsum("pkd,pjd->pkj", w, c)
    f = 0.5 * (proj.max(axis=2) - proj.min(axis=2))
    b = w / f[..., None]
    nb = np.roll(b, -1, axis=1)
    leb_b = 0.5 * np.sum(b[..., 0] * nb[..., 1] - b[..., 1] * nb[..., 0], axis=1)
    return leb_x, leb_b


def _leb_3d(c):
    npts, m, _ = c.shape
    iu, ju = np.where(~np.eye(m, dtype=bool))
    leb_x = np.empty(npts)
    leb_b = np.empty(npts)
    for k in range(npts):
        pts = 0.5 * (c[k, iu] - c[k, ju])
        hull = ConvexHull(pts)
        leb_x[k] = hull.volume
        dual = hull.equations[:, :-1] / (-hull.equations[:, -1:])
        try:
            leb_b[k] = ConvexHull(dual).volume
        except QhullError:
            leb_b[k] = ConvexHull(dual, qhull_options="QJ").volume
    return leb_x, leb_b


def polytope_log_densities(body, slacks):
    """
    Natural logs of (Busemann, Holmes-Thompson) densities from facet slacks.

    Logs keep the values finite for points exponentially close to the boundary.
    """
    slacks = np.atleast_2d(slacks)
    n = body.dim
    c_hat, log_scale = _rescaled_poles(body.normals, slacks)
    leb_x, leb_b = (_leb_2d if n == 2 else _leb_3d)(c_hat)
    log_omega = np.log(unit_ball_volume(n))
    log_bus = log_omega - np.log(leb_b) + log_scale
    log_ht = np.log(leb_x) + log_scale - log_omega
    return log_bus, log_ht


# --------------------------------------------------------- fitted densities


def _frames(npts, dim):
    return np.broadcast_to(np.eye(dim), (npts, dim, dim))


def _finsler_in_frame(body, pts, frames, w, mats):
    """F(p, frame^T (M w)) for all points p (rows) and local directions w (rows)."""
    v_local = np.einsum("pij,kj->pki", mats, w)  # (P, K, k)
    v = np.einsum("pki,pin->pkn", v_local, frames)
    npts, kdir, dim = v.shape
    p = np.repeat(pts, kdir, axis=0)
    tp, tm = body.chord_times(p, v.reshape(-1, dim))
    return (0.5 * (1.0 / tp + 1.0 / tm)).reshape(npts, kdir)


def _quad_design(w):
    k = w.shape[1]
    if k == 2:
        return np.column_stack((w[:, 0] ** 2, 2 * w[:, 0] * w[:, 1], w[:, 1] ** 2))
    return np.column_stack(
        (w[:, 0] ** 2, w[:, 1] ** 2, w[:, 2] ** 2, 2 * w[:, 0] * w[:, 1], 2 * w[:, 0] * w[:, 2], 2 * w[:, 1] * w[:, 2])
    )


def _unpack_sym(coef, k):
    if k == 2:
        g = np.stack((coef[:, 0], coef[:, 1], coef[:, 1], coef[:, 2]), axis=1)
        return g.reshape(-1, 2, 2)
    a, b, c, d, e, f = coef.T
    return np.stack((a, d, e, d, b, f, e, f, c), axis=1).reshape(-1, 3, 3)


def _fit_normalizer(body, pts, frames, cfg, passes=2):
    """Linear maps M (per point) making w -> F(p, M w) close to the Euclidean norm."""
    k = frames.shape[1]
    w = circle_directions(cfg.fit_for(2)) if k == 2 else fibonacci_sphere(cfg.fit_for(3))
    pinv = np.linalg.pinv(_quad_design(w))
    mats = np.broadcast_to(np.eye(k), (len(pts), k, k)).copy()
    for _ in range(passes):
        f = _finsler_in_frame(body, pts, frames, w, mats)
        gram = _unpack_sym((f**2) @ pinv.T, k)
        evals, evecs = np.linalg.eigh(gram)
        ok = np.all(evals > 0, axis=1)
        evals = np.where(ok[:, None], evals, 1.0)
        root_inv = np.einsum("pij,pj,pkj->pik", evecs, evals**-0.5, evecs)
        root_inv[~ok] = np.eye(k)
        mats = mats @ root_inv
    return mats


def fitted_log_densities(body, pts, cfg=DEFAULT_CONFIG, frames=None):
    """
    (log Busemann, log Holmes-Thompson) densities by quadrature.

    ``frames`` (P, k, n) restricts the Finsler norm to the k-plane spanned by
    the frame rows, which gives the k-dimensional densities of the slice.
    """
    pts = np.atleast_2d(pts)
    if frames is None:
        frames = _frames(len(pts), body.dim)
    k = frames.shape[1]
    mats = _fit_normalizer(body, pts, frames, cfg)
    log_det = np.log(np.abs(np.linalg.det(mats)))
    log_omega = np.log(unit_ball_volume(k))
    nd = cfg.dens_for(k)
    if k == 2:
        theta = 2.0 * np.pi * np.arange(nd) / nd
        w = np.column_stack((np.cos(theta), np.sin(theta)))
        f = _finsler_in_frame(body, pts, frames, w, mats)
        wt = 2.0 * np.pi / nd
        leb_b = 0.5 * wt * pairwise_sum(f**-2.0)
        freq = np.fft.rfftfreq(nd, d=1.0 / nd)
        df = np.fft.irfft(1j * freq * np.fft.rfft(f, axis=1), n=nd, axis=1)
        leb_x = 0.5 * wt * pairwise_sum(f**2 - df**2)
    else:
        w = fibonacci_sphere(nd)
        wt = 4.0 * np.pi / nd
        f = _finsler_in_frame(body, pts, frames, w, mats)
        leb_b = wt / 3.0 * pairwise_sum(f**-3.0)
        leb_x = wt / 3.0 * pairwise_sum(f * _hessian_det(body, pts, frames, mats, w))
    log_bus = log_omega - np.log(leb_b) - log_det
    log_ht = np.log(leb_x) - log_det - log_omega
    return log_bus, log_ht


def _hessian_det(body, pts, frames, mats, w, delta=1e-3):
    """det of the tangential Hessian of the 1-homogeneous extension of w -> F(p, M w)."""
    e = tangent_basis(w)
    e1, e2 = e[:, 0], e[:, 1]
    offsets = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]
    vals = {}
    for a, b in offsets:
        vals[(a, b)] = _finsler_in_frame(body, pts, frames, w + delta * (a * e1 + b * e2), mats)
    d2 = delta * delta
    h11 = (vals[(1, 0)] - 2 * vals[(0, 0)] + vals[(-1, 0)]) / d2
    h22 = (vals[(0, 1)] - 2 * vals[(0, 0)] + vals[(0, -1)]) / d2
    h12 = (vals[(1, 1)] - vals[(1, -1)] - vals[(-1, 1)] + vals[(-1, -1)]) / (4 * d2)
    return h11 * h22 - h12 * h12


def log_densities(g, pts, cfg=DEFAULT_CONFIG):
    body = _body(g)
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    require_interior(body, pts)
    if isinstance(body, Polytope):
        return polytope_log_densities(body, body.slacks(pts))
    return fitted_log_densities(body, pts, cfg)


def _density(g, p, cfg, which):
    p = np.asarray(p, dtype=float)
    val = np.exp(log_densities(g, p, cfg)[which])
    return float(val[0]) if p.ndim == 1 else val


def busemann_density(g, p, cfg=DEFAULT_CONFIG):
    """ω_n / Leb(β(p)), vectorized over rows of ``p``."""
    return _density(g, p, cfg, 0)


def ht_density(g, p, cfg=DEFAULT_CONFIG):
    """Leb(β(p)*) / ω_n, vectorized over rows of ``p``."""
    return _density(g, p, cfg, 1)


# ------------------------------------------------------------- ball volumes


@dataclass
class VolumeResult:
    radii: np.ndarray
    values: np.ndarray
    errors: np.ndarray
    method: str


def _radial_nodes(radii, width, order):
    """GL nodes on consecutive intervals [r_{k-1}, r_k]; returns (nodes, weights, interval index)."""
    edges = np.concatenate(([0.0], radii))
    xs, ws, idx = [], [], []
    for k in range(len(radii)):
        x, w = gauss_legendre_panels(edges[k], edges[k + 1], width, order)
        xs.append(x)
        ws.append(w)
        idx.append(np.full(len(x), k))
    return np.concatenate(xs), np.concatenate(ws), np.concatenate(idx)


def _check_radii(radii):
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(radii < 0):
        raise NegativeRadius("radius must be nonnegative")
    if np.any(np.diff(radii) < 0):
        raise ValueError("radii must be nondecreasing")
    return radii


def _smooth_pass(body, o, radii, which, cfg, nrays, order):
    n = body.dim
    u, wt = sphere_directions(n, nrays)
    tp, tm = body.chord_times(o[None, :], u)
    rho, w_rho, idx = _radial_nodes(radii, cfg.panel_width, order)
    per_ray = np.zeros((nrays, len(radii)))
    chunk = max(1, 200_000 // max(len(rho), 1))
    for lo in range(0, nrays, chunk):
        sl = slice(lo, lo + chunk)
        a, b = tp[sl, None], tm[sl, None]
        e = np.exp(-2.0 * rho)[None, :]
        s = extent_from_chord(a, b, rho[None, :])
        ds = 2.0 * e * a * b * (a + b) / (b + a * e) ** 2
        x = o + (s[..., None] * u[sl, None, :])
        logd = fitted_log_densities(body, x.reshape(-1, n), cfg)[which].reshape(s.shape)
        f = np.exp(logd) * s ** (n - 1) * ds * w_rho[None, :]
        for k in range(len(radii)):
            per_ray[sl, k] = pairwise_sum(f[:, idx == k])
    per_ray = np.cumsum(per_ray, axis=1)
    full = wt * pairwise_sum(per_ray, axis=0)
    half = 2.0 * wt * pairwise_sum(per_ray[0::2], axis=0)
    return full, half


def _smooth_ball_volumes(body, o, radii, which, cfg):
    nrays = cfg.angular_for(body.dim)
    for attempt in range(cfg.max_doublings + 1):
        full, half = _smooth_pass(body, o, radii, which, cfg, nrays, cfg.radial_order)
        low, _ = _smooth_pass(body, o, radii, which, cfg, nrays, cfg.radial_order - 2)
        err = np.abs(full - half) + np.abs(full - low)
        if np.all(err <= cfg.rel_tol * np.abs(full)) or attempt == cfg.max_doublings:
            return full, err, f"polar-quadrature/{nrays}"
        nrays *= 2


def _chart_weights(kappa, rho):
    e = np.exp(-2.0 * rho)
    den = 1.0 + kappa * e
    gap = (1.0 + kappa) * e / den
    sigma = -np.expm1(-2.0 * rho) / den
    dsigma = 2.0 * e * (1.0 + kappa) / den**2
    return gap, sigma, dsigma


def _backward_time(body, o, v):
    av = v @ body.normals.T
    sl = body.offsets - body.normals @ o
    with np.errstate(divide="ignore"):
        return np.where(av < 0, sl / np.where(av < 0, -av, 1.0), np.inf).min(axis=1)


def _polygon_pass(body, o, radii, which, cfg, order):
    """Boundary-chart product Gauss rule over edges (2D polytopes)."""
    base = body.offsets - body.normals @ o
    verts, dslack = body.vertices, body.vertex_slack
    k = len(verts)
    tail = cfg.chart_tail
    rho_all, w_rho_all, idx_all = _radial_nodes(radii, cfg.panel_width, order)
    tau_max = 2.0 * radii[-1] + tail
    tau_all, w_tau_all = gauss_legendre_panels(0.0, tau_max, cfg.chart_panel_width, order)
    small_all = 0.5 * np.exp(-tau_all)
    out = np.zeros(len(radii))
    for edge in range(k):
        nxt = (edge + 1) % k
        length = np.linalg.norm(verts[nxt] - verts[edge])
        for half in (0, 1):
            # restrict tau to where the integrand has not yet decayed
            for lo in range(0, len(rho_all), 64):
                rho = rho_all[lo : lo + 64]
                keep = tau_all <= 2.0 * rho[-1] + tail
                tau_w, small = w_tau_all[keep], small_all[keep]
                lam, mu = (small, 1.0 - small) if half == 0 else (1.0 - small, small)
                xb = mu[:, None] * verts[edge] + lam[:, None] * verts[nxt]
                kappa = 1.0 / _backward_time(body, o, xb - o)
                dx = mu[:, None] * dslack[:, edge] + lam[:, None] * dslack[:, nxt]
                gap, sigma, dsig = _chart_weights(kappa[:, None], rho[None, :])
                slacks = gap[..., None] * base + sigma[..., None] * dx[:, None, :]
                logd = polytope_log_densities(body, slacks.reshape(-1, len(base)))[which].reshape(gap.shape)
                f = np.exp(logd + np.log(sigma) + np.log(dsig)) * (tau_w * small)[:, None] * w_rho_all[None, lo : lo + 64]
                colsum = pairwise_sum(f, axis=0) * base[edge] * length
                np.add.at(out, idx_all[lo : lo + 64], colsum)
    return np.cumsum(out)


def _polygon_ball_volumes(body, o, radii, which, cfg):
    hi = _polygon_pass(body, o, radii, which, cfg, cfg.radial_order)
    lo = _polygon_pass(body, o, radii, which, cfg, cfg.radial_order - 2)
    return hi, np.abs(hi - lo), "boundary-chart-gauss"


def _polyhedron_parts(body):
    parts = []
    for f, cyc in enumerate(body.facet_cycles):
        cen = body.vertices[cyc].mean(axis=0)
        dcen = body.vertex_slack[:, cyc].mean(axis=1)
        dcen[f] = 0.0
        for j in range(len(cyc)):
            a, b = cyc[j], cyc[(j + 1) % len(cyc)]
            area = 0.5 * np.linalg.norm(np.cross(body.vertices[a] - cen, body.vertices[b] - cen))
            for half in (0, 1):
                parts.append((f, a, b, cen, dcen, area, half))
    return parts


def _polyhedron_sample(body, o, parts, pid, tau1, tau2, rho, which):
    base = body.offsets - body.normals @ o
    vals = np.zeros(len(pid))
    for j, (f, a, b, cen, dcen, area, half) in enumerate(parts):
        sel = pid == j
        if not np.any(sel):
            continue
        gam = np.exp(-tau1[sel])
        small = 0.5 * np.exp(-tau2[sel])
        lam, mu = (small, 1.0 - small) if half == 0 else (1.0 - small, small)
        edge_pt = mu[:, None] * body.vertices[a] + lam[:, None] * body.vertices[b]
        xb = gam[:, None] * cen + (1.0 - gam)[:, None] * edge_pt
        dx = gam[:, None] * dcen + (1.0 - gam)[:, None] * (
            mu[:, None] * body.vertex_slack[:, a] + lam[:, None] * body.vertex_slack[:, b]
        )
        kappa = 1.0 / _backward_time(body, o, xb - o)
        gap, sigma, dsig = _chart_weights(kappa, rho[sel])
        logd = polytope_log_densities(body, gap[:, None] * base + sigma[:, None] * dx)[which]
        jac = 2.0 * area * (1.0 - gam) * gam * small * base[f]
        vals[sel] = np.exp(logd + 2.0 * np.log(sigma) + np.log(dsig)) * jac
    return vals


TAU_MARGIN = 12.0


def _polyhedron_ball_volumes(body, o, radii, which, cfg):
    """
    Randomized QMC over the boundary chart (3D polytopes), stratified by
    radius interval.  The log-barycentric coordinates are drawn on
    [0, 2 rho + TAU_MARGIN]; past 2 rho the integrand decays like exp(-tau).
    """
    from scipy.stats import qmc

    parts = _polyhedron_parts(body)
    npart = len(parts)
    edges = np.concatenate(([0.0], radii))
    est = np.zeros((cfg.qmc_replicates, len(radii)))
    for k in range(len(radii)):
        r0, r1 = edges[k], edges[k + 1]
        if r1 <= r0:
            continue
        for rep in range(cfg.qmc_replicates):
            sob = qmc.Sobol(d=4, scramble=True, seed=np.random.default_rng([cfg.seed, k, rep]))
            z = sob.random(cfg.qmc_points)
            pid = np.minimum((z[:, 0] * npart).astype(int), npart - 1)
            rho = r0 + (r1 - r0) * z[:, 3]
            span = 2.0 * rho + TAU_MARGIN
            vals = _polyhedron_sample(body, o, parts, pid, span * z[:, 1], span * z[:, 2], rho, which)
            est[rep, k] = np.mean(vals * span**2) * npart * (r1 - r0)
    est = np.cumsum(est, axis=1)
    mean = est.mean(axis=0)
    if cfg.qmc_replicates > 1:
        err = 2.0 * est.std(axis=0, ddof=1) / np.sqrt(cfg.qmc_replicates)
    else:
        err = np.abs(mean)
    return mean, err, "boundary-chart-rqmc"


def ball_volumes(g, radii, kind=DensityKind.BUSEMANN, cfg=DEFAULT_CONFIG, center=None):
    """
    Volumes of the metric balls B(o, r) for a nondecreasing list of radii.

    Returns a ``VolumeResult`` whose ``errors`` are resolution-comparison
    estimates (deterministic rules) or replicate spreads (randomized QMC).
    """
    body = _body(g)
    o = np.asarray(_center(g) if center is None else center, dtype=float)
    require_interior(body, o)
    radii = _check_radii(radii)
    which = 0 if DensityKind.parse(kind) is DensityKind.BUSEMANN else 1
    vals = np.zeros(len(radii))
    errs = np.zeros(len(radii))
    pos = radii > 0
    method = "trivial"
    if np.any(pos):
        rr = radii[pos]
        if isinstance(body, Polytope):
            fn = _polygon_ball_volumes if body.dim == 2 else _polyhedron_ball_volumes
        else:
            fn = _smooth_ball_volumes
        vals[pos], errs[pos], method = fn(body, o, rr, which, cfg)
    return VolumeResult(radii, vals, errs, method)


def ball_volume(g, o, r, kind=DensityKind.BUSEMANN, cfg=DEFAULT_CONFIG):
    """(value, error estimate) for Vol B(o, r)."""
    res = ball_volumes(g, [r], kind, cfg, center=o)
    return float(res.values[0]), float(res.errors[0])


def _polygon_sample(body, o, part, tau, rho, which):
    """Chart integrand (with Jacobian) at random samples, 2D polytopes; part = 2*edge + half."""
    base = body.offsets - body.normals @ o
    verts, dslack = body.vertices, body.vertex_slack
    k = len(verts)
    edge, half = part // 2, part % 2
    nxt = (edge + 1) % k
    small = 0.5 * np.exp(-tau)
    lam = np.where(half == 0, small, 1.0 - small)
    mu = np.where(half == 0, 1.0 - small, small)
    xb = mu[:, None] * verts[edge] + lam[:, None] * verts[nxt]
    kappa = 1.0 / _backward_time(body, o, xb - o)
    dx = mu[:, None] * dslack[:, edge].T + lam[:, None] * dslack[:, nxt].T
    gap, sigma, dsig = _chart_weights(kappa, rho)
    logd = polytope_log_densities(body, gap[:, None] * base + sigma[:, None] * dx)[which]
    length = np.linalg.norm(verts[nxt] - verts[edge], axis=1)
    return np.exp(logd + np.log(sigma) + np.log(dsig)) * small * base[edge] * length


def ball_volume_mc(g, o, r, kind=DensityKind.BUSEMANN, cfg=DEFAULT_CONFIG):
    """
    Plain Monte-Carlo estimate of Vol B(o, r): (value, standard error).

    Samples the same parametrization as the deterministic rules (boundary
    chart for polygons, polar coordinates otherwise) with pseudo-random
    points, so it checks the quadrature independently of its node layout.
    """
    body = _body(g)
    o = np.asarray(o, dtype=float)
    if r < 0:
        raise NegativeRadius("radius must be nonnegative")
    if r == 0:
        return 0.0, 0.0
    require_interior(body, o)
    which = 0 if DensityKind.parse(kind) is DensityKind.BUSEMANN else 1
    n = body.dim
    rng = np.random.default_rng(cfg.seed)
    m = cfg.mc_samples
    rho = rng.uniform(0.0, r, m)
    if isinstance(body, Polytope) and n == 2:
        nparts = 2 * len(body.vertices)
        t_max = 2.0 * r + cfg.chart_tail
        part = rng.integers(0, nparts, m)
        tau = rng.uniform(0.0, t_max, m)
        vals = np.concatenate(
            [
                _polygon_sample(body, o, part[i : i + 50_000], tau[i : i + 50_000], rho[i : i + 50_000], which)
                for i in range(0, m, 50_000)
            ]
        )
        vals = vals * nparts * t_max * r
    else:
        u = rng.normal(size=(m, n))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        tp, tm = body.chord_times(np.broadcast_to(o, u.shape), u)
        e = np.exp(-2.0 * rho)
        s = extent_from_chord(tp, tm, rho)
        ds = 2.0 * e * tp * tm * (tp + tm) / (tm + tp * e) ** 2
        x = o + s[:, None] * u
        logd = np.concatenate(
            [log_densities(body, x[i : i + 20_000], cfg)[which] for i in range(0, m, 20_000)]
        )
        from .sampling import sphere_measure

        vals = np.exp(logd) * s ** (n - 1) * ds * sphere_measure(n) * r
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(m))


# -------------------------------------------------------------- sphere area


def _sphere_length_2d(body, o, r, nrays, h=1e-5):
    theta = 2.0 * np.pi * np.arange(nrays) / nrays
    tp0, tm0 = None, None
    s = []
    for shift in (0.0, h, -h):
        u = np.column_stack((np.cos(theta + shift), np.sin(theta + shift)))
        tp, tm = body.chord_times(o[None, :], u)
        s.append(extent_from_chord(tp, tm, r))
    s0, ds = s[0], (s[1] - s[2]) / (2 * h)
    u = np.column_stack((np.cos(theta), np.sin(theta)))
    perp = np.column_stack((-u[:, 1], u[:, 0]))
    x = o + s0[:, None] * u
    vel = ds[:, None] * u + s0[:, None] * perp
    tp, tm = body.chord_times(x, vel)
    f = 0.5 * (1.0 / tp + 1.0 / tm)
    wt = 2.0 * np.pi / nrays
    return wt * pairwise_sum(f), 2.0 * wt * pairwise_sum(f[0::2])


def _sphere_area_3d(body, o, r, which, cfg, nrays, h=1e-5):
    u = fibonacci_sphere(nrays)
    basis = tangent_basis(u)

    def extent(w):
        w = w / np.linalg.norm(w, axis=1, keepdims=True)
        tp, tm = body.chord_times(o[None, :], w)
        return extent_from_chord(tp, tm, r)

    s = extent(u)
    grad = np.zeros_like(u)
    for j in range(2):
        e = basis[:, j]
        d = (extent(u + h * e) - extent(u - h * e)) / (2 * h)
        grad += d[:, None] * e
    normal = s[:, None] * u - grad
    normal /= np.linalg.norm(normal, axis=1, keepdims=True)
    d_area = s * np.sqrt(s * s + np.sum(grad * grad, axis=1))
    x = o + s[:, None] * u
    frames = tangent_basis(normal)
    if isinstance(body, Polytope):
        logd = _slice_polytope_log_density(body, x, frames, which, cfg)
    else:
        logd = fitted_log_densities(body, x, cfg, frames=frames)[which]
    f = np.exp(logd) * d_area
    wt = 4.0 * np.pi / nrays
    return wt * pairwise_sum(f), 2.0 * wt * pairwise_sum(f[0::2])


def _slice_polytope_log_density(body, x, frames, which, cfg):
    # the slice of a polytope is a polygon; its Finsler ball is still
    # piecewise linear, so a dense angular rule is adequate here
    dense = QuadratureConfig(density_directions=max(cfg.dens_for(2), 512))
    return fitted_log_densities(body, x, dense, frames=frames)[which]


def sphere_area(g, o, r, cfg=DEFAULT_CONFIG, kind=DensityKind.BUSEMANN):
    """
    (n-1)-measure of the metric sphere S(o, r): (value, error estimate).

    The sphere is parametrized by directions from o.  At each point the
    (n-1)-density of the slice of Ω by the sphere's tangent hyperplane is
    integrated against Euclidean area.  In the plane this is the Hilbert
    length of the curve.
    """
    body = _body(g)
    o = np.asarray(o, dtype=float)
    if r < 0:
        raise NegativeRadius("radius must be nonnegative")
    if body.dim not in (2, 3):
        raise DimensionUnsupported("sphere area needs dimension 2 or 3")
    require_interior(body, o)
    if r == 0:
        return 0.0, 0.0
    nrays = cfg.angular_for(body.dim)
    which = 0 if DensityKind.parse(kind) is DensityKind.BUSEMANN else 1
    if body.dim == 2:
        full, half = _sphere_length_2d(body, o, r, nrays)
    else:
        full, half = _sphere_area_3d(body, o, r, which, cfg, nrays)
    return float(full), float(abs(full - half))


# --------------------------------------------------- centro-projective area


def _as_radial(body):
    if isinstance(body, Ellipsoid):
        radial = FourierRadial(1.0) if body.dim == 2 else HarmonicRadial(1.0)
        return body.center, radial, body.sqrt_inv
    if isinstance(body, RadialBody) and body.smooth:
        return body.center, body.radial, body.linear
    raise BodyNotSmooth("centro-projective area needs an ellipsoid or a smooth radial body")


def _boundary_geometry_2d(center, radial, lin, n_theta):
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    r, r1, r2 = radial.angular(theta, order=2)
    u = np.column_stack((np.cos(theta), np.sin(theta)))
    up = np.column_stack((-u[:, 1], u[:, 0]))
    x = center + (r[:, None] * u) @ lin.T
    dx = (r1[:, None] * u + r[:, None] * up) @ lin.T
    ddx = ((r2 - r)[:, None] * u + 2.0 * r1[:, None] * up) @ lin.T
    speed = np.linalg.norm(dx, axis=1)
    cross = dx[:, 0] * ddx[:, 1] - dx[:, 1] * ddx[:, 0]
    sign = np.sign(np.linalg.det(lin))
    curvature = sign * cross / speed**3
    normal = sign * np.column_stack((dx[:, 1], -dx[:, 0])) / speed[:, None]
    weight = speed * 2.0 * np.pi / n_theta
    return x, normal, curvature, weight


def _boundary_geometry_3d(center, radial, lin, n_theta):
    n_phi = 2 * n_theta
    xg, wg = np.polynomial.legendre.leggauss(n_theta)
    th1 = 0.5 * np.pi * (xg + 1.0)
    ph1 = 2.0 * np.pi * np.arange(n_phi) / n_phi
    th, ph = np.meshgrid(th1, ph1, indexing="ij")
    th, ph = th.ravel(), ph.ravel()
    w_param = np.outer(0.5 * np.pi * wg, np.full(n_phi, 2.0 * np.pi / n_phi)).ravel()
    r, r_t, r_p, r_tt, r_tp, r_pp = radial.angular(th, ph)
    st, ct, sp_, cp = np.sin(th), np.cos(th), np.sin(ph), np.cos(ph)
    u = np.column_stack((st * cp, st * sp_, ct))
    u_t = np.column_stack((ct * cp, ct * sp_, -st))
    u_p = np.column_stack((-st * sp_, st * cp, np.zeros_like(th)))
    u_tp = np.column_stack((-ct * sp_, ct * cp, np.zeros_like(th)))
    u_pp = np.column_stack((-st * cp, -st * sp_, np.zeros_like(th)))
    col = lambda a: a[:, None]  # noqa: E731
    x = center + (col(r) * u) @ lin.T
    x_t = (col(r_t) * u + col(r) * u_t) @ lin.T
    x_p = (col(r_p) * u + col(r) * u_p) @ lin.T
    x_tt = (col(r_tt) * u + 2 * col(r_t) * u_t - col(r) * u) @ lin.T
    x_tp = (col(r_tp) * u + col(r_t) * u_p + col(r_p) * u_t + col(r) * u_tp) @ lin.T
    x_pp = (col(r_pp) * u + 2 * col(r_p) * u_p + col(r) * u_pp) @ lin.T
    nvec = np.cross(x_t, x_p)
    area = np.linalg.norm(nvec, axis=1)
    normal = nvec / area[:, None]
    flip = np.sum(normal * (x - center), axis=1) < 0
    normal[flip] *= -1.0
    e_ff = np.sum(x_t * x_t, axis=1)
    f_ff = np.sum(x_t * x_p, axis=1)
    g_ff = np.sum(x_p * x_p, axis=1)
    # second fundamental form with the inward normal, positive on convex bodies
    l2 = -np.sum(x_tt * normal, axis=1)
    m2 = -np.sum(x_tp * normal, axis=1)
    n2 = -np.sum(x_pp * normal, axis=1)
    curvature = (l2 * n2 - m2 * m2) / (e_ff * g_ff - f_ff * f_ff)
    return x, normal, curvature, area * w_param


def centro_projective_area(g, p=None, resolution=None, with_error=False):
    """
    Boundary integral of sqrt(k) <n, x-p>^{-(n-1)/2} (2a/(1+a))^{(n-1)/2}.

    k is the Gauss curvature (analytic, from the radial representation), n the
    outward normal and a(x) the ratio with p - a(x)(x - p) on the boundary.
    Points where k <= 0 contribute nothing.
    """
    body = _body(g)
    if p is None:
        p = _center(g)
    p = np.asarray(p, dtype=float)
    require_interior(body, p)
    center, radial, lin = _as_radial(body)
    n = body.dim
    res = resolution or (1024 if n == 2 else 64)

    def integral(m):
        geom = _boundary_geometry_2d if n == 2 else _boundary_geometry_3d
        x, normal, k, w = geom(center, radial, lin, m)
        rel = x - p
        pairing = np.sum(normal * rel, axis=1)
        a, _ = body.chord_times(np.broadcast_to(p, rel.shape), -rel)
        ex = 0.5 * (n - 1)
        f = np.where(k > 0, np.sqrt(np.maximum(k, 0.0)) * pairing**-ex * (2.0 * a / (1.0 + a)) ** ex, 0.0)
        return float(pairwise_sum(f * w))

    val = integral(res)
    if not with_error:
        return val
    return val, abs(val - integral(res // 2))
