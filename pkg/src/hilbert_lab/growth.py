"""Volume-growth curves of metric balls and spheres, and entropy slopes."""

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import NonpositiveVolume, ParameterOutOfRange, WindowTooSmall
from .hilbert import HilbertGeometry
from .measures import DEFAULT_CONFIG, DensityKind, QuadratureConfig, ball_volumes, sphere_area


@dataclass
class GrowthCurve:
    radii: np.ndarray
    values: np.ndarray
    errors: np.ndarray
    kind: str = "ball"
    density: str = DensityKind.BUSEMANN.value
    center: np.ndarray = None
    body_id: str = ""
    method: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.radii = np.asarray(self.radii, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        self.errors = np.asarray(self.errors, dtype=float)
        if np.any(np.diff(self.radii) <= 0):
            raise ValueError("growth-curve radii must be strictly increasing")

    def __len__(self):
        return len(self.radii)

    def scaled(self, factor):
        return GrowthCurve(self.radii, self.values * factor, self.errors * abs(factor), self.kind, self.density,
                           self.center, self.body_id, self.method, dict(self.meta))


@dataclass
class SlopeEstimate:
    """Least-squares slope of ln(value) against r with a 95% half-width."""

    slope: float
    half_width: float
    window: tuple
    n_points: int
    intercept: float = 0.0
    residual_rms: float = 0.0
    min_slope: float = float("nan")
    max_slope: float = float("nan")

    @property
    def drift(self):
        """Half the spread of sub-window slopes: how far from linear ln Vol still is."""
        return 0.5 * (self.max_slope - self.min_slope)

    @property
    def total_half_width(self):
        """Fit half-width combined with the window drift."""
        return float(np.hypot(self.half_width, self.drift))

    @property
    def interval(self):
        return self.slope - self.total_half_width, self.slope + self.total_half_width

    def agrees_with(self, other):
        """True if the slopes differ by less than the combined total half-widths."""
        return abs(self.slope - other.slope) <= np.hypot(self.total_half_width, other.total_half_width)


def growth_curve(g, radii, kind="ball", density=DensityKind.BUSEMANN, cfg=DEFAULT_CONFIG, center=None,
                 body_id=""):
    """Ball volumes or sphere areas along a schedule of radii."""
    radii = np.asarray(radii, dtype=float)
    body = g.body if isinstance(g, HilbertGeometry) else g
    o = center if center is not None else (g.center if isinstance(g, HilbertGeometry) else body.interior_point)
    o = np.asarray(o, dtype=float)
    density = DensityKind.parse(density)
    if len(radii) == 0:
        return GrowthCurve(radii, np.zeros(0), np.zeros(0), kind, density.value, o, body_id)
    if np.any(radii <= 0):
        raise ParameterOutOfRange("radii must be positive")
    if kind == "ball":
        res = ball_volumes(g, radii, density, cfg, center=o)
        return GrowthCurve(radii, res.values, res.errors, kind, density.value, o, body_id, res.method)
    if kind == "sphere":
        out = [sphere_area(g, o, r, cfg, density) for r in radii]
        vals, errs = np.array(out).T
        return GrowthCurve(radii, vals, errs, kind, density.value, o, body_id, "sphere-parametrization")
    raise ValueError(f"unknown curve kind {kind!r}")


def default_radii(g, density=DensityKind.BUSEMANN, step=0.5, max_volume=1e12, r_cap=None, center=None):
    """
    Arithmetic schedule with the given step, stopping at the largest radius
    whose ball volume stays below ``max_volume`` (probed at coarse resolution).
    """
    body = g.body if isinstance(g, HilbertGeometry) else g
    r_cap = r_cap or (80.0 if body.dim == 2 else 60.0)
    coarse = QuadratureConfig(angular=128, qmc_points=256, qmc_replicates=2, max_doublings=0)
    probe = np.arange(2.0, r_cap + 1e-9, 2.0)
    vals = ball_volumes(g, probe, density, coarse, center=center).values
    ok = probe[vals <= max_volume]
    r_max = float(ok[-1]) if len(ok) else 2.0
    return np.arange(step, r_max + 1e-9, step)


def _ols(r, y, rel_err):
    n = len(r)
    x = r - r.mean()
    sxx = np.sum(x * x)
    slope = np.sum(x * (y - y.mean())) / sxx
    intercept = y.mean() - slope * r.mean()
    resid = y - (intercept + slope * r)
    dof = n - 2
    se_fit = np.sqrt(np.sum(resid**2) / dof / sxx) if dof > 0 else 0.0
    # first-order propagation of the per-point quadrature errors through the fit
    se_quad = np.sqrt(np.sum((x / sxx) ** 2 * rel_err**2))
    t = stats.t.ppf(0.975, dof) if dof > 0 else np.inf
    return slope, intercept, t * np.hypot(se_fit, se_quad), float(np.sqrt(np.mean(resid**2)))


def entropy_estimate(curve, window=None, min_points=4, max_rel_err=0.01):
    """
    Slope of ln Vol against r over ``window``.

    The default window is the top half of the sampled radii; points whose
    relative error exceeds ``max_rel_err`` are dropped.  The estimate also
    carries the min and max slopes over half-length sub-windows, which
    expose curvature of the log-curve inside the window.
    """
    r, v, e = curve.radii, curve.values, curve.errors
    if window is None:
        if len(r) == 0:
            raise WindowTooSmall("empty curve")
        window = (float(r[len(r) // 2]) if len(r) > 1 else float(r[0]), float(r[-1]))
    lo, hi = window
    sel = (r >= lo - 1e-12) & (r <= hi + 1e-12)
    if np.any(v[sel] <= 0):
        raise NonpositiveVolume("volumes in the window must be positive")
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(v > 0, e / v, np.inf)
    sel &= rel <= max_rel_err
    if sel.sum() < min_points:
        raise WindowTooSmall(f"need at least {min_points} usable points in window {window}, got {int(sel.sum())}")
    rr, yy, ee = r[sel], np.log(v[sel]), rel[sel]
    slope, intercept, hw, rms = _ols(rr, yy, ee)
    half = max(min_points, len(rr) // 2)
    subs = [_ols(rr[i : i + half], yy[i : i + half], ee[i : i + half])[0] for i in range(0, len(rr) - half + 1)]
    return SlopeEstimate(float(slope), float(hw), (float(lo), float(hi)), int(sel.sum()), float(intercept), rms,
                         float(min(subs)), float(max(subs)))


def sinh_normalized_ratio(curve, r):
    """Vol(r) / sinh^{n-1}(r), interpolating ln Vol linearly between samples."""
    dim = int(curve.meta.get("dim", 2)) if curve.center is None else len(curve.center)
    radii = curve.radii
    if not radii[0] <= r <= radii[-1]:
        raise ParameterOutOfRange(f"r={r} outside sampled range [{radii[0]}, {radii[-1]}]")
    val = np.exp(np.interp(r, radii, np.log(curve.values)))
    return float(val / np.sinh(r) ** (dim - 1))


def write_csv(curve, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["r", "value", "err"])
        for row in zip(curve.radii, curve.values, curve.errors):
            w.writerow([repr(float(x)) for x in row])


def read_csv(path, **kwargs):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return GrowthCurve(data[:, 0], data[:, 1], data[:, 2], **kwargs)
