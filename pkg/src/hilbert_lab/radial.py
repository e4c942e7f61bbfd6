"""Radial functions for star-shaped (convex) bodies.

A radial function maps a unit direction ``w`` to the distance from the body's
center to its boundary along ``w``.  The two analytic families carry exact
derivatives so curvature can be evaluated without finite differences.
"""

import math

import numpy as np
import sympy as sp


class FourierRadial:
    """r(theta) = c0 + sum_k a_k cos(k theta) + b_k sin(k theta) on the circle."""

    dim = 2
    smooth = True

    def __init__(self, constant, terms=()):
        self.constant = float(constant)
        self.terms = [(int(k), float(a), float(b)) for k, a, b in terms]
        for k, _, _ in self.terms:
            if k < 1:
                raise ValueError("Fourier modes must have k >= 1")

    def angular(self, theta, order=2):
        """Value and the first ``order`` theta-derivatives."""
        theta = np.asarray(theta, dtype=float)
        out = [np.full_like(theta, self.constant)] + [np.zeros_like(theta) for _ in range(order)]
        for k, a, b in self.terms:
            c, s = np.cos(k * theta), np.sin(k * theta)
            out[0] += a * c + b * s
            if order >= 1:
                out[1] += k * (-a * s + b * c)
            if order >= 2:
                out[2] += -k * k * (a * c + b * s)
        return out

    def __call__(self, w):
        w = np.atleast_2d(w)
        return self.angular(np.arctan2(w[:, 1], w[:, 0]), order=0)[0]

    def bound(self):
        return self.constant + sum(abs(a) + abs(b) for _, a, b in self.terms)

    def to_json(self):
        return {"constant": self.constant, "coefficients": [list(t) for t in self.terms]}


def _real_harmonic(l, m, th, ph):
    am = abs(m)
    norm = sp.sqrt(sp.Rational(2 * l + 1, 4) / sp.pi * sp.factorial(l - am) / sp.factorial(l + am))
    leg = sp.assoc_legendre(l, am, sp.cos(th))
    if m == 0:
        return norm * leg
    if m > 0:
        return sp.sqrt(2) * norm * leg * sp.cos(am * ph)
    return sp.sqrt(2) * norm * leg * sp.sin(am * ph)


class HarmonicRadial:
    """Real spherical-harmonic expansion on S^2 in polar angle ``th`` and azimuth ``ph``."""

    dim = 3
    smooth = True

    def __init__(self, constant, terms=()):
        self.constant = float(constant)
        self.terms = [(int(l), int(m), float(c)) for l, m, c in terms]
        th, ph = sp.symbols("th ph", real=True)
        expr = sp.Float(self.constant)
        for l, m, c in self.terms:
            if l < 0 or abs(m) > l:
                raise ValueError(f"invalid harmonic index ({l}, {m})")
            expr = expr + sp.Float(c) * _real_harmonic(l, m, th, ph)
        parts = [
            expr,
            sp.diff(expr, th),
            sp.diff(expr, ph),
            sp.diff(expr, th, 2),
            sp.diff(expr, th, ph),
            sp.diff(expr, ph, 2),
        ]
        self._funcs = [sp.lambdify((th, ph), e, "numpy") for e in parts]

    def angular(self, th, ph):
        """(r, r_th, r_ph, r_thth, r_thph, r_phph) at the given angles."""
        th = np.asarray(th, dtype=float)
        ph = np.asarray(ph, dtype=float)
        return [np.broadcast_to(f(th, ph), th.shape).astype(float) for f in self._funcs]

    def __call__(self, w):
        w = np.atleast_2d(w)
        th = np.arccos(np.clip(w[:, 2], -1.0, 1.0))
        ph = np.arctan2(w[:, 1], w[:, 0])
        return np.broadcast_to(self._funcs[0](th, ph), th.shape).astype(float)

    def bound(self):
        # |Y_lm| <= sqrt((2l+1)/(4 pi)); real combinations pick up at most sqrt(2).
        return self.constant + sum(
            abs(c) * math.sqrt(2.0) * math.sqrt((2 * l + 1) / (4 * math.pi)) for l, _, c in self.terms
        )

    def to_json(self):
        return {"constant": self.constant, "coefficients": [list(t) for t in self.terms]}


class SupportReciprocal:
    """Radial function 1/h_K(w) of the polar body of ``K`` (origin interior)."""

    smooth = False

    def __init__(self, body):
        self.body = body
        self.dim = body.dim

    def __call__(self, w):
        return 1.0 / self.body.support(np.atleast_2d(w))

    @property
    def polar_support(self):
        return _Gauge(self.body)

    def bound(self):
        from .sampling import sphere_directions

        u, _ = sphere_directions(self.dim, 4096 if self.dim == 2 else 8192)
        return 1.05 / float(np.min(self.body.support(u)))


class _Gauge:
    """Minkowski functional of a body about the origin; only exact for radial bodies centred there."""

    def __init__(self, body):
        self.body = body
        self.available = hasattr(body, "gauge") and bool(np.allclose(getattr(body, "center", 1.0), 0.0))

    def __call__(self, x):
        return self.body.gauge(x)
