"""Direction sets on S^1 / S^2 and small quadrature helpers."""

import numpy as np

GOLDEN = (1.0 + 5.0 ** 0.5) / 2.0


def circle_directions(k, offset=0.0):
    """``k`` equally spaced unit vectors, first one at angle ``offset``."""
    theta = offset + 2.0 * np.pi * np.arange(k) / k
    return np.column_stack((np.cos(theta), np.sin(theta)))


def fibonacci_sphere(k):
    """
    Quasi-uniform points on the unit 2-sphere (Fibonacci lattice).

    Every point carries the same weight ``4*pi/k`` for integration.
    """
    i = np.arange(k, dtype=float) + 0.5
    z = 1.0 - 2.0 * i / k
    rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = 2.0 * np.pi * i / GOLDEN
    return np.column_stack((rho * np.cos(phi), rho * np.sin(phi), z))


def sphere_directions(dim, k):
    """Equal-weight direction set on S^{dim-1} and the common weight."""
    if dim == 2:
        return circle_directions(k), 2.0 * np.pi / k
    if dim == 3:
        return fibonacci_sphere(k), 4.0 * np.pi / k
    raise ValueError(f"unsupported dimension {dim}")


def sphere_measure(dim):
    return 2.0 * np.pi if dim == 2 else 4.0 * np.pi


def unit_ball_volume(dim):
    """omega_n: Lebesgue measure of the Euclidean unit ball."""
    return {1: 2.0, 2: np.pi, 3: 4.0 * np.pi / 3.0}[dim]


def tangent_basis(u):
    """
    Orthonormal basis of the tangent space at each unit vector.

    Returns shape (k, n-1, n).
    """
    u = np.atleast_2d(u)
    if u.shape[1] == 2:
        return np.stack((-u[:, 1], u[:, 0]), axis=1)[:, None, :]
    helper = np.where(np.abs(u[:, :1]) < 0.9, [[1.0, 0.0, 0.0]], [[0.0, 1.0, 0.0]])
    e1 = helper - np.sum(helper * u, axis=1, keepdims=True) * u
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(u, e1)
    return np.stack((e1, e2), axis=1)


def gauss_legendre_panels(a, b, width, order):
    """Composite Gauss-Legendre nodes/weights on [a, b] with panels of at most ``width``."""
    if b <= a:
        return np.zeros(0), np.zeros(0)
    x, w = np.polynomial.legendre.leggauss(order)
    npan = max(1, int(np.ceil((b - a) / width)))
    edges = np.linspace(a, b, npan + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def pairwise_sum(x, axis=-1):
    """Sum with fixed pairwise association order (reproducible bit for bit)."""
    x = np.moveaxis(np.asarray(x, dtype=float), axis, -1)
    while x.shape[-1] > 1:
        if x.shape[-1] % 2:
            x = np.concatenate((x, np.zeros(x.shape[:-1] + (1,))), axis=-1)
        x = x[..., 0::2] + x[..., 1::2]
    return x[..., 0] if x.shape[-1] else np.zeros(x.shape[:-1])
