"""Hit-and-run sampling of bounded half-space intersections."""

from __future__ import annotations

import numpy as np

from ..errors import UnboundedDirection
from .hsi import HSI, chebyshev_center, contains_many


def default_mix_iterations(dim: int) -> int:
    return 10 * dim ** 3


def hit_and_run(h: HSI, p0, iterations: int, rng: np.random.Generator) -> np.ndarray:
    """Run hit-and-run chains from ``p0`` and return their final points.

    ``p0`` may be a single point of shape ``(d,)`` or a batch ``(n, d)``; in the
    batch case each row is an independent chain advanced in lock-step.
    """
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    p = np.array(p0, dtype=float)
    single = p.ndim == 1
    P = np.atleast_2d(p)
    n, d = P.shape
    if d != h.dim:
        raise ValueError(f"start point has dimension {d}, region {h.dim}")
    if not np.all(contains_many(h, P)):
        raise ValueError("start point lies outside the region")

    A, b = h.A, h.b
    for _ in range(iterations):
        dirs = rng.standard_normal((n, d))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        slack = np.maximum(b - P @ A.T, 0.0)
        ad = dirs @ A.T
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = slack / np.abs(ad)
        m_b = np.min(np.where(ad > 1e-12, ratio, np.inf), axis=1)
        m_a = np.min(np.where(ad < -1e-12, ratio, np.inf), axis=1)
        if not (np.all(np.isfinite(m_a)) and np.all(np.isfinite(m_b))):
            raise UnboundedDirection("chord through the region is unbounded")
        step = rng.uniform(-m_a, m_b)
        P = P + step[:, None] * dirs
    return P[0] if single else P


def sample_uniform(h: HSI, n: int, rng: np.random.Generator, iterations: int | None = None) -> np.ndarray:
    """``n`` independent draws, each its own chain started at the Chebyshev centre."""
    center, _ = chebyshev_center(h)
    iters = iterations or default_mix_iterations(h.dim)
    return hit_and_run(h, np.tile(center, (n, 1)), iters, rng)
