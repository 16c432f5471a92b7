"""Monte-Carlo oracle for volumes, centroids and moments.

Rejection sampling in the bounding box, deterministic for a given seed.
Used by the test suite as an implementation-independent cross-check of the
exact boundary-integral formulas.
"""

from __future__ import annotations

import numpy as np

from .polytope import Polytope


def mc_oracle(poly: Polytope, predicate, n: int, seed: int):
    """Estimate box_volume * E[predicate(X)] for X uniform in the bbox.

    `predicate` maps an (n, dim) array of points to (n,) float values
    (an indicator for plain volume).  Returns (estimate, stderr).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    lo = poly.vertices.min(axis=0)
    hi = poly.vertices.max(axis=0)
    box = float(np.prod(hi - lo))
    pts = lo + rng.random((n, poly.dim)) * (hi - lo)
    vals = np.asarray(predicate(pts), dtype=float)
    est = box * float(vals.mean())
    err = box * float(vals.std(ddof=1)) / np.sqrt(n) if n > 1 else np.inf
    return est, err


def mc_volume(poly: Polytope, n: int, seed: int):
    return mc_oracle(poly, lambda pts: poly.contains(pts).astype(float), n, seed)


def mc_cap_volume(poly: Polytope, theta, h: float, n: int, seed: int):
    theta = np.asarray(theta, dtype=float)

    def pred(pts):
        return (poly.contains(pts) & (pts @ theta >= h)).astype(float)

    return mc_oracle(poly, pred, n, seed)


def mc_centroid(poly: Polytope, n: int, seed: int):
    """Centroid estimate from accepted samples: (point, per-coordinate stderr)."""
    rng = np.random.default_rng(seed)
    lo = poly.vertices.min(axis=0)
    hi = poly.vertices.max(axis=0)
    pts = lo + rng.random((n, poly.dim)) * (hi - lo)
    inside = pts[poly.contains(pts)]
    est = inside.mean(axis=0)
    err = inside.std(axis=0, ddof=1) / np.sqrt(len(inside))
    return est, err


def mc_section_moment(poly: Polytope, theta, h: float, axis_a, axis_c: float,
                      slab: float, n: int, seed: int):
    """Slab estimate of a section's second moment about a line.

    Integrates dist^2 over the slab |x . theta - h| <= slab and divides by
    its thickness; the line is {v : a . v + c = 0} in the section frame.
    """
    from .clipping import section_frame

    theta = np.asarray(theta, dtype=float)
    frame = section_frame(theta)
    a = np.asarray(axis_a, dtype=float)

    def pred(pts):
        inside = poly.contains(pts) & (np.abs(pts @ theta - h) <= slab)
        coords = (pts - h * theta) @ frame
        dist2 = (coords @ a + axis_c) ** 2
        return np.where(inside, dist2, 0.0)

    est, err = mc_oracle(poly, pred, n, seed)
    return est / (2.0 * slab), err / (2.0 * slab)
