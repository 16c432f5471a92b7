"""Exact planar polygon primitives used across the package.

All polygons are (n, 2) float arrays with vertices in counterclockwise
order.  Area, centroid and second moments are closed-form shoelace sums,
exact for polynomials of the corresponding degree.
"""

from __future__ import annotations

import numpy as np


def polygon_area(poly: np.ndarray) -> float:
    """Signed area (positive for counterclockwise order)."""
    x, y = poly[:, 0], poly[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.sum(x * yn - xn * y))


def polygon_centroid(poly: np.ndarray) -> np.ndarray:
    x, y = poly[:, 0], poly[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cr = x * yn - xn * y
    a = 0.5 * np.sum(cr)
    cx = np.sum((x + xn) * cr) / (6.0 * a)
    cy = np.sum((y + yn) * cr) / (6.0 * a)
    return np.array([cx, cy])


def polygon_second_moments(poly: np.ndarray) -> np.ndarray:
    """Matrix of integrals [[Ixx, Ixy], [Ixy, Iyy]] about the origin,

    where Ixx = int x^2 dA etc.  Exact shoelace formulas.
    """
    x, y = poly[:, 0], poly[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cr = x * yn - xn * y
    ixx = np.sum((x * x + x * xn + xn * xn) * cr) / 12.0
    iyy = np.sum((y * y + y * yn + yn * yn) * cr) / 12.0
    ixy = np.sum((x * yn + 2 * x * y + 2 * xn * yn + xn * y) * cr) / 24.0
    return np.array([[ixx, ixy], [ixy, iyy]])


def halfplane_clip(poly: np.ndarray, normal: np.ndarray, offset: float,
                   snap: float = 0.0) -> np.ndarray:
    """Clip a convex polygon to the half-plane {x : normal . x <= offset}.

    Sutherland-Hodgman with an optional snap band: points within `snap`
    of the boundary count as inside.
    """
    if len(poly) == 0:
        return poly
    d = poly @ np.asarray(normal, dtype=float) - offset
    inside = d <= snap
    out = []
    n = len(poly)
    for i in range(n):
        j = (i + 1) % n
        if inside[i]:
            out.append(poly[i])
            if not inside[j]:
                t = d[i] / (d[i] - d[j])
                out.append(poly[i] + t * (poly[j] - poly[i]))
        elif inside[j]:
            t = d[i] / (d[i] - d[j])
            out.append(poly[i] + t * (poly[j] - poly[i]))
    if not out:
        return np.zeros((0, 2))
    return np.asarray(out)


def dedupe_ring(poly: np.ndarray, tol: float) -> np.ndarray:
    """Remove consecutive duplicates (cyclically) within `tol`."""
    if len(poly) == 0:
        return poly
    keep = []
    for p in poly:
        if not keep or np.linalg.norm(p - keep[-1]) > tol:
            keep.append(p)
    while len(keep) > 1 and np.linalg.norm(keep[0] - keep[-1]) <= tol:
        keep.pop()
    return np.asarray(keep)


def line_intersection(p1: np.ndarray, d1: np.ndarray,
                      p2: np.ndarray, d2: np.ndarray) -> np.ndarray:
    """Intersection of lines p1 + t d1 and p2 + s d2.

    Raises ValueError when the directions are (numerically) parallel.
    """
    cross = d1[0] * d2[1] - d1[1] * d2[0]
    scale = max(np.linalg.norm(d1) * np.linalg.norm(d2), 1e-300)
    if abs(cross) < 1e-14 * scale:
        raise ValueError("lines are parallel")
    rhs = p2 - p1
    t = (rhs[0] * d2[1] - rhs[1] * d2[0]) / cross
    return p1 + t * d1


def point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    t = np.clip(float((p - a) @ ab) / denom, 0.0, 1.0)
    return float(np.linalg.norm(p - (a + t * ab)))


def point_polygon_distance(p: np.ndarray, poly: np.ndarray) -> float:
    """Distance from a point to a convex polygon (0 inside)."""
    n = len(poly)
    d = poly - p
    dn = np.roll(poly, -1, axis=0) - p
    cross = d[:, 0] * dn[:, 1] - d[:, 1] * dn[:, 0]
    if np.all(cross >= 0):
        return 0.0
    return min(point_segment_distance(p, poly[i], poly[(i + 1) % n])
               for i in range(n))


def hausdorff_distance(poly_a: np.ndarray, poly_b: np.ndarray,
                       samples_per_edge: int = 32) -> float:
    """Hausdorff distance between two convex polygons.

    For convex polygons the sup over each boundary is attained on edges;
    edges are sampled densely and vertices included exactly.
    """
    def boundary_points(poly):
        pts = [poly]
        t = np.linspace(0.0, 1.0, samples_per_edge, endpoint=False)[1:]
        nxt = np.roll(poly, -1, axis=0)
        for i in range(len(poly)):
            pts.append(poly[i] + t[:, None] * (nxt[i] - poly[i]))
        return np.vstack(pts)

    def one_sided(src, dst):
        return max(point_polygon_distance(p, dst) for p in boundary_points(src))

    return max(one_sided(poly_a, poly_b), one_sided(poly_b, poly_a))


def convex_turns(poly: np.ndarray) -> np.ndarray:
    """Cross products of consecutive edge vectors (all > 0 iff strictly convex CCW)."""
    e = np.roll(poly, -1, axis=0) - poly
    en = np.roll(e, -1, axis=0)
    return e[:, 0] * en[:, 1] - e[:, 1] * en[:, 0]
