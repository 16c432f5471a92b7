"""Half-space clipping, plane sections and exact section moments.

The batch evaluators :func:`cap_volumes` and :func:`section_areas` are the
hot path of the level solver: they evaluate, for a family of planes given
by unit normals and offsets, the volume of the body on the submerged side
{x . theta >= h} and the (d-1)-measure of the plane section.  Both reduce
the body to its oriented boundary simplices, clip each against the plane
and sum signed cone contributions from an apex chosen on the plane, so the
lid never has to be assembled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geom2d
from .errors import EmptyCap, EmptySection, FullBody
from .polytope import Polytope, build_polytope
from .tolerances import geo_tol

_LEVI3 = np.zeros((3, 3, 3))
for _p, _s in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
               ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)):
    _LEVI3[_p] = _s


@dataclass
class PlaneSpec:
    """Oriented hyperplane {x : x . theta = offset}.

    For sub-planes inside a section frame, `a` is a unit direction in the
    (d-1)-dimensional frame and `c` the offset of {v : a . v + c = 0}.
    """

    theta: np.ndarray
    offset: float
    a: np.ndarray | None = None
    c: float | None = None

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float)
        if abs(np.linalg.norm(self.theta) - 1.0) > 1e-12:
            raise ValueError("theta must be a unit vector (within 1e-12)")
        if self.a is not None:
            self.a = np.asarray(self.a, dtype=float)
            if abs(np.linalg.norm(self.a) - 1.0) > 1e-12:
                raise ValueError("a must be a unit vector (within 1e-12)")


def make_plane(direction, offset: float, a=None, c=None) -> PlaneSpec:
    """PlaneSpec with the direction normalized for convenience."""
    d = np.asarray(direction, dtype=float)
    return PlaneSpec(d / np.linalg.norm(d), float(offset), a, c)


@dataclass
class Cap:
    """Submerged part P ∩ {x . theta >= offset}, rebuilt as a polytope."""

    polytope: Polytope
    source_theta: np.ndarray
    source_offset: float


@dataclass
class Section:
    """Convex (d-1)-polytope P ∩ {x . theta = offset} in an orthonormal frame.

    `polygon` holds frame coordinates: an (m, 2) CCW ring in 3D, the two
    endpoint coordinates of the chord as a (2, 1) array in 2D.  `centroid`
    and `second_moment` (the matrix of integrals of v_i v_j over the
    section) are in frame coordinates about the frame origin.
    """

    theta: np.ndarray
    offset: float
    frame_origin: np.ndarray
    frame: np.ndarray
    polygon: np.ndarray
    area: float
    centroid: np.ndarray
    second_moment: np.ndarray

    def to_ambient(self, coords: np.ndarray) -> np.ndarray:
        return self.frame_origin + np.atleast_2d(coords) @ self.frame.T

    @property
    def centroid_ambient(self) -> np.ndarray:
        return self.frame_origin + self.frame @ self.centroid


def section_frame(theta: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of theta-perp as (d, d-1) columns.

    Gram-Schmidt against the coordinate axes least aligned with theta
    (stable tie-break by index); in 3D the second vector is flipped if
    needed so that (b1, b2, theta) is right-handed.
    """
    theta = np.asarray(theta, dtype=float)
    d = len(theta)
    if d == 2:
        return np.array([[-theta[1]], [theta[0]]])
    axes = np.argsort(np.abs(theta), kind="stable")
    b1 = np.zeros(3)
    b1[axes[0]] = 1.0
    b1 -= (b1 @ theta) * theta
    b1 /= np.linalg.norm(b1)
    b2 = np.zeros(3)
    b2[axes[1]] = 1.0
    b2 -= (b2 @ theta) * theta + (b2 @ b1) * b1
    b2 /= np.linalg.norm(b2)
    if np.dot(np.cross(b1, b2), theta) < 0:
        b2 = -b2
    return np.stack([b1, b2], axis=1)


# -- clip and section ------------------------------------------------------


def _plane_guards(poly: Polytope, theta: np.ndarray, h: float):
    t = poly.vertices @ theta
    eps = geo_tol() * max(poly.diameter(), 1.0)
    if h <= t.min() + eps:
        raise FullBody("plane lies below the body; cap is the whole body")
    if h >= t.max() - eps:
        raise EmptyCap("plane lies above the body; cap is empty")
    return t


def _edge_crossings(poly: Polytope, t: np.ndarray, h: float):
    """Intersection points of the plane with strictly straddling true edges."""
    y = t - h
    e = poly.edges
    ya, yb = y[e[:, 0]], y[e[:, 1]]
    mask = ya * yb < 0
    idx = np.nonzero(mask)[0]
    va, vb = poly.vertices[e[idx, 0]], poly.vertices[e[idx, 1]]
    s = (ya[idx] / (ya[idx] - yb[idx]))[:, None]
    return idx, va + s * (vb - va)


def clip(poly: Polytope, plane: PlaneSpec) -> Cap:
    """Cap P ∩ {x . theta >= offset} as a new canonical polytope.

    Vertices on the plane (within tolerance) are kept: the half-space is
    closed.  Raises EmptyCap / FullBody when the plane misses the interior.
    """
    theta, h = plane.theta, plane.offset
    t = _plane_guards(poly, theta, h)
    eps = geo_tol() * max(poly.diameter(), 1.0)
    kept = poly.vertices[t - h >= -eps]
    _, crossings = _edge_crossings(poly, t, h)
    pts = np.vstack([kept, crossings]) if len(crossings) else kept
    cap_poly = build_polytope(pts, poly.dim, density=poly.density)
    return Cap(cap_poly, theta, h)


def section(poly: Polytope, plane: PlaneSpec) -> Section:
    """Plane section with exact area, centroid and second moments."""
    theta, h = plane.theta, plane.offset
    try:
        t = _plane_guards(poly, theta, h)
    except (EmptyCap, FullBody) as exc:
        raise EmptySection(str(exc)) from exc
    eps = geo_tol() * max(poly.diameter(), 1.0)
    _, crossings = _edge_crossings(poly, t, h)
    on_plane = poly.vertices[np.abs(t - h) <= eps]
    pts = np.vstack([crossings, on_plane]) if len(on_plane) else crossings
    if len(pts) < poly.dim:
        raise EmptySection("plane does not meet the interior")

    frame = section_frame(theta)
    origin = h * theta
    coords = (pts - origin) @ frame

    if poly.dim == 2:
        u = np.sort(coords[:, 0])
        lo, hi = float(u[0]), float(u[-1])
        if hi - lo <= eps:
            raise EmptySection("degenerate chord")
        ring = np.array([[lo], [hi]])
        length = hi - lo
        cen = np.array([(lo + hi) / 2.0])
        m = np.array([[(hi ** 3 - lo ** 3) / 3.0]])
        return Section(theta, h, origin, frame, ring, length, cen, m)

    center = coords.mean(axis=0)
    ang = np.arctan2(coords[:, 1] - center[1], coords[:, 0] - center[0])
    ring = coords[np.argsort(ang, kind="stable")]
    ring = geom2d.dedupe_ring(ring, eps)
    if len(ring) < 3 or geom2d.polygon_area(ring) <= eps * eps:
        raise EmptySection("degenerate section polygon")
    area = geom2d.polygon_area(ring)
    cen = geom2d.polygon_centroid(ring)
    m = geom2d.polygon_second_moments(ring)
    return Section(theta, h, origin, frame, ring, area, cen, m)


def section_second_moment(sec: Section, sub: PlaneSpec) -> float:
    """Integral over the section of squared distance to the sub-plane.

    The sub-plane is {v : a . v + c = 0} in frame coordinates.  Computed by
    quadrature exact for quadratics (triangle midpoint rule in 3D, Simpson
    on the chord in 2D) and therefore independent of the shoelace moments
    stored on the Section.
    """
    if sub.a is None or sub.c is None:
        raise ValueError("sub-plane needs both `a` and `c`")
    a, c = sub.a, float(sub.c)

    if sec.polygon.shape[1] == 1:
        u1, u2 = float(sec.polygon[0, 0]), float(sec.polygon[1, 0])
        f = lambda u: (a[0] * u + c) ** 2
        return (u2 - u1) * (f(u1) + 4.0 * f(0.5 * (u1 + u2)) + f(u2)) / 6.0

    ring = sec.polygon
    total = 0.0
    p0 = ring[0]
    for i in range(1, len(ring) - 1):
        p1, p2 = ring[i], ring[i + 1]
        tri_area = 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1])
                          - (p1[1] - p0[1]) * (p2[0] - p0[0]))
        mids = [(p0 + p1) / 2.0, (p1 + p2) / 2.0, (p2 + p0) / 2.0]
        total += tri_area / 3.0 * sum((m @ a + c) ** 2 for m in mids)
    return float(total)


# -- batch evaluators ------------------------------------------------------


def _safe_div(num, den):
    return num / np.where(den == 0.0, 1.0, den)


def cap_volumes(poly: Polytope, thetas: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Volumes of P ∩ {x . theta_k >= h_k} for a batch of planes.

    thetas is (D, dim) with unit rows, h is (D,).  Boundary simplices are
    clipped against each plane; signed cones from an apex on the plane sum
    to the cap volume (the lid's cone is flat and drops out).
    """
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    h = np.atleast_1d(np.asarray(h, dtype=float))
    t = poly.vertices @ thetas.T                       # (V, D)
    tri = poly.triangulation
    apex = thetas * h[:, None]                         # (D, dim)

    if poly.dim == 2:
        y = t[tri] - h[None, None, :]                  # (E, 2, D)
        order = np.argsort(y, axis=1, kind="stable")
        ys = np.take_along_axis(y, order, axis=1)
        parity = 1.0 - 2.0 * order[:, 0, :]            # +1 if already sorted
        q = poly.vertices[tri]                          # (E, 2, 2)
        qb = np.broadcast_to(q[:, :, None, :], q.shape[:2] + (len(h), 2))
        qs = np.take_along_axis(qb, order[:, :, :, None], axis=1)
        rel = qs - apex[None, None, :, :]
        cross2 = lambda u, v: u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
        full = cross2(q[:, 0, None, :] - apex[None, :, :],
                      q[:, 1, None, :] - apex[None, :, :])
        s = _safe_div(ys[:, 0, :], ys[:, 0, :] - ys[:, 1, :])
        m_lh = rel[:, 0, :, :] + s[..., None] * (rel[:, 1, :, :] - rel[:, 0, :, :])
        piece = parity * cross2(m_lh, rel[:, 1, :, :])
        count = (ys >= 0).sum(axis=1)
        contrib = np.where(count == 2, full, np.where(count == 1, piece, 0.0))
        return contrib.sum(axis=0) / 2.0

    y = t[tri] - h[None, None, :]                      # (T, 3, D)
    order = np.argsort(y, axis=1, kind="stable")
    ys = np.take_along_axis(y, order, axis=1)
    parity = _LEVI3[order[:, 0, :], order[:, 1, :], order[:, 2, :]]
    q = poly.vertices[tri]                              # (T, 3, 3)
    qb = np.broadcast_to(q[:, :, None, :], q.shape[:2] + (len(h), 3))
    qs = np.take_along_axis(qb, order[:, :, :, None], axis=1)
    rel = qs - apex[None, None, :, :]                   # (T, 3, D, 3)

    det3 = lambda u, v, w: np.einsum("...d,...d->...", np.cross(u, v), w)
    full = det3(q[:, 0, None, :] - apex[None, :, :],
                q[:, 1, None, :] - apex[None, :, :],
                q[:, 2, None, :] - apex[None, :, :])    # (T, D)

    lo, mid, hi = rel[:, 0], rel[:, 1], rel[:, 2]
    s_lh = _safe_div(ys[:, 0, :], ys[:, 0, :] - ys[:, 2, :])[..., None]
    s_lm = _safe_div(ys[:, 0, :], ys[:, 0, :] - ys[:, 1, :])[..., None]
    s_mh = _safe_div(ys[:, 1, :], ys[:, 1, :] - ys[:, 2, :])[..., None]
    m_lh = lo + s_lh * (hi - lo)
    m_lm = lo + s_lm * (mid - lo)
    m_mh = mid + s_mh * (hi - mid)

    piece_top = parity * det3(m_lh, m_mh, hi)           # one vertex above
    piece_bot = full - parity * det3(lo, m_lm, m_lh)    # one vertex below
    count = (ys >= 0).sum(axis=1)
    contrib = np.where(count == 3, full,
                       np.where(count == 2, piece_bot,
                                np.where(count == 1, piece_top, 0.0)))
    return contrib.sum(axis=0) / 6.0


def section_areas(poly: Polytope, thetas: np.ndarray, h: np.ndarray) -> np.ndarray:
    """(d-1)-measure of the plane sections for a batch of planes.

    Chord length in 2D; lid polygon area in 3D, accumulated from oriented
    triangle/plane crossing segments.  This is -dV/dh for the volumes of
    :func:`cap_volumes`.
    """
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    h = np.atleast_1d(np.asarray(h, dtype=float))
    t = poly.vertices @ thetas.T

    if poly.dim == 2:
        e = poly.edges
        y = t[e] - h[None, None, :]                     # (E, 2, D)
        ya, yb = y[:, 0, :], y[:, 1, :]
        mask = ya * yb < 0
        s = _safe_div(ya, ya - yb)
        va = poly.vertices[e[:, 0]][:, None, :]
        vb = poly.vertices[e[:, 1]][:, None, :]
        pts = va + s[..., None] * (vb - va)             # (E, D, 2)
        u_vec = np.stack([-thetas[:, 1], thetas[:, 0]], axis=1)
        proj = np.einsum("edk,dk->ed", pts, u_vec)
        proj_hi = np.where(mask, proj, -np.inf)
        proj_lo = np.where(mask, proj, np.inf)
        yv = t - h[None, :]
        vproj = poly.vertices @ u_vec.T
        on_plane = np.abs(yv) <= 0.0
        proj_hi = np.vstack([proj_hi, np.where(on_plane, vproj, -np.inf)])
        proj_lo = np.vstack([proj_lo, np.where(on_plane, vproj, np.inf)])
        length = proj_hi.max(axis=0) - proj_lo.min(axis=0)
        return np.maximum(length, 0.0)

    tri = poly.triangulation
    y = t[tri] - h[None, None, :]
    order = np.argsort(y, axis=1, kind="stable")
    ys = np.take_along_axis(y, order, axis=1)
    q = poly.vertices[tri]
    qb = np.broadcast_to(q[:, :, None, :], q.shape[:2] + (len(h), 3))
    qs = np.take_along_axis(qb, order[:, :, :, None], axis=1)
    lo, mid, hi = qs[:, 0], qs[:, 1], qs[:, 2]          # (T, D, 3)
    s_lh = _safe_div(ys[:, 0, :], ys[:, 0, :] - ys[:, 2, :])[..., None]
    s_lm = _safe_div(ys[:, 0, :], ys[:, 0, :] - ys[:, 1, :])[..., None]
    s_mh = _safe_div(ys[:, 1, :], ys[:, 1, :] - ys[:, 2, :])[..., None]
    m_lh = lo + s_lh * (hi - lo)
    m_lm = lo + s_lm * (mid - lo)
    m_mh = mid + s_mh * (hi - mid)
    count = (ys >= 0).sum(axis=1)                       # (T, D)

    p1 = np.where((count == 1)[..., None], m_lh, m_lm)
    p2 = np.where((count == 1)[..., None], m_mh, m_lh)
    seg_mask = (count == 1) | (count == 2)

    # orient each segment along theta x N so the lid ring runs CCW about theta
    normals = np.cross(q[:, 1] - q[:, 0], q[:, 2] - q[:, 0])
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    tdir = np.cross(thetas[None, :, :], normals[:, None, :])
    flip = np.einsum("tdk,tdk->td", p2 - p1, tdir) < 0
    p1s = np.where(flip[..., None], p2, p1)
    p2s = np.where(flip[..., None], p1, p2)

    apex = thetas * h[:, None]
    cr = np.cross(p1s - apex[None, :, :], p2s - apex[None, :, :])
    contrib = np.einsum("tdk,dk->td", cr, thetas)
    contrib = np.where(seg_mask, contrib, 0.0)
    return np.abs(contrib.sum(axis=0)) / 2.0
