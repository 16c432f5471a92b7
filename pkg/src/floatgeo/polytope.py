"""Convex polytope representation for dimensions 2 and 3.

A polytope is stored canonically: hull vertices sorted lexicographically,
facets oriented outward, and the boundary triangulated (facet fans).  All
operations treat instances as immutable; nothing mutates a built polytope.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import DegenerateInput, UnsupportedDimension
from .tolerances import geo_tol


@dataclass
class Polytope:
    """Convex polytope with oriented boundary.

    Attributes
    ----------
    dim : 2 or 3.
    vertices : (n, dim) array, lexicographically sorted hull vertices.
    facets : list of vertex-index cycles (CCW seen from outside).
    facet_normals : (F, dim) outward unit normals, one per facet.
    triangulation : (T, dim) index array; boundary simplices (edges in 2D,
        triangles in 3D) oriented consistently with the outward normals.
    edges : (E, 2) index array of true edges (1-faces), sorted.
    density : relative density in (0, 1), carried as metadata.
    """

    dim: int
    vertices: np.ndarray
    facets: list
    facet_normals: np.ndarray
    triangulation: np.ndarray
    edges: np.ndarray
    density: float = 0.5
    volume_cache: float = field(default=0.0, repr=False)

    def __post_init__(self):
        if not (0.0 < self.density < 1.0):
            raise ValueError("density must lie strictly between 0 and 1")
        for arr in (self.vertices, self.facet_normals, self.triangulation,
                    self.edges):
            arr.flags.writeable = False

    # -- basic queries -------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def interior_point(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def diameter(self) -> float:
        v = self.vertices
        d2 = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=-1)
        return float(np.sqrt(d2.max()))

    def contains(self, points: np.ndarray, tol: float | None = None) -> np.ndarray:
        """Boolean mask: which of the (m, dim) points lie in the polytope."""
        tol = geo_tol() if tol is None else tol
        pts = np.atleast_2d(points)
        anchors = np.array([self.vertices[cyc[0]] for cyc in self.facets])
        offsets = np.einsum("fd,fd->f", self.facet_normals, anchors)
        slack = pts @ self.facet_normals.T - offsets
        return np.all(slack <= tol * max(self.diameter(), 1.0), axis=1)

    def support(self, theta: np.ndarray) -> float:
        return float(np.max(self.vertices @ theta))

    def transformed(self, rotation: np.ndarray, translation: np.ndarray) -> "Polytope":
        """Rigidly moved copy (re-canonicalized)."""
        pts = self.vertices @ np.asarray(rotation).T + np.asarray(translation)
        return build_polytope(pts, self.dim, density=self.density)


def build_polytope(points, dim: int, density: float = 0.5) -> Polytope:
    """Build the convex hull of a point cloud as a canonical Polytope.

    Redundant (interior or collinear) points are dropped, facets are
    oriented outward and the boundary is fan-triangulated.  Output order is
    deterministic: vertices sort lexicographically and facet lists are
    sorted by their index cycles.
    """
    if dim not in (2, 3):
        raise UnsupportedDimension(f"dim must be 2 or 3, got {dim}")
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise DegenerateInput(f"points must be (n, {dim})")
    if len(pts) < dim + 1:
        raise DegenerateInput("need at least dim+1 points")
    if dim == 2:
        return _build_2d(pts, density)
    return _build_3d(pts, density)


# -- 2D hull ------------------------------------------------------------


def _build_2d(pts: np.ndarray, density: float) -> Polytope:
    scale = max(float(np.ptp(pts, axis=0).max()), 1e-300)
    eps = geo_tol() * scale
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    uniq = []
    for i in order:
        if not uniq or np.linalg.norm(pts[i] - uniq[-1]) > eps:
            uniq.append(pts[i])
    uniq = np.asarray(uniq)
    if len(uniq) < 3:
        raise DegenerateInput("fewer than 3 distinct points")

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                cr = np.cross(out[-1] - out[-2], p - out[-2])
                if cr <= eps * scale:  # drop collinear points: true sides only
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = chain(uniq)
    upper = chain(uniq[::-1])
    ring = np.asarray(lower[:-1] + upper[:-1])
    if len(ring) < 3:
        raise DegenerateInput("points are collinear")

    # canonical CCW cycle starting at the lexicographically smallest vertex
    start = np.lexsort((ring[:, 1], ring[:, 0]))[0]
    ring = np.roll(ring, -start, axis=0)
    n = len(ring)
    cycle_edges = [(i, (i + 1) % n) for i in range(n)]
    normals = []
    for a, b in cycle_edges:
        t = ring[b] - ring[a]
        nrm = np.array([t[1], -t[0]])
        normals.append(nrm / np.linalg.norm(nrm))
    tri = np.array(cycle_edges, dtype=int)
    poly = Polytope(
        dim=2,
        vertices=ring.copy(),
        facets=[tuple(e) for e in cycle_edges],
        facet_normals=np.asarray(normals),
        triangulation=tri,
        edges=tri.copy(),
        density=density,
    )
    poly.volume_cache = volume(poly)
    return poly


# -- 3D hull ------------------------------------------------------------


def _build_3d(pts: np.ndarray, density: float) -> Polytope:
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise DegenerateInput(f"degenerate 3D input: {exc}") from exc

    old_idx = np.asarray(hull.vertices)
    verts = pts[old_idx]
    order = np.lexsort((verts[:, 2], verts[:, 1], verts[:, 0]))
    verts = verts[order]
    remap = {int(old_idx[order[k]]): k for k in range(len(order))}

    inner = verts.mean(axis=0)
    tris = []
    for simplex in hull.simplices:
        tri = [remap[int(i)] for i in simplex]
        a, b, c = (verts[tri[0]], verts[tri[1]], verts[tri[2]])
        if np.dot(np.cross(b - a, c - a), (a + b + c) / 3.0 - inner) < 0:
            tri = [tri[0], tri[2], tri[1]]
        k = int(np.argmin(tri))
        tris.append(tuple(tri[k:] + tri[:k]))  # rotate cycle, keep orientation
    tris.sort()
    tri_arr = np.asarray(tris, dtype=int)

    normals = np.cross(verts[tri_arr[:, 1]] - verts[tri_arr[:, 0]],
                       verts[tri_arr[:, 2]] - verts[tri_arr[:, 0]])
    norms = np.linalg.norm(normals, axis=1, keepdims=True)
    if np.any(norms[:, 0] <= 0):
        raise DegenerateInput("zero-area hull facet")
    normals = normals / norms

    edges = _true_edges_3d(tri_arr, normals)
    poly = Polytope(
        dim=3,
        vertices=verts,
        facets=[tuple(t) for t in tris],
        facet_normals=normals,
        triangulation=tri_arr,
        edges=edges,
        density=density,
    )
    poly.volume_cache = volume(poly)
    return poly


def _true_edges_3d(tri_arr: np.ndarray, normals: np.ndarray) -> np.ndarray:
    """Edges shared by two non-coplanar facets (face diagonals excluded)."""
    owner = {}
    for f, tri in enumerate(tri_arr):
        for k in range(3):
            e = (int(tri[k]), int(tri[(k + 1) % 3]))
            key = (min(e), max(e))
            owner.setdefault(key, []).append(f)
    edges = []
    for key, facets in sorted(owner.items()):
        if len(facets) != 2:
            continue  # non-manifold edge: skip (cannot arise for hulls)
        n1, n2 = normals[facets[0]], normals[facets[1]]
        if abs(1.0 - float(n1 @ n2)) > 1e-12:
            edges.append(key)
    return np.asarray(edges, dtype=int)


# -- measures ------------------------------------------------------------


def volume(poly: Polytope) -> float:
    """Volume from the triangulated boundary.

    Sums (v . N) |simplex| / dim over boundary simplices, with N the
    outward unit normal and v any vertex of the simplex.
    """
    v = poly.vertices
    tri = poly.triangulation
    if poly.dim == 2:
        a, b = v[tri[:, 0]], v[tri[:, 1]]
        t = b - a
        lengths = np.linalg.norm(t, axis=1)
        normals = np.stack([t[:, 1], -t[:, 0]], axis=1) / lengths[:, None]
        return float(np.sum(np.einsum("ed,ed->e", a, normals) * lengths) / 2.0)
    a, b, c = v[tri[:, 0]], v[tri[:, 1]], v[tri[:, 2]]
    cross = np.cross(b - a, c - a)
    areas = np.linalg.norm(cross, axis=1) / 2.0
    normals = cross / (2.0 * areas[:, None])
    return float(np.sum(np.einsum("td,td->t", a, normals) * areas) / 3.0)


def signed_simplex_volume(poly: Polytope) -> float:
    """Volume by signed cone decomposition from an interior anchor.

    Independent of :func:`volume`; the two must agree to rounding.
    """
    return _cone_decomposition(poly)[0]


def centroid(poly: Polytope) -> np.ndarray:
    """Centroid (1/|P|) int_P x dx via signed simplices from an anchor."""
    return _cone_decomposition(poly)[1]


def _cone_decomposition(poly: Polytope):
    v = poly.vertices
    tri = poly.triangulation
    anchor = poly.interior_point()
    if poly.dim == 2:
        a, b = v[tri[:, 0]] - anchor, v[tri[:, 1]] - anchor
        svol = 0.5 * (a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])
        cents = anchor + (a + b) / 3.0
    else:
        a = v[tri[:, 0]] - anchor
        b = v[tri[:, 1]] - anchor
        c = v[tri[:, 2]] - anchor
        svol = np.einsum("td,td->t", np.cross(a, b), c) / 6.0
        cents = anchor + (a + b + c) / 4.0
    total = float(svol.sum())
    return total, (svol @ cents) / total
