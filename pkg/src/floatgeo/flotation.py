"""Liquid levels, flotation-surface sampling and the singular set.

For a unit direction theta and density delta in (0, 1), the liquid level is
the unique offset h with |P ∩ {x . theta >= h}| = delta |P|.  The cap
volume V(h) is continuous and strictly decreasing on the support interval,
so the solver brackets by bisection and polishes with Newton steps using
the analytic derivative dV/dh = -area(section), falling back to bisection
whenever a Newton step leaves the bracket.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clipping import cap_volumes, make_plane, section, section_areas
from .errors import DegenerateCluster, InsufficientData, NoConvergence
from .polytope import Polytope, volume

_RESIDUAL_BOUND = 1e-12  # relative residual contract of LiquidLevel


@dataclass
class LiquidLevel:
    """Solved liquid level for one direction."""

    theta: np.ndarray
    h: float
    residual: float
    edge_set: tuple

    def __post_init__(self):
        if self.residual > _RESIDUAL_BOUND:
            raise NoConvergence(
                f"residual {self.residual:.3e} exceeds {_RESIDUAL_BOUND}")


@dataclass
class FlotationSample:
    """Flotation-surface sample: the liquid plane touches the surface at
    the centroid of the plane section (Second Theorem of Dupin)."""

    theta: np.ndarray
    h: float
    contact: np.ndarray
    edge_set: tuple
    residual: float = 0.0


@dataclass
class Crossing:
    """Direction at which the liquid plane passes through a vertex."""

    theta: np.ndarray
    h: float
    phi: float
    before: frozenset
    after: frozenset

    @property
    def flip_key(self) -> frozenset:
        # edges incident to the crossed vertex all change straddling state
        return self.before.symmetric_difference(self.after)


@dataclass
class VertexGroup:
    point: np.ndarray | None
    crossings: list
    residual: float
    degenerate: bool = False


@dataclass
class SingularSet:
    crossings: list
    groups: list = field(default_factory=list)


# -- solver ----------------------------------------------------------------


def solve_levels_array(poly: Polytope, thetas: np.ndarray, delta: float,
                       n_bisect: int = 25, n_newton: int = 32):
    """Vectorized level solve; returns (h, residual) arrays.

    The same code path serves single directions and sweeps, so serial and
    batched sampling produce identical numbers.
    """
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must lie strictly in (0, 1)")
    thetas = np.atleast_2d(np.asarray(thetas, dtype=float))
    total = poly.volume_cache or volume(poly)
    target = delta * total
    t = poly.vertices @ thetas.T
    lo = t.min(axis=0).astype(float)
    hi = t.max(axis=0).astype(float)

    for _ in range(n_bisect):
        mid = 0.5 * (lo + hi)
        v = cap_volumes(poly, thetas, mid)
        above = v > target
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)

    h = 0.5 * (lo + hi)
    f = cap_volumes(poly, thetas, h) - target
    tol = 1e-15 * total
    for _ in range(n_newton):
        if np.all(np.abs(f) <= tol):
            break
        lo = np.where(f > 0, h, lo)
        hi = np.where(f > 0, hi, h)
        area = section_areas(poly, thetas, h)
        step = np.where(area > 0, f / np.where(area > 0, area, 1.0), np.nan)
        h_new = np.clip(h + step, lo, hi)  # clamp: steps may overshoot by 1 ulp
        stalled = ~np.isfinite(h_new) | (h_new == h)
        h = np.where(stalled, 0.5 * (lo + hi), h_new)
        f = cap_volumes(poly, thetas, h) - target
    residual = np.abs(f) / total
    return h, residual


def edge_sets(poly: Polytope, thetas: np.ndarray, h: np.ndarray) -> list:
    """Indices of true edges strictly straddled by each plane."""
    thetas = np.atleast_2d(thetas)
    h = np.atleast_1d(h)
    t = poly.vertices @ thetas.T
    e = poly.edges
    straddle = (t[e[:, 0]] - h) * (t[e[:, 1]] - h) < 0
    return [tuple(np.nonzero(straddle[:, k])[0]) for k in range(len(h))]


def solve_level(poly: Polytope, theta, delta: float) -> LiquidLevel:
    """Liquid level for a single direction."""
    theta = np.asarray(theta, dtype=float)
    theta = theta / np.linalg.norm(theta)
    h, res = solve_levels_array(poly, theta[None, :], delta)
    es = edge_sets(poly, theta[None, :], h)[0]
    return LiquidLevel(theta, float(h[0]), float(res[0]), es)


class FlotationSurface:
    """Flotation-surface access for a fixed (polytope, density) pair.

    Reconstruction-style consumers only query levels, contacts and chords;
    they never read the polytope's vertex list through this interface.
    """

    def __init__(self, poly: Polytope, delta: float):
        self._poly = poly
        self.delta = float(delta)
        self.dim = poly.dim
        self.scale = poly.diameter()

    def level(self, theta) -> LiquidLevel:
        return solve_level(self._poly, theta, self.delta)

    def levels(self, thetas):
        h, res = solve_levels_array(self._poly, thetas, self.delta)
        return h, res, edge_sets(self._poly, thetas, h)

    def height(self, theta) -> float:
        return self.level(theta).h

    def contact(self, theta) -> np.ndarray:
        lv = self.level(theta)
        sec = section(self._poly, make_plane(lv.theta, lv.h))
        return sec.centroid_ambient

    def chord(self, theta):
        """2D helper: (h, endpoints (2,2), side indices (2,)) of the chord."""
        if self.dim != 2:
            raise ValueError("chord() is only defined for polygons")
        lv = self.level(theta)
        t = self._poly.vertices @ lv.theta
        e = self._poly.edges
        y = t - lv.h
        mask = y[e[:, 0]] * y[e[:, 1]] < 0
        idx = np.nonzero(mask)[0]
        va = self._poly.vertices[e[idx, 0]]
        vb = self._poly.vertices[e[idx, 1]]
        s = (y[e[idx, 0]] / (y[e[idx, 0]] - y[e[idx, 1]]))[:, None]
        return lv.h, va + s * (vb - va), idx


def contact_point(poly: Polytope, theta, delta: float) -> FlotationSample:
    """Flotation sample: contact is the section centroid at the solved level."""
    lv = solve_level(poly, theta, delta)
    sec = section(poly, make_plane(lv.theta, lv.h))
    return FlotationSample(lv.theta, lv.h, sec.centroid_ambient, lv.edge_set,
                           lv.residual)


def sample_flotation(poly: Polytope, delta: float, directions) -> list:
    """One FlotationSample per direction, input order preserved."""
    thetas = np.atleast_2d(np.asarray(directions, dtype=float))
    thetas = thetas / np.linalg.norm(thetas, axis=1, keepdims=True)
    h, residual = solve_levels_array(poly, thetas, delta)
    sets = edge_sets(poly, thetas, h)
    out = []
    for k in range(len(thetas)):
        if residual[k] > _RESIDUAL_BOUND:
            raise NoConvergence(f"direction {k}: residual {residual[k]:.3e}")
        sec = section(poly, make_plane(thetas[k], float(h[k])))
        out.append(FlotationSample(thetas[k], float(h[k]),
                                   sec.centroid_ambient, sets[k],
                                   float(residual[k])))
    return out


def antisymmetry_defect(poly: Polytope, delta: float, directions) -> float:
    """max over theta of |h(theta) + h(-theta)|.

    Zero exactly at density 1/2; the direction list must be closed under
    negation.
    """
    thetas = np.atleast_2d(np.asarray(directions, dtype=float))
    thetas = thetas / np.linalg.norm(thetas, axis=1, keepdims=True)
    h, _ = solve_levels_array(poly, thetas, delta)
    gram = thetas @ thetas.T
    partner = np.argmin(gram, axis=1)
    if np.any(gram[np.arange(len(thetas)), partner] > -1.0 + 1e-9):
        raise ValueError("direction list is not closed under negation")
    return float(np.max(np.abs(h + h[partner])))


# -- singular set -----------------------------------------------------------


@dataclass
class CirclePath:
    """Arc of the great circle phi -> cos(phi) u + sin(phi) w."""

    u: np.ndarray
    w: np.ndarray
    phi_start: float = 0.0
    phi_end: float = 2.0 * np.pi

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        self.w = np.asarray(self.w, dtype=float)
        self.u = self.u / np.linalg.norm(self.u)
        self.w = self.w - (self.w @ self.u) * self.u
        self.w = self.w / np.linalg.norm(self.w)

    def theta(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.cos(phi)[..., None] * self.u + np.sin(phi)[..., None] * self.w


def full_circle_2d() -> CirclePath:
    return CirclePath(np.array([1.0, 0.0]), np.array([0.0, 1.0]))


def default_circle_family(dim: int, circles_per_axis: int = 6) -> list:
    """Meridian pencils of great circles about three orthogonal axes.

    The axes come from a fixed generic rotation: axis-aligned circles can
    stay parallel to an edge of an axis-aligned polytope for a whole
    revolution, which would merge the crossings of the edge's two vertices
    into one rank-deficient cluster.
    """
    if dim == 2:
        return [full_circle_2d()]
    # deterministic generic frame (rotation by fixed irrational-ish angles)
    u0 = np.array([0.28735694, 0.60342418, 0.74380353])
    u0 /= np.linalg.norm(u0)
    v0 = np.array([-0.81616459, 0.55015357, -0.14296465])
    v0 -= (v0 @ u0) * u0
    v0 /= np.linalg.norm(v0)
    w0 = np.cross(u0, v0)
    frame = [u0, v0, w0]
    family = []
    for axis in range(3):
        u = frame[axis]
        a, b = frame[(axis + 1) % 3], frame[(axis + 2) % 3]
        for j in range(circles_per_axis):
            alpha = np.pi * (j + 0.318309886) / circles_per_axis
            family.append(CirclePath(u, np.cos(alpha) * a + np.sin(alpha) * b))
    return family


def detect_singular_directions(poly: Polytope, delta: float, path: CirclePath,
                               steps: int = 256,
                               angle_tol: float = 1e-10) -> list:
    """Crossings of the singular set along a great-circle path.

    Walks the path, watches the set of edges straddled by the liquid plane
    (it changes exactly when the plane crosses a vertex) and bisects every
    change down to `angle_tol` in angle.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    surface = FlotationSurface(poly, delta)
    phis = np.linspace(path.phi_start, path.phi_end, steps)
    _, _, sets = surface.levels(path.theta(phis))

    brackets = [[phis[k], sets[k], phis[k + 1], sets[k + 1]]
                for k in range(len(phis) - 1) if sets[k] != sets[k + 1]]
    done = []
    while brackets:
        mids = np.array([0.5 * (b[0] + b[2]) for b in brackets])
        _, _, mid_sets = surface.levels(path.theta(mids))
        nxt = []
        for (lo, slo, hi, shi), mid, sm in zip(brackets, mids, mid_sets):
            pieces = []
            if sm == slo:
                pieces.append([mid, slo, hi, shi])
            elif sm == shi:
                pieces.append([lo, slo, mid, sm])
            else:  # two crossings inside this bracket: split it
                pieces.append([lo, slo, mid, sm])
                pieces.append([mid, sm, hi, shi])
            for p in pieces:
                if p[2] - p[0] > angle_tol:
                    nxt.append(p)
                else:
                    done.append((0.5 * (p[0] + p[2]), p[1], p[3]))
        brackets = nxt
    if not done:
        return []
    done.sort(key=lambda d: d[0])
    cross_phis = np.array([d[0] for d in done])
    cross_thetas = path.theta(cross_phis)
    h, _, _ = surface.levels(cross_thetas)
    return [Crossing(cross_thetas[k], float(h[k]), float(cross_phis[k]),
                     frozenset(done[k][1]), frozenset(done[k][2]))
            for k in range(len(done))]


def recover_vertices(surface: FlotationSurface, crossings, strict: bool = True,
                     fit_tol: float = 1e-7) -> SingularSet:
    """Vertex estimates from singular-set crossings.

    Crossings are grouped by the set of edges whose straddling state flips
    (all edges incident to the crossed vertex flip together, so the flip
    set identifies the vertex combinatorially).  Each group's planes
    {x . theta_k = h_k} are solved for their common point by least squares.
    Groups whose normal matrix is rank deficient are the density-1/2
    cylinder case: the planes share a line, not a point.
    """
    dim = surface.dim
    scale = max(surface.scale, 1e-30)
    buckets: dict = {}
    for c in crossings:
        buckets.setdefault(c.flip_key, []).append(c)

    groups = []
    n_degenerate = 0
    for key in sorted(buckets, key=lambda k: tuple(sorted(k))):
        members = buckets[key]
        if len(members) < dim:
            if strict:
                raise InsufficientData(
                    f"cluster {tuple(sorted(key))} has {len(members)} < {dim} planes")
            groups.append(VertexGroup(None, members, np.inf))
            continue
        thetas = np.array([c.theta for c in members])
        hs = np.array([c.h for c in members])
        normal = thetas.T @ thetas
        rhs = thetas.T @ hs
        eigvals = np.linalg.eigvalsh(normal)
        if eigvals[0] <= 1e-8 * eigvals[-1]:
            n_degenerate += 1
            groups.append(VertexGroup(None, members, np.inf, degenerate=True))
            continue
        v = np.linalg.solve(normal, rhs)
        residual = float(np.max(np.abs(thetas @ v - hs)))
        if residual > fit_tol * scale and strict:
            raise InsufficientData(
                f"cluster {tuple(sorted(key))} fit residual {residual:.3e}")
        groups.append(VertexGroup(v, members, residual))

    result = SingularSet(list(crossings), groups)
    if n_degenerate and strict:
        raise DegenerateCluster(
            f"{n_degenerate} cluster(s) rank-deficient: planes meet in a "
            "line, not a point (density 1/2)", groups=groups)
    return result


def recovered_points(singular: SingularSet) -> np.ndarray:
    pts = [g.point for g in singular.groups if g.point is not None]
    return np.asarray(pts) if pts else np.zeros((0, 0))
