"""Decomposition of a polygon's flotation curve into hyperbolic arcs.

While the liquid chord crosses a fixed pair of non-parallel sides it cuts a
triangle of constant area at the apex where the two side lines meet, so its
envelope is a hyperbola with those lines as asymptotes.  When the chord
crosses a pair of parallel sides, all chords of the family concur at one
point: the curve degenerates to a corner point swept by a pencil of lines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geom2d
from .errors import OutOfRange, UnboundedRegion
from .flotation import FlotationSurface
from .polytope import Polytope

_TWO_PI = 2.0 * np.pi


@dataclass
class HyperbolicArc:
    """One hyperbolic piece of the flotation curve.

    `side_pair` are the indices of the polygon sides cut by the chords,
    aligned with (`dir_i`, `dir_j`): unit directions from the apex (the
    side lines' intersection) toward the chord crossings.  `area_const` is
    the apex triangle area, constant along the arc.  In shear-normalized
    apex coordinates the arc satisfies u * w = area_const / 2.
    """

    side_pair: tuple
    apex: np.ndarray
    dir_i: np.ndarray
    dir_j: np.ndarray
    area_const: float
    angle_range: tuple

    def asymptotes(self) -> list:
        return [(self.apex, self.dir_i), (self.apex, self.dir_j)]

    def apex_coordinates(self, point: np.ndarray) -> np.ndarray:
        """Coordinates (u, w) of a point in the (dir_i, dir_j) apex basis,

        scaled so the basis parallelogram has unit area (shear-normalized).
        """
        basis = np.stack([self.dir_i, self.dir_j], axis=1)
        uw = np.linalg.solve(basis, point - self.apex)
        return uw * np.sqrt(abs(np.linalg.det(basis)))


@dataclass
class CornerPoint:
    """Envelope point swept by a pencil of chords through parallel sides."""

    point: np.ndarray
    pencil_range: tuple
    parallel_side_pair: tuple


@dataclass
class ArcDecomposition:
    arcs: list
    corners: list
    delta: float
    scale: float
    degenerate: bool = False

    def elements_in_order(self) -> list:
        return sorted(self.arcs + self.corners,
                      key=lambda e: _range_of(e)[0])


def _range_of(element):
    return (element.angle_range if isinstance(element, HyperbolicArc)
            else element.pencil_range)


def _theta(phi):
    return np.array([np.cos(phi), np.sin(phi)])


def _bisect_set_changes(levels_fn, brackets, angle_tol):
    """Refine change-of-edge-set brackets to `angle_tol`, batching all
    midpoint evaluations of a round into one solver call.

    A bracket is [phi_lo, set_lo, phi_hi, set_hi]; when the midpoint shows
    a third edge set, the bracket splits (two crossings inside).  Returns
    the sorted refined angles.
    """
    done = []
    while brackets:
        mids = np.array([0.5 * (b[0] + b[2]) for b in brackets])
        thetas = np.stack([np.cos(mids), np.sin(mids)], axis=1)
        _, _, mid_sets = levels_fn(thetas)
        nxt = []
        for (lo, slo, hi, shi), mid, sm in zip(brackets, mids, mid_sets):
            pieces = []
            if sm == slo:
                pieces.append([mid, slo, hi, shi])
            elif sm == shi:
                pieces.append([lo, slo, mid, sm])
            else:
                pieces.append([lo, slo, mid, sm])
                pieces.append([mid, sm, hi, shi])
            for p in pieces:
                if p[2] - p[0] > angle_tol:
                    nxt.append(p)
                else:
                    done.append(0.5 * (p[0] + p[2]))
        brackets = nxt
    return sorted(done)


def _chord_line(surface: FlotationSurface, phi: float):
    th = _theta(phi)
    h = surface.level(th).h
    return h * th, np.array([-th[1], th[0]])


def decompose_flotation_2d(poly: Polytope, delta: float,
                           steps: int | None = None,
                           angle_tol: float = 1e-12) -> ArcDecomposition:
    """Full sweep of chord normals, split where the crossed side pair changes.

    The side pair changes exactly when the chord passes through a vertex;
    each change is bisected to `angle_tol`.  Intervals with non-parallel
    sides become hyperbolic arcs, parallel ones become corner points.
    """
    if poly.dim != 2:
        raise ValueError("decompose_flotation_2d needs a polygon")
    surface = FlotationSurface(poly, delta)
    n = poly.n_vertices
    steps = steps or max(720, 64 * n)
    dphi = _TWO_PI / steps
    offset = 0.1234567891 * dphi  # avoid starting exactly on a vertex normal
    phis = offset + dphi * np.arange(steps)
    _, _, sets = surface.levels(np.stack([np.cos(phis), np.sin(phis)], axis=1))

    brackets = [[phis[k], sets[k], phis[k] + dphi, sets[(k + 1) % steps]]
                for k in range(steps) if sets[k] != sets[(k + 1) % steps]]
    boundaries = _bisect_set_changes(surface.levels, brackets, angle_tol)
    if not boundaries:
        raise UnboundedRegion("no side-pair transitions found (not a polygon?)")

    diam = poly.diameter()
    arcs, corners, contacts = [], [], []
    for k in range(len(boundaries)):
        phi1 = boundaries[k]
        phi2 = boundaries[(k + 1) % len(boundaries)]
        if phi2 <= phi1:
            phi2 += _TWO_PI
        if phi2 - phi1 <= 4.0 * angle_tol:
            continue  # collapsed interval (vertex chords at density 1/2)
        mid = 0.5 * (phi1 + phi2)
        h, endpoints, ids = surface.chord(_theta(mid))
        if len(ids) != 2:
            continue
        i, j = int(ids[0]), int(ids[1])
        di = poly.vertices[(i + 1) % n] - poly.vertices[i]
        dj = poly.vertices[(j + 1) % n] - poly.vertices[j]
        contacts.append(endpoints.mean(axis=0))
        if abs(np.cross(di, dj)) <= 1e-12 * np.linalg.norm(di) * np.linalg.norm(dj):
            w = (phi2 - phi1) * 0.25
            p1, u1 = _chord_line(surface, mid - w)
            p2, u2 = _chord_line(surface, mid + w)
            point = geom2d.line_intersection(p1, u1, p2, u2)
            corners.append(CornerPoint(point, (phi1, phi2),
                                       (min(i, j), max(i, j))))
        else:
            apex = geom2d.line_intersection(poly.vertices[i], di,
                                            poly.vertices[j], dj)
            q_i, q_j = endpoints[0], endpoints[1]
            dir_i = (q_i - apex) / np.linalg.norm(q_i - apex)
            dir_j = (q_j - apex) / np.linalg.norm(q_j - apex)
            area = 0.5 * abs(np.cross(q_i - apex, q_j - apex))
            arcs.append(HyperbolicArc((i, j), apex, dir_i, dir_j, area,
                                      (phi1, phi2)))

    degenerate = False
    if contacts and abs(delta - 0.5) < 1e-12:
        spread = np.max(np.linalg.norm(np.asarray(contacts)
                                       - np.mean(contacts, axis=0), axis=1))
        if not arcs and spread <= 1e-9 * diam:
            degenerate = True
    return ArcDecomposition(arcs, corners, delta, diam, degenerate)


def eval_arc(arc: HyperbolicArc, phi: float) -> np.ndarray:
    """Envelope point of the arc at chord-normal angle phi.

    The chord at angle phi meets the asymptote rays at apex distances u and
    w with u * w fixed by the constant triangle area; the envelope point is
    the chord midpoint.
    """
    phi1, phi2 = arc.angle_range
    t = (phi - phi1) % _TWO_PI
    width = phi2 - phi1
    slack = 1e-9
    if t > width:
        if t - width <= slack:
            t = width
        elif t >= _TWO_PI - slack:
            t = 0.0
        else:
            raise OutOfRange(f"phi={phi} outside angle range {arc.angle_range}")
    th = _theta(phi1 + t)
    di_th, dj_th = float(arc.dir_i @ th), float(arc.dir_j @ th)
    if di_th * dj_th <= 0:
        raise OutOfRange("chord normal incompatible with the arc quadrant")
    cross = abs(np.cross(arc.dir_i, arc.dir_j))
    uw = 2.0 * arc.area_const / cross
    rho = di_th / dj_th
    u = np.sqrt(uw / rho)
    w = np.sqrt(uw * rho)
    return arc.apex + 0.5 * (u * arc.dir_i + w * arc.dir_j)


def compute_W(dec: ArcDecomposition) -> np.ndarray:
    """Intersection of the arcs' asymptote quarter-planes (a convex polygon).

    Each arc lies in the quadrant spanned by its asymptote rays; the body
    is contained in the intersection W of these quadrants, and shares
    boundary segments with it.
    """
    if not dec.arcs:
        raise UnboundedRegion("decomposition has no hyperbolic arcs")
    anchors = [a.apex for a in dec.arcs] + [c.point for c in dec.corners]
    center = np.mean(anchors, axis=0)
    radius = 20.0 * max(dec.scale, 1e-9)
    ring = center + radius * np.array([[-1.0, -1.0], [1.0, -1.0],
                                       [1.0, 1.0], [-1.0, 1.0]])
    for arc in dec.arcs:
        for d_line, d_other in ((arc.dir_i, arc.dir_j), (arc.dir_j, arc.dir_i)):
            inward = d_other - (d_other @ d_line) * d_line
            inward = inward / np.linalg.norm(inward)
            # keep {x : inward . x >= inward . apex}
            ring = geom2d.halfplane_clip(ring, -inward, -float(inward @ arc.apex))
            if len(ring) < 3:
                raise UnboundedRegion("asymptote half-planes have empty interior")
    if np.max(np.abs(ring - center)) >= 0.99 * radius:
        raise UnboundedRegion("asymptotes do not bound the region")
    return geom2d.dedupe_ring(ring, 1e-12 * max(dec.scale, 1.0))
