"""Buoyancy-surface sampling and the classical Dupin identities.

The buoyancy surface is the locus of centroids of the submerged caps.
Dupin I: its tangent is parallel to the liquid plane.  Dupin III (2D): its
radius of curvature equals I / (delta |P|), with I the second moment of the
liquid chord about its midpoint, I = L^3 / 12.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clipping import PlaneSpec, clip, make_plane, section, section_second_moment
from .errors import SingularDirection, TooFewSamples
from .flotation import solve_level
from .polytope import Polytope, centroid, volume


@dataclass
class BuoyancySample:
    theta: np.ndarray
    center: np.ndarray
    h: float


def buoyancy_point(poly: Polytope, theta, delta: float) -> BuoyancySample:
    """Centroid of the submerged cap for one direction."""
    lv = solve_level(poly, theta, delta)
    cap = clip(poly, make_plane(lv.theta, lv.h))
    center = centroid(cap.polytope)
    return BuoyancySample(lv.theta, center, lv.h)


def sample_buoyancy(poly: Polytope, delta: float, directions) -> list:
    return [buoyancy_point(poly, th, delta) for th in np.atleast_2d(directions)]


def dupin1_residual(samples) -> float:
    """Tangency defect of the sampled center curve against the liquid planes.

    For samples along a smooth one-parameter sweep, the centered difference
    of neighbouring centers approximates the curve tangent; Dupin I says it
    is orthogonal to theta.  Returns the max of |theta . t| / ||t||.
    """
    if len(samples) < 3:
        raise TooFewSamples("need at least 3 samples for a centered tangent")
    worst = 0.0
    for k in range(1, len(samples) - 1):
        tangent = samples[k + 1].center - samples[k - 1].center
        norm = np.linalg.norm(tangent)
        if norm == 0.0:
            continue
        worst = max(worst, abs(float(samples[k].theta @ tangent)) / norm)
    return worst


def _circumradius(p1, p2, p3) -> float:
    a = np.linalg.norm(p2 - p3)
    b = np.linalg.norm(p1 - p3)
    c = np.linalg.norm(p1 - p2)
    cross = (p2[0] - p1[0]) * (p3[1] - p1[1]) - (p2[1] - p1[1]) * (p3[0] - p1[0])
    if cross == 0.0:
        return np.inf
    return a * b * c / (2.0 * abs(cross))


def _chord_is_singular(poly: Polytope, theta, h: float, tol: float) -> bool:
    t = poly.vertices @ theta
    return bool(np.min(np.abs(t - h)) <= tol)


def dupin3_check_2d(poly: Polytope, delta: float, theta,
                    step: float = 2e-2) -> tuple:
    """Radius of curvature of the buoyancy curve vs the chord formula.

    R_curve comes from the circumcircle of three nearby samples with
    Richardson extrapolation over step sizes s and s/2; R_formula is
    L^3 / (12 delta |P|) with L the liquid chord length.  Raises
    SingularDirection when the chord passes through a vertex (the curve
    has a corner there and the finite differences straddle two arcs).
    """
    if poly.dim != 2:
        raise ValueError("dupin3_check_2d needs a polygon")
    theta = np.asarray(theta, dtype=float)
    theta = theta / np.linalg.norm(theta)
    lv = solve_level(poly, theta, delta)
    sing_tol = 1e-7 * poly.diameter()
    if _chord_is_singular(poly, theta, lv.h, sing_tol):
        raise SingularDirection("liquid chord passes through a vertex")

    phi0 = float(np.arctan2(theta[1], theta[0]))

    def center_at(phi):
        th = np.array([np.cos(phi), np.sin(phi)])
        lvl = solve_level(poly, th, delta)
        if _chord_is_singular(poly, th, lvl.h, sing_tol):
            raise SingularDirection("finite-difference window crosses a vertex")
        cap = clip(poly, make_plane(th, lvl.h))
        return centroid(cap.polytope)

    def radius(s):
        return _circumradius(center_at(phi0 - s), center_at(phi0),
                             center_at(phi0 + s))

    r1, r2 = radius(step), radius(step / 2.0)
    r_curve = (4.0 * r2 - r1) / 3.0

    sec = section(poly, make_plane(theta, lv.h))
    chord_len = sec.area
    r_formula = chord_len ** 3 / (12.0 * delta * volume(poly))
    return float(r_curve), float(r_formula)


def moment_identity_check(poly: Polytope, theta, delta: float, a) -> tuple:
    """Quadratic-form expansion of the section's second moment.

    For a line through the section centroid (c = -a . g forced), the direct
    integral of squared distance must equal sum_ij a_i a_j M_ij - c^2 |S|
    with M the raw frame moments.  Both sides are returned; they are
    computed by independent integration routes.
    """
    theta = np.asarray(theta, dtype=float)
    theta = theta / np.linalg.norm(theta)
    lv = solve_level(poly, theta, delta)
    sec = section(poly, make_plane(theta, lv.h))
    a = np.asarray(a, dtype=float)
    a = a / np.linalg.norm(a)
    c = -float(a @ sec.centroid)
    sub = PlaneSpec(theta, lv.h, a=a, c=c)
    lhs = section_second_moment(sec, sub)
    rhs = float(a @ sec.second_moment @ a - c * c * sec.area)
    return lhs, rhs
