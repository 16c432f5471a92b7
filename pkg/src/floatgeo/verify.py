"""Named verification suite aggregating the package's residual checks.

One check per geometric identity, each with a pinned tolerance; the CLI
`verify` command runs the applicable subset and reports residuals.  All
checks produce numbers, never assertions: the caller decides what to do
with a failure.
"""

from __future__ import annotations

import numpy as np

from .buoyancy import (buoyancy_point, dupin1_residual, dupin3_check_2d,
                       moment_identity_check, sample_buoyancy)
from .clipping import clip, make_plane, section, section_frame
from .errors import SingularDirection
from .flotation import (FlotationSurface, sample_flotation, solve_level,
                        solve_levels_array, antisymmetry_defect)
from .montecarlo import mc_volume
from .polytope import Polytope, centroid, signed_simplex_volume, volume

TOLERANCES = {
    "cap_volume": 1e-12,            # relative to |P|
    "dupin1": 1e-4,                 # tangency defect of the center curve
    "dupin2": 1e-5,                 # x diameter
    "dupin3": 1e-2,                 # relative radius error (2D)
    "hyperbola_uw": 1e-9,           # relative spread of u*w along arcs (2D)
    "antisymmetry_half": 1e-11,     # defect at density 1/2
    "moment_identity": 1e-12,       # relative
    "centroid_split": 1e-10,        # relative weighted-centroid defect
    "volume_routes": 1e-12,         # relative, boundary vs cone volume
    "mc_volume_sigma": 3.0,         # sigmas
}


def _sphere_points(dim: int, n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((n, dim))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _check(name, residual, tolerance, note=""):
    passed = bool(residual <= tolerance)
    return {"name": name, "residual": float(residual),
            "tolerance": float(tolerance), "passed": passed, "note": note}


def _spherical_gradient(surface: FlotationSurface, theta, step=1e-4):
    frame = section_frame(theta)
    grad = np.zeros(len(theta))
    for col in range(frame.shape[1]):
        u = frame[:, col]
        hp = surface.height(np.cos(step) * theta + np.sin(step) * u)
        hm = surface.height(np.cos(step) * theta - np.sin(step) * u)
        grad = grad + (hp - hm) / (2.0 * step) * u
    return grad


def dupin2_residual(poly: Polytope, delta: float, thetas,
                    step: float = 1e-4) -> float:
    """max over directions of ||grad_S h + h theta - section centroid||."""
    surface = FlotationSurface(poly, delta)
    worst = 0.0
    for theta in np.atleast_2d(thetas):
        lv = solve_level(poly, theta, delta)
        sec = section(poly, make_plane(lv.theta, lv.h))
        grad = _spherical_gradient(surface, lv.theta, step)
        recon = grad + lv.h * lv.theta
        worst = max(worst, float(np.linalg.norm(recon - sec.centroid_ambient)))
    return worst


def _nonsingular_dirs(poly: Polytope, delta: float, n: int, seed: int,
                      margin: float = 1e-3) -> np.ndarray:
    """Random directions whose liquid plane stays clear of all vertices."""
    out = []
    attempt = 0
    diam = poly.diameter()
    while len(out) < n and attempt < 50 * n + 100:
        attempt += 1
        th = _sphere_points(poly.dim, 1, seed + attempt)[0]
        lv = solve_level(poly, th, delta)
        t = poly.vertices @ lv.theta
        if np.min(np.abs(t - lv.h)) > margin * diam:
            out.append(lv.theta)
    return np.asarray(out)


def run_verification(poly: Polytope, delta: float, seed: int = 0,
                     n_directions: int = 100, mc_samples: int = 100_000) -> dict:
    """Run every applicable identity check; returns the residual report."""
    checks = []
    total = volume(poly)
    diam = poly.diameter()

    # solver contract: cap volumes hit delta |P|
    thetas = _sphere_points(poly.dim, n_directions, seed)
    h, residual = solve_levels_array(poly, thetas, delta)
    checks.append(_check("cap_volume", float(residual.max()),
                         TOLERANCES["cap_volume"],
                         f"{n_directions} random directions"))

    # clip-volume route agrees with the batch evaluator
    worst = 0.0
    for k in range(0, len(thetas), max(1, len(thetas) // 10)):
        cap = clip(poly, make_plane(thetas[k], float(h[k])))
        worst = max(worst, abs(volume(cap.polytope) - delta * total) / total)
    checks.append(_check("cap_volume_clip", worst, TOLERANCES["cap_volume"],
                         "rebuilt-cap volumes"))

    checks.append(_check(
        "volume_routes",
        abs(volume(poly) - signed_simplex_volume(poly)) / total,
        TOLERANCES["volume_routes"], "boundary formula vs cone decomposition"))

    dirs = _nonsingular_dirs(poly, delta, min(n_directions, 40), seed + 1)
    checks.append(_check("dupin2", dupin2_residual(poly, delta, dirs) / diam,
                         TOLERANCES["dupin2"],
                         f"{len(dirs)} non-singular directions, x diameter"))

    # Dupin I along a sweep
    if poly.dim == 2:
        phis = np.linspace(0.0, 2.0 * np.pi, 721)
        sweep = np.stack([np.cos(phis), np.sin(phis)], axis=1)
    else:
        phis = np.linspace(0.0, 2.0 * np.pi, 721)
        axis = _sphere_points(3, 2, seed + 2)
        u = axis[0]
        w = axis[1] - (axis[1] @ u) * u
        w /= np.linalg.norm(w)
        sweep = np.cos(phis)[:, None] * u + np.sin(phis)[:, None] * w
    samples = sample_buoyancy(poly, delta, sweep)
    checks.append(_check("dupin1", dupin1_residual(samples),
                         TOLERANCES["dupin1"], "720-step sweep"))

    # interiority of buoyancy centers
    centers = np.array([s.center for s in samples])
    inside = poly.contains(centers)
    checks.append(_check("buoyancy_interior", 0.0 if inside.all() else 1.0,
                         0.5, "all centers inside the body"))

    if poly.dim == 2:
        worst = 0.0
        count = 0
        rng = np.random.default_rng(seed + 3)
        while count < 12:
            phi = rng.uniform(0.0, 2.0 * np.pi)
            try:
                r_curve, r_formula = dupin3_check_2d(
                    poly, delta, np.array([np.cos(phi), np.sin(phi)]))
            except SingularDirection:
                continue
            worst = max(worst, abs(r_curve - r_formula) / r_formula)
            count += 1
        checks.append(_check("dupin3", worst, TOLERANCES["dupin3"],
                             "12 non-singular angles"))

        from .arcs import decompose_flotation_2d, eval_arc
        dec = decompose_flotation_2d(poly, delta)
        worst = 0.0
        for arc in dec.arcs:
            phi1, phi2 = arc.angle_range
            pad = 1e-6 * (phi2 - phi1)
            for phi in np.linspace(phi1 + pad, phi2 - pad, 16):
                uw = arc.apex_coordinates(eval_arc(arc, phi))
                worst = max(worst, abs(uw[0] * uw[1] - arc.area_const / 2.0)
                            / (arc.area_const / 2.0))
        checks.append(_check("hyperbola_uw", worst, TOLERANCES["hyperbola_uw"],
                             f"{len(dec.arcs)} arcs"))

    neg = np.vstack([thetas[:36], -thetas[:36]])
    checks.append(_check("antisymmetry_half",
                         antisymmetry_defect(poly, 0.5, neg),
                         TOLERANCES["antisymmetry_half"], "density 1/2"))

    # moment identity on random section lines
    rng = np.random.default_rng(seed + 4)
    worst = 0.0
    for _ in range(20):
        th = _sphere_points(poly.dim, 1, rng.integers(1 << 31))[0]
        a = rng.standard_normal(poly.dim - 1)
        a /= np.linalg.norm(a)
        lhs, rhs = moment_identity_check(poly, th, delta, a)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), 1e-300))
    checks.append(_check("moment_identity", worst,
                         TOLERANCES["moment_identity"], "20 random lines"))

    # weighted centroid split across the liquid plane
    worst = 0.0
    g_total = centroid(poly)
    for k in range(0, len(thetas), max(1, len(thetas) // 10)):
        plane = make_plane(thetas[k], float(h[k]))
        cap = clip(poly, plane)
        rest = clip(poly, make_plane(-thetas[k], -float(h[k])))
        vc, vr = volume(cap.polytope), volume(rest.polytope)
        lhs = total * g_total
        rhs = vc * centroid(cap.polytope) + vr * centroid(rest.polytope)
        worst = max(worst, float(np.linalg.norm(lhs - rhs))
                    / (total * diam))
    checks.append(_check("centroid_split", worst,
                         TOLERANCES["centroid_split"],
                         "|P| g(P) = |cap| g(cap) + |rest| g(rest)"))

    est, err = mc_volume(poly, mc_samples, seed + 5)
    sigmas = abs(est - total) / err if err > 0 else np.inf
    checks.append(_check("mc_volume", sigmas, TOLERANCES["mc_volume_sigma"],
                         f"n={mc_samples}, residual in sigmas"))

    buoy = buoyancy_point(poly, thetas[0], delta)
    strictly_submerged = float(buoy.center @ buoy.theta) > buoy.h
    checks.append(_check("buoyancy_submerged_side",
                         0.0 if strictly_submerged else 1.0, 0.5,
                         "center strictly on the submerged side"))

    return {
        "delta": float(delta),
        "dim": poly.dim,
        "seed": int(seed),
        "checks": checks,
        "all_passed": all(c["passed"] for c in checks),
    }
