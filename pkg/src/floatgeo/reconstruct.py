"""Polygon reconstruction from the flotation curve, and the half-density
counterexample.

For density != 1/2 the decomposition determines the polygon: every side
that bounds a hyperbolic arc is an asymptote line, and a side consumed by a
corner-point pencil is the mirror image, through the corner point, of the
parallel side retained by the flanking arcs (the corner point is always
equidistant from the two parallel side lines).  Intersecting the inner
half-planes of all recovered lines returns the polygon.

At density exactly 1/2 this fails, and must: two distinct polygons can
share their flotation curve.  `make_counterexample` builds such a pair by
grafting a pair of point-symmetric wedges onto a polygon with a parallel
pair of equal-length sides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geom2d
from .arcs import ArcDecomposition, compute_W, decompose_flotation_2d
from .errors import (ChaseNonTermination, CoincidentChords, ConvexityLoss,
                     HalfDensity, NoParallelPair)
from .flotation import FlotationSurface, solve_level, solve_levels_array
from .polytope import Polytope, build_polytope

_TWO_PI = 2.0 * np.pi


@dataclass
class FlotationChord:
    theta: np.ndarray
    h: float
    endpoints: np.ndarray


@dataclass
class ReconstructionReport:
    polygon: Polytope
    recovered_from_W: list
    chased_segments: list
    hausdorff_to_truth: float | None
    status: str


# -- chords through a boundary point ----------------------------------------


def chords_through_point(surface: FlotationSurface | Polytope, x,
                         delta: float | None = None) -> tuple:
    """The two liquid chords through a point outside the flotation curve.

    Solves x . theta = h(theta) over the circle of normals.  For density
    1/2 the roots pair up antipodally into a single geometric line and
    CoincidentChords is raised.
    """
    if isinstance(surface, Polytope):
        surface = FlotationSurface(surface, delta)
    x = np.asarray(x, dtype=float)
    grid = 720
    phis = np.linspace(0.0, _TWO_PI, grid, endpoint=False)
    thetas = np.stack([np.cos(phis), np.sin(phis)], axis=1)
    h, _ = solve_levels_array(surface._poly, thetas, surface.delta)
    f = thetas @ x - h

    def f_at(phi):
        th = np.array([np.cos(phi), np.sin(phi)])
        return float(x @ th - surface.height(th))

    roots = []
    for k in range(grid):
        k2 = (k + 1) % grid
        if f[k] == 0.0:
            roots.append(phis[k])
            continue
        if f[k] * f[k2] < 0:
            a, b = phis[k], phis[k] + _TWO_PI / grid
            fa = f[k]
            while b - a > 1e-13:
                m = 0.5 * (a + b)
                fm = f_at(m)
                if fa * fm <= 0:
                    b = m
                else:
                    a, fa = m, fm
            roots.append(0.5 * (a + b))

    lines = []
    for phi in roots:
        th = np.array([np.cos(phi), np.sin(phi)])
        hh = surface.height(th)
        for existing in lines:
            th2, h2 = existing
            if (np.linalg.norm(th - th2) < 1e-6 and abs(hh - h2) < 1e-9) or \
               (np.linalg.norm(th + th2) < 1e-6 and abs(hh + h2) < 1e-9):
                break
        else:
            lines.append((th, hh))
    if len(lines) < 2:
        raise CoincidentChords(
            "the two supporting chords through the point coincide "
            "(density 1/2)")
    if len(lines) > 2:
        raise ValueError("point appears to lie inside the flotation curve")
    chords = []
    for th, hh in lines:
        _, endpoints, _ = surface.chord(th)
        chords.append(FlotationChord(th, hh, endpoints))
    return tuple(chords)


# -- reconstruction from the exact decomposition -----------------------------


def _line_key(point, direction, scale):
    d = direction / np.linalg.norm(direction)
    if (d[0], d[1]) < (-d[0], -d[1]):
        d = -d
    offset = float(np.cross(d, point))  # signed distance of origin line
    return (round(d[0] / (1e-9), 0), round(d[1] / (1e-9), 0),
            round(offset / (1e-9 * max(scale, 1.0)), 0))


def _same_line(p1, d1, p2, d2, tol):
    d1 = d1 / np.linalg.norm(d1)
    d2 = d2 / np.linalg.norm(d2)
    if abs(np.cross(d1, d2)) > 1e-9:
        return False
    return abs(np.cross(d1, p2 - p1)) <= tol


def _halfplane_polygon(constraints, center, scale):
    """Intersection of {x : n . x >= n . p} half-planes, as a CCW ring."""
    radius = 50.0 * max(scale, 1e-9)
    ring = center + radius * np.array([[-1.0, -1.0], [1.0, -1.0],
                                       [1.0, 1.0], [-1.0, 1.0]])
    for normal, point in constraints:
        ring = geom2d.halfplane_clip(ring, -normal, -float(normal @ point))
        if len(ring) < 3:
            raise ChaseNonTermination("recovered half-planes have empty interior")
    return geom2d.dedupe_ring(ring, 1e-11 * max(scale, 1.0))


def reconstruct(dec: ArcDecomposition, delta: float,
                truth: Polytope | None = None) -> ReconstructionReport:
    """Rebuild the polygon from its flotation-curve decomposition.

    Asymptote lines of the arcs give most sides directly (they appear on
    the boundary of the quarter-plane intersection W).  A parallel side
    hidden inside a corner-point pencil is recovered by mirroring its
    partner line through the corner point.  Fails with HalfDensity at
    delta = 1/2, where the curve does not determine the polygon.
    """
    if abs(delta - 0.5) <= 1e-12:
        raise HalfDensity(
            "reconstruction needs density != 1/2: at half density the two "
            "supporting chords through any boundary point coincide and "
            "distinct polygons can share the flotation curve")
    if dec.degenerate or not dec.arcs:
        raise ChaseNonTermination("degenerate decomposition cannot be inverted")

    scale = dec.scale
    tol = 1e-9 * max(scale, 1.0)
    lines: dict = {}
    for arc in dec.arcs:
        for lbl, d_line, d_other in ((arc.side_pair[0], arc.dir_i, arc.dir_j),
                                     (arc.side_pair[1], arc.dir_j, arc.dir_i)):
            if lbl in lines:
                continue
            inward = d_other - float(d_other @ d_line) * d_line
            inward = inward / np.linalg.norm(inward)
            lines[lbl] = {"point": arc.apex.copy(), "dir": d_line.copy(),
                          "inward": inward, "source": "asymptote"}

    guard = 3 * (len(dec.arcs) + len(dec.corners) + 4)
    pending = list(dec.corners)
    steps = 0
    while pending:
        steps += 1
        if steps > guard:
            raise ChaseNonTermination(
                f"parallel-side chase exceeded {guard} steps")
        corner = pending.pop(0)
        k, l = corner.parallel_side_pair
        known = [lbl for lbl in (k, l) if lbl in lines]
        if len(known) == 2:
            continue
        if not known:
            raise ChaseNonTermination(
                "pencil with both side lines unknown: decomposition is "
                "inconsistent")
        src = lines[known[0]]
        missing = k if known[0] == l else l
        mirrored_point = 2.0 * corner.point - src["point"]
        normal = np.array([-src["dir"][1], src["dir"][0]])
        if float(normal @ (corner.point - mirrored_point)) < 0:
            normal = -normal
        if missing in lines:
            if not _same_line(lines[missing]["point"], lines[missing]["dir"],
                              mirrored_point, src["dir"], tol):
                raise ChaseNonTermination("inconsistent mirrored side lines")
            continue
        lines[missing] = {"point": mirrored_point, "dir": src["dir"].copy(),
                          "inward": normal, "source": "chased"}

    center = np.mean([a.apex for a in dec.arcs]
                     + [c.point for c in dec.corners], axis=0)
    constraints = [(rec["inward"], rec["point"]) for rec in lines.values()]
    ring = _halfplane_polygon(constraints, center, scale)
    polygon = build_polytope(ring, 2, density=min(max(delta, 1e-6), 1 - 1e-6))

    w_ring = compute_W(dec)
    recovered, chased = [], []
    verts = polygon.vertices
    nv = len(verts)
    for lbl, rec in sorted(lines.items()):
        for i in range(nv):
            a, b = verts[i], verts[(i + 1) % nv]
            if (abs(np.cross(rec["dir"], a - rec["point"])) <= tol
                    and abs(np.cross(rec["dir"], b - rec["point"])) <= tol):
                seg = (lbl, np.array([a, b]))
                (recovered if rec["source"] == "asymptote" else chased).append(seg)
                break

    status = "complete" if len(recovered) + len(chased) == nv else "partial"
    hd = None
    if truth is not None:
        hd = geom2d.hausdorff_distance(polygon.vertices, truth.vertices)
    # W always contains the reconstruction; cheap sanity check
    if not np.all([geom2d.point_polygon_distance(v, w_ring) <= 1e-6 * scale
                   for v in polygon.vertices]):
        status = "partial"
    return ReconstructionReport(polygon, recovered, chased, hd, status)


# -- reconstruction from raw samples -----------------------------------------


def _fit_conic(pts: np.ndarray) -> np.ndarray:
    x, y = pts[:, 0], pts[:, 1]
    design = np.stack([x * x, x * y, y * y, x, y, np.ones_like(x)], axis=1)
    _, _, vt = np.linalg.svd(design, full_matrices=True)
    return vt[-1]


def _conic_residual(coeff, pts) -> float:
    x, y = pts[:, 0], pts[:, 1]
    val = (coeff[0] * x * x + coeff[1] * x * y + coeff[2] * y * y
           + coeff[3] * x + coeff[4] * y + coeff[5])
    gx = 2 * coeff[0] * x + coeff[1] * y + coeff[3]
    gy = coeff[1] * x + 2 * coeff[2] * y + coeff[4]
    grad = np.hypot(gx, gy)
    return float(np.max(np.abs(val) / np.maximum(grad, 1e-12)))


def _conic_lines(coeff):
    """Center and asymptote directions of a hyperbola-type conic."""
    a, b, c = coeff[0], coeff[1], coeff[2]
    m = np.array([[2 * a, b], [b, 2 * c]])
    center = np.linalg.solve(m, -coeff[3:5])
    if abs(a) >= abs(c):
        disc = np.sqrt(b * b - 4 * a * c)
        ts = [(-b + disc) / (2 * a), (-b - disc) / (2 * a)]
        dirs = [np.array([t, 1.0]) for t in ts]
    else:
        disc = np.sqrt(b * b - 4 * a * c)
        ss = [(-b + disc) / (2 * c), (-b - disc) / (2 * c)]
        dirs = [np.array([1.0, s]) for s in ss]
    dirs = [d / np.linalg.norm(d) for d in dirs]
    return center, dirs


def reconstruct_from_samples(samples: np.ndarray, delta: float,
                             truth: Polytope | None = None) -> ReconstructionReport:
    """Looser-tolerance reconstruction from dense flotation-curve points.

    `samples` are contact points ordered by chord-normal angle over a full
    sweep.  Corner points show up as stationary runs; the smooth runs are
    fitted with conics whose asymptotes recover the side lines.  Pencils
    whose parallel partner line is missing are resolved by mirror symmetry
    with a containment test.  Expected accuracy ~1e-4 of the diameter.
    """
    if abs(delta - 0.5) <= 1e-12:
        raise HalfDensity("reconstruction needs density != 1/2")
    pts = np.asarray(samples, dtype=float)
    m = len(pts)
    scale = float(np.max(np.ptp(pts, axis=0)))
    stat_tol = 1e-6 * scale
    fit_tol = 1e-6 * scale

    # stationary runs -> corner points
    moving = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1) > stat_tol
    corner_pts = []
    runs = []
    k = 0
    start = None
    # rotate start to a moving index for clean cyclic runs
    first_move = int(np.argmax(moving)) if moving.any() else 0
    order = np.roll(np.arange(m), -first_move)
    state = []
    for idx in order:
        state.append((idx, moving[idx]))
    idx_seq = [s[0] for s in state]
    move_seq = [s[1] for s in state]
    run = []
    for pos in range(m):
        if move_seq[pos]:
            run.append(idx_seq[pos])
        else:
            if run:
                run.append(idx_seq[pos])
                runs.append(run)
                run = []
            corner_pts.append(pts[idx_seq[pos]])
    if run:
        runs.append(run)
    corners = []
    if corner_pts:
        cp = np.asarray(corner_pts)
        used = np.zeros(len(cp), dtype=bool)
        for i in range(len(cp)):
            if used[i]:
                continue
            close = np.linalg.norm(cp - cp[i], axis=1) <= 10 * stat_tol
            used |= close
            corners.append(cp[close].mean(axis=0))

    # split each moving run at conic-fit breaks
    arc_lines = []
    arc_chunks = []
    for run in runs:
        chunk = []
        for idx in run:
            chunk.append(idx)
            if len(chunk) >= 8:
                coeff = _fit_conic(pts[chunk])
                if _conic_residual(coeff, pts[chunk]) > fit_tol:
                    head = chunk[:-1]
                    arc_chunks.append(head)
                    chunk = chunk[-4:]  # keep overlap to seed the next arc
        if len(chunk) >= 6:
            arc_chunks.append(chunk)
    interior = pts.mean(axis=0)
    for chunk in arc_chunks:
        if len(chunk) < 6:
            continue
        coeff = _fit_conic(pts[chunk])
        try:
            center, dirs = _conic_lines(coeff)
        except (np.linalg.LinAlgError, FloatingPointError, ValueError):
            continue
        for d in dirs:
            arc_lines.append((center, d))

    # dedupe lines
    lines = []
    for pt, d in arc_lines:
        if not any(_same_line(pt, d, p2, d2, 20 * fit_tol) for p2, d2 in lines):
            lines.append((pt, d))

    # mirror resolution at corners whose parallel partner is absent
    chased = []
    for cp in corners:
        for pt, d in list(lines):
            mirrored = 2.0 * cp - pt
            if any(_same_line(mirrored, d, p2, d2, 20 * fit_tol)
                   for p2, d2 in lines + chased):
                continue
            normal = np.array([-d[1], d[0]])
            if normal @ (cp - mirrored) < 0:
                normal = -normal
            side = (pts - mirrored) @ normal
            if np.all(side >= -10 * fit_tol):  # candidate keeps the curve inside
                dist = abs(float(normal @ (cp - mirrored)))
                partner_dist = abs(float(normal @ (cp - pt)))
                if abs(dist - partner_dist) <= 20 * fit_tol:
                    chased.append((mirrored, d))
    lines.extend(chased)

    constraints = []
    for pt, d in lines:
        normal = np.array([-d[1], d[0]])
        if normal @ (interior - pt) < 0:
            normal = -normal
        constraints.append((normal, pt))
    ring = _halfplane_polygon(constraints, interior, scale)
    polygon = build_polytope(ring, 2, density=min(max(delta, 1e-6), 1 - 1e-6))
    hd = None
    if truth is not None:
        hd = geom2d.hausdorff_distance(polygon.vertices, truth.vertices)
    status = "complete" if len(polygon.vertices) >= 3 else "partial"
    return ReconstructionReport(polygon, [], [(None, np.array([pt, pt + d]))
                                              for pt, d in chased], hd, status)


# -- half-density counterexample ---------------------------------------------


def _parallel_equal_pair(poly: Polytope, along=None):
    """Indices of the parallel equal-length side pair.

    Without `along`, the polygon must carry exactly one such pair.  With a
    unit direction `along`, the pair parallel to it is returned (a convex
    polygon has at most two sides parallel to a given direction), which
    keeps the pair identifiable even when a balancing slide creates
    additional equal pairs elsewhere.
    """
    v = poly.vertices
    n = len(v)
    dirs = np.roll(v, -1, axis=0) - v
    lens = np.linalg.norm(dirs, axis=1)
    diam = poly.diameter()
    if along is not None:
        matches = [i for i in range(n)
                   if abs(np.cross(dirs[i], along)) <= 1e-9 * lens[i]]
        if len(matches) != 2:
            raise NoParallelPair(
                f"expected 2 sides parallel to the pair direction, "
                f"found {len(matches)}")
        i, j = matches
        if abs(lens[i] - lens[j]) > 1e-9 * diam:
            raise NoParallelPair("pair sides no longer have equal length")
        return i, j
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if abs(np.cross(dirs[i], dirs[j])) <= 1e-12 * lens[i] * lens[j] \
                    and dirs[i] @ dirs[j] < 0:
                pairs.append((i, j, abs(lens[i] - lens[j])))
    equal = [(i, j) for i, j, dl in pairs if dl <= 1e-9 * diam]
    if len(pairs) == 0:
        raise NoParallelPair("base polygon has no parallel side pair")
    if len(equal) != 1:
        raise NoParallelPair(
            "base polygon must have exactly one parallel pair of equal-"
            f"length sides (found {len(equal)})")
    return equal[0]


def _pencil_point(poly: Polytope, i: int, j: int):
    """Common point of the half-density chords crossing sides i and j."""
    v = poly.vertices
    n = len(v)
    e = v[(i + 1) % n] - v[i]
    e = e / np.linalg.norm(e)
    lv = solve_level(poly, e, 0.5)
    if set(lv.edge_set) != {i, j}:
        raise NoParallelPair(
            "half-density chord normal to the parallel pair does not cross "
            "both sides; base polygon is unsuitable")
    # chord line {x . e = h} crosses both side lines, both parallel to e
    p_b = v[i] + (lv.h - float(v[i] @ e)) * e
    p_t = v[j] + (lv.h - float(v[j] @ e)) * e
    return 0.5 * (p_b + p_t), e


def _coverage_defect(poly: Polytope, along=None):
    """Signed gap between the pencil span and the full parallel sides.

    Zero exactly when the half-density chord through either endpoint of one
    parallel side leaves through the far endpoint of the other, i.e. the
    two sides are point reflections of each other through the pencil point.
    """
    i, j = _parallel_equal_pair(poly, along=along)
    pstar, e = _pencil_point(poly, i, j)
    v = poly.vertices
    n = len(v)
    u_a = min(float(v[i] @ e), float(v[(i + 1) % n] @ e))
    u_far = max(float(v[j] @ e), float(v[(j + 1) % n] @ e))
    return 2.0 * float(pstar @ e) - (u_a + u_far), (i, j, pstar, e)


def _slide_parallel_side(poly: Polytope, j: int, shift: float, e) -> Polytope:
    pts = poly.vertices.copy()
    n = len(pts)
    pts[j] = pts[j] + shift * e
    pts[(j + 1) % n] = pts[(j + 1) % n] + shift * e
    moved = build_polytope(pts, 2, density=poly.density)
    if moved.n_vertices != n:
        raise ConvexityLoss("balancing slide destroyed convexity")
    return moved


def balance_base(poly: Polytope, tol: float = 1e-12) -> Polytope:
    """Slide one parallel side along its line until the half-density pencil
    covers both parallel sides end to end.

    The wedge construction is exact only in that configuration: the chord
    through one end of a side must leave through the far end of its
    partner.  Returns the adjusted polygon (the input when already valid).
    """
    defect, (i, j, _, e) = _coverage_defect(poly)
    diam = poly.diameter()
    if abs(defect) <= tol * diam:
        return poly
    side_len = float(np.linalg.norm(
        poly.vertices[(j + 1) % poly.n_vertices] - poly.vertices[j]))

    def defect_at(s):
        if s == 0.0:
            return defect
        return _coverage_defect(_slide_parallel_side(poly, j, s, e),
                                along=e)[0]

    # scan feasible slides for a sign change, then bisect inside it
    samples = [(0.0, defect)]
    for s in np.linspace(-0.95 * side_len, 0.95 * side_len, 77):
        try:
            samples.append((float(s), defect_at(float(s))))
        except (NoParallelPair, ConvexityLoss):
            continue
    samples.sort()
    bracket = None
    for (s1, d1), (s2, d2) in zip(samples, samples[1:]):
        if d1 * d2 <= 0:
            bracket = (s1, d1, s2, d2)
            break
    if bracket is None:
        raise ConvexityLoss(
            "cannot balance the base: no feasible slide equalizes the "
            "pencil span")
    s_lo, f_lo, s_hi, _ = bracket
    best_s, best_d = (s_lo, abs(f_lo))
    for _ in range(100):
        mid = 0.5 * (s_lo + s_hi)
        fm = defect_at(mid)
        if abs(fm) < best_d:
            best_s, best_d = mid, abs(fm)
        if abs(fm) <= tol * diam or s_hi - s_lo < 1e-15 * max(diam, 1.0):
            break
        if f_lo * fm <= 0:
            s_hi = mid
        else:
            s_lo, f_lo = mid, fm
    return _slide_parallel_side(poly, j, best_s, e)


def make_counterexample(base: Polytope, epsilon: float):
    """Two distinct convex polygons with identical half-density flotation.

    The base must carry exactly one parallel pair of equal-length sides.
    Each of the two sides gets an outward wedge of depth `epsilon`, the
    wedge apexes placed point-symmetrically about the pencil point of the
    half-density chords crossing the pair.  The symmetric difference is
    then split evenly by every half-density chord, so the liquid levels of
    the two polygons agree at every direction, while the polygons differ
    by a Hausdorff distance of `epsilon`.

    Returns (P, Q): P is the (possibly re-balanced) base, Q the wedged
    polygon with two extra vertices.
    """
    if base.dim != 2:
        raise ValueError("counterexample construction is planar")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    i0, _ = _parallel_equal_pair(base)
    pair_dir = base.vertices[(i0 + 1) % base.n_vertices] - base.vertices[i0]
    pair_dir = pair_dir / np.linalg.norm(pair_dir)
    balanced = balance_base(base)
    defect, (i, j, pstar, e) = _coverage_defect(balanced, along=pair_dir)
    v = balanced.vertices
    n = len(v)
    a, b = v[i], v[(i + 1) % n]
    normal_b = balanced.facet_normals[i]
    apex_bottom = 0.5 * (a + b) + epsilon * normal_b
    apex_top = 2.0 * pstar - apex_bottom
    pts = np.vstack([v, apex_bottom, apex_top])
    wedged = build_polytope(pts, 2, density=0.5)
    if wedged.n_vertices != n + 2:
        raise ConvexityLoss(
            f"epsilon={epsilon} too large: wedge apex absorbed a vertex")
    original_kept = all(
        np.min(np.linalg.norm(wedged.vertices - p, axis=1)) <= 1e-9
        for p in v)
    if not original_kept:
        raise ConvexityLoss(
            f"epsilon={epsilon} too large: an original vertex left the hull")
    result_p = build_polytope(v, 2, density=0.5)
    return result_p, wedged


def flotation_disagreement(poly_p: Polytope, poly_q: Polytope, delta: float,
                           n_dirs: int = 720) -> float:
    """sup over sampled directions of |h_P(theta) - h_Q(theta)|."""
    phis = np.linspace(0.0, _TWO_PI, n_dirs, endpoint=False)
    thetas = np.stack([np.cos(phis), np.sin(phis)], axis=1)
    h_p, _ = solve_levels_array(poly_p, thetas, delta)
    h_q, _ = solve_levels_array(poly_q, thetas, delta)
    return float(np.max(np.abs(h_p - h_q)))


def hausdorff(poly_p: Polytope, poly_q: Polytope) -> float:
    return geom2d.hausdorff_distance(poly_p.vertices, poly_q.vertices)
