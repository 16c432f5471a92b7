"""Stable file formats: polytope JSON, sample CSV, decomposition JSON.

Floats are serialized with Python's shortest round-trip repr, so every
emission reloads bit-exactly.
"""

from __future__ import annotations

import json

import numpy as np

from .arcs import ArcDecomposition, CornerPoint, HyperbolicArc
from .flotation import SingularSet
from .polytope import Polytope, build_polytope


def polytope_to_dict(poly: Polytope) -> dict:
    return {
        "dim": poly.dim,
        "vertices": [list(map(float, v)) for v in poly.vertices],
        "density": float(poly.density),
    }


def polytope_from_dict(data: dict) -> Polytope:
    """Accepts any point cloud; the stored polytope is its canonical hull."""
    return build_polytope(np.asarray(data["vertices"], dtype=float),
                          int(data["dim"]),
                          density=float(data.get("density", 0.5)))


def load_polytope(path) -> Polytope:
    with open(path) as fh:
        return polytope_from_dict(json.load(fh))


def dump_polytope(poly: Polytope, path) -> None:
    with open(path, "w") as fh:
        json.dump(polytope_to_dict(poly), fh, indent=2)
        fh.write("\n")


def write_json(data: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


# -- CSV ---------------------------------------------------------------------


def _csv_row(values) -> str:
    return ",".join(repr(float(v)) for v in values)


def write_flotation_csv(samples, path) -> None:
    dim = len(samples[0].theta)
    header = ([f"theta_{k + 1}" for k in range(dim)] + ["h"]
              + [f"contact_{k + 1}" for k in range(dim)] + ["residual"])
    lines = [",".join(header)]
    for s in samples:
        lines.append(_csv_row([*s.theta, s.h, *s.contact, s.residual]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_buoyancy_csv(samples, path) -> None:
    dim = len(samples[0].theta)
    header = ([f"theta_{k + 1}" for k in range(dim)] + ["h"]
              + [f"center_{k + 1}" for k in range(dim)])
    lines = [",".join(header)]
    for s in samples:
        lines.append(_csv_row([*s.theta, s.h, *s.center]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path):
    with open(path) as fh:
        rows = [line.strip() for line in fh if line.strip()]
    header = rows[0].split(",")
    data = np.array([[float(x) for x in row.split(",")] for row in rows[1:]])
    return header, data


# -- decomposition JSON --------------------------------------------------------


def decomposition_to_dict(dec: ArcDecomposition) -> dict:
    return {
        "delta": float(dec.delta),
        "scale": float(dec.scale),
        "degenerate": bool(dec.degenerate),
        "arcs": [
            {
                "side_pair": list(map(int, a.side_pair)),
                "apex": list(map(float, a.apex)),
                "asymptote_dirs": [list(map(float, a.dir_i)),
                                   list(map(float, a.dir_j))],
                "area_const": float(a.area_const),
                "angle_range": [float(a.angle_range[0]), float(a.angle_range[1])],
            }
            for a in dec.arcs
        ],
        "corners": [
            {
                "point": list(map(float, c.point)),
                "pencil_range": [float(c.pencil_range[0]),
                                 float(c.pencil_range[1])],
                "parallel_side_pair": list(map(int, c.parallel_side_pair)),
            }
            for c in dec.corners
        ],
    }


def decomposition_from_dict(data: dict) -> ArcDecomposition:
    arcs = [
        HyperbolicArc(
            tuple(a["side_pair"]),
            np.asarray(a["apex"], dtype=float),
            np.asarray(a["asymptote_dirs"][0], dtype=float),
            np.asarray(a["asymptote_dirs"][1], dtype=float),
            float(a["area_const"]),
            tuple(a["angle_range"]),
        )
        for a in data["arcs"]
    ]
    corners = [
        CornerPoint(
            np.asarray(c["point"], dtype=float),
            tuple(c["pencil_range"]),
            tuple(c["parallel_side_pair"]),
        )
        for c in data["corners"]
    ]
    return ArcDecomposition(arcs, corners, float(data["delta"]),
                            float(data["scale"]), bool(data["degenerate"]))


def load_decomposition(path) -> ArcDecomposition:
    with open(path) as fh:
        return decomposition_from_dict(json.load(fh))


def dump_decomposition(dec: ArcDecomposition, path) -> None:
    write_json(decomposition_to_dict(dec), path)


def crossing_report_dict(singular: SingularSet) -> dict:
    return {
        "crossings": [
            {"theta": list(map(float, c.theta)), "h": float(c.h)}
            for c in singular.crossings
        ],
        "vertices": [
            {"v": list(map(float, g.point)), "residual": float(g.residual)}
            for g in singular.groups if g.point is not None
        ],
    }
