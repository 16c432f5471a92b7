"""Matplotlib renderers for curves, decompositions and verification reports.

Figures are written to files (SVG or PNG) with deterministic settings:
fixed hash salt, no embedded dates, and a 1000-unit square viewbox for SVG.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .arcs import ArcDecomposition, compute_W, eval_arc  # noqa: E402
from .errors import UnboundedRegion  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "floatgeo"

_SIZE = 1000.0 / 72.0  # 1000 pt == 1000 SVG user units


def _new_fig():
    fig, ax = plt.subplots(figsize=(_SIZE, _SIZE))
    ax.set_aspect("equal", adjustable="box")
    return fig, ax


def save_figure(fig, path) -> None:
    path = str(path)
    if path.endswith(".svg"):
        fig.savefig(path, metadata={"Date": None})
    else:
        fig.savefig(path)
    plt.close(fig)


def _ring_closed(ring: np.ndarray) -> np.ndarray:
    return np.vstack([ring, ring[:1]])


def _plot_polygon(ax, ring, **kw):
    closed = _ring_closed(np.asarray(ring))
    ax.plot(closed[:, 0], closed[:, 1], **kw)


def flotation_figure(samples, polygon=None):
    """Contact-point curve; 3D samples are drawn as coordinate projections."""
    fig, ax = _new_fig()
    contacts = np.array([s.contact for s in samples])
    if contacts.shape[1] == 2:
        if polygon is not None:
            _plot_polygon(ax, polygon.vertices, color="black", lw=1.0,
                          label="polygon")
        ax.plot(contacts[:, 0], contacts[:, 1], ".", ms=2.0, color="tab:blue",
                label="flotation curve")
    else:
        for (i, j), color in (((0, 1), "tab:blue"), ((0, 2), "tab:orange"),
                              ((1, 2), "tab:green")):
            ax.plot(contacts[:, i], contacts[:, j], ".", ms=1.5, color=color,
                    label=f"proj {i + 1}{j + 1}")
    ax.legend(loc="upper right")
    ax.set_title("flotation surface samples")
    return fig


def buoyancy_figure(samples, polygon=None):
    fig, ax = _new_fig()
    centers = np.array([s.center for s in samples])
    if centers.shape[1] == 2:
        if polygon is not None:
            _plot_polygon(ax, polygon.vertices, color="black", lw=1.0,
                          label="polygon")
        ax.plot(centers[:, 0], centers[:, 1], ".", ms=2.0, color="tab:red",
                label="buoyancy curve")
    else:
        for (i, j), color in (((0, 1), "tab:red"), ((0, 2), "tab:purple"),
                              ((1, 2), "tab:brown")):
            ax.plot(centers[:, i], centers[:, j], ".", ms=1.5, color=color,
                    label=f"proj {i + 1}{j + 1}")
    ax.legend(loc="upper right")
    ax.set_title("buoyancy surface samples")
    return fig


def decomposition_figure(dec: ArcDecomposition, polygon=None,
                         samples_per_arc: int = 64):
    """Layers: polygon (optional), flotation arcs, corner points, W and
    asymptote lines."""
    fig, ax = _new_fig()
    if polygon is not None:
        _plot_polygon(ax, polygon.vertices, color="black", lw=1.2,
                      label="polygon")
    try:
        w_ring = compute_W(dec)
        _plot_polygon(ax, w_ring, color="tab:green", lw=0.8, ls="--",
                      label="quarter-plane polygon W")
    except UnboundedRegion:
        pass
    span = 2.0 * dec.scale
    for k, arc in enumerate(dec.arcs):
        phi1, phi2 = arc.angle_range
        phis = np.linspace(phi1 + 1e-12, phi2 - 1e-12, samples_per_arc)
        pts = np.array([eval_arc(arc, p) for p in phis])
        ax.plot(pts[:, 0], pts[:, 1], color="tab:blue", lw=1.4,
                label="flotation arcs" if k == 0 else None)
        for anchor, direction in arc.asymptotes():
            line = np.array([anchor - span * direction,
                             anchor + span * direction])
            ax.plot(line[:, 0], line[:, 1], color="tab:gray", lw=0.5,
                    alpha=0.6)
    for k, corner in enumerate(dec.corners):
        ax.plot(*corner.point, "o", ms=4.0, color="tab:orange",
                label="corner points" if k == 0 else None)
    ax.legend(loc="upper right")
    ax.set_title(f"flotation curve decomposition (delta={dec.delta})")
    return fig


def verify_figure(report: dict):
    """Log-scale residual bars against their tolerances."""
    checks = [c for c in report["checks"] if c.get("residual") is not None]
    fig, ax = plt.subplots(figsize=(_SIZE, 0.6 * _SIZE))
    names = [c["name"] for c in checks]
    floor = 1e-18
    residuals = [max(c["residual"], floor) for c in checks]
    tols = [c["tolerance"] for c in checks]
    pos = np.arange(len(names))
    colors = ["tab:green" if c["passed"] else "tab:red" for c in checks]
    ax.barh(pos, residuals, color=colors)
    for k, tol in enumerate(tols):
        ax.plot([tol, tol], [k - 0.4, k + 0.4], color="black", lw=1.0)
    ax.set_xscale("log")
    ax.set_yticks(pos, names)
    ax.set_xlabel("residual (bars) vs tolerance (ticks)")
    ax.set_title("verification residuals")
    fig.tight_layout()
    return fig
