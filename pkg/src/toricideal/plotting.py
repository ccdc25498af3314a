"""Rank-2 figure rendering for the plot command.

Draws the dual cone, the Newton polyhedron of the ideal, the shifted and
scaled membership body, and the computed minimal generators over the
lattice, then serializes the matplotlib figure as SVG. Rendering is the one
place floats appear; they never feed back into any computation.
"""

from __future__ import annotations

import io
from fractions import Fraction
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .cones import Cone
from .exact_linalg import pairing
from .newton import NewtonPolyhedron


def _clip_halfplane(poly, a, b, c):
    """Clip a float polygon against a*x + b*y >= c (Sutherland-Hodgman)."""
    out = []
    n = len(poly)
    for i in range(n):
        px, py = poly[i]
        qx, qy = poly[(i + 1) % n]
        pin = a * px + b * py >= c - 1e-9
        qin = a * qx + b * qy >= c - 1e-9
        if pin:
            out.append((px, py))
        if pin != qin:
            denom = a * (qx - px) + b * (qy - py)
            if abs(denom) > 1e-12:
                s = (c - a * px - b * py) / denom
                out.append((px + s * (qx - px), py + s * (qy - py)))
    return out


def _clipped_region(halfplanes, window):
    lo, hi = window
    poly = [(lo, lo), (hi, lo), (hi, hi), (lo, hi)]
    for a, b, c in halfplanes:
        poly = _clip_halfplane(poly, a, b, c)
        if not poly:
            break
    return poly


def render_plot(
    sigma: Cone,
    generators: Sequence[Sequence[int]],
    body: Optional[NewtonPolyhedron] = None,
    shift=None,
    newton: Optional[NewtonPolyhedron] = None,
    title: str = "",
) -> bytes:
    """Render the rank-2 picture and return it as SVG bytes."""
    if sigma.rank != 2:
        raise ValueError("plotting is only available in rank 2")
    dual = sigma.dual()

    extent = 6.0
    for g in generators:
        extent = max(extent, *(abs(float(x)) for x in g))
    if body is not None and shift is not None:
        for v in body.vertices:
            for x, s in zip(v, shift):
                extent = max(extent, abs(float(x + s)))
    extent = extent + 2.5
    window = (-extent, extent)

    fig, ax = plt.subplots(figsize=(6.0, 6.0))

    xs, ys = [], []
    for i in range(int(-extent), int(extent) + 1):
        for j in range(int(-extent), int(extent) + 1):
            xs.append(i)
            ys.append(j)
    ax.plot(xs, ys, ".", color="0.8", markersize=2.5, zorder=1)

    cone_planes = [(float(n[0]), float(n[1]), 0.0) for n in dual.halfspaces()]
    poly = _clipped_region(cone_planes, window)
    if poly:
        ax.fill(
            [p[0] for p in poly],
            [p[1] for p in poly],
            color="tab:gray",
            alpha=0.25,
            zorder=2,
            label="dual cone",
        )

    if newton is not None:
        planes = [(float(n[0]), float(n[1]), float(c)) for n, c in newton.facets]
        poly = _clipped_region(planes, window)
        if poly:
            ax.fill(
                [p[0] for p in poly],
                [p[1] for p in poly],
                color="tab:green",
                alpha=0.25,
                zorder=3,
                label="Newton polyhedron",
            )

    if body is not None and shift is not None:
        planes = []
        for n, c in body.facets:
            c_abs = Fraction(c) + pairing(shift, n)
            planes.append((float(n[0]), float(n[1]), float(c_abs)))
        poly = _clipped_region(planes, window)
        if poly:
            px = [p[0] for p in poly] + [poly[0][0]]
            py = [p[1] for p in poly] + [poly[0][1]]
            ax.plot(px, py, "--", color="tab:blue", zorder=4, label="membership body")

    if generators:
        ax.plot(
            [float(g[0]) for g in generators],
            [float(g[1]) for g in generators],
            "o",
            color="tab:red",
            markersize=7,
            zorder=5,
            label="minimal generators",
        )

    ax.axhline(0.0, color="0.4", linewidth=0.8, zorder=2)
    ax.axvline(0.0, color="0.4", linewidth=0.8, zorder=2)
    ax.set_xlim(window)
    ax.set_ylim(window)
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper left", fontsize=8)

    buf = io.BytesIO()
    fig.savefig(buf, format="svg", bbox_inches="tight")
    plt.close(fig)
    return buf.getvalue()
