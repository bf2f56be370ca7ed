"""Deterministic SVG rendering of traces and loops.

Paths are projected onto the first coordinate plane.  Coordinates are
printed with a fixed number of decimals so repeated renders of the same
input are byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domains import Annulus
from .errors import PreconditionError


@dataclass(frozen=True)
class Viewport:
    """Square canvas of ``size`` pixels showing ``[-extent, extent]^2``."""

    size: int = 600
    extent: float = 1.05

    def to_px(self, z):
        z = np.asarray(z, dtype=complex)
        scale = self.size / (2 * self.extent)
        return (z.real + self.extent) * scale, (self.extent - z.imag) * scale


def _fmt(x):
    return f"{x:.3f}"


def _planar(obj):
    """First-coordinate samples of a trace, loop or raw array."""
    if hasattr(obj, "z") and hasattr(obj, "t"):
        pts = np.asarray(obj.z)
        closed = False
    elif hasattr(obj, "points"):
        pts = np.asarray(obj.points)
        closed = True
    else:
        pts = np.asarray(obj, dtype=complex)
        closed = False
    if pts.size == 0:
        raise PreconditionError("nothing to render: the path is empty")
    if pts.ndim == 2:
        pts = pts[:, 0]
    return pts, closed


def _circle(vp, radius, stroke, dash=None):
    cx, cy = vp.to_px(0)
    r = radius * vp.size / (2 * vp.extent)
    extra = f' stroke-dasharray="{dash}"' if dash else ""
    return (f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" fill="none" '
            f'stroke="{stroke}" stroke-width="1.5"{extra}/>')


def _polyline(vp, pts, closed, stroke, width=1.5, opacity=1.0):
    x, y = vp.to_px(pts)
    coords = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(x, y))
    tag = "polygon" if closed else "polyline"
    return (f'<{tag} points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width}" stroke-opacity="{opacity:.3f}"/>')


def render_svg(paths, viewport=None, domain=None, markers=None, background=None):
    """Render one or more paths as an SVG document.

    Parameters
    ----------
    paths : GeodesicTrace, LoopPath, array, or a list of these
        The last path is drawn in full colour; earlier ones (for instance
        shortening iterates) are drawn faded.
    viewport : Viewport, optional
    domain : DomainModel, optional
        Draws the unit circle, plus the inner circle for an annulus.
        Defaults to the domain attached to a trace.
    markers : sequence of complex, optional
        Points drawn as small dots (Poincare-section crossings).
    background : sequence of float, optional
        Radii of extra dashed reference circles.

    Returns
    -------
    str
    """
    vp = viewport or Viewport()
    if not isinstance(paths, (list, tuple)):
        paths = [paths]
    if not paths:
        raise PreconditionError("nothing to render: no paths given")
    planar = [_planar(p) for p in paths]
    if domain is None:
        domain = getattr(paths[-1], "domain", None)
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{vp.size}" height="{vp.size}" '
             f'viewBox="0 0 {vp.size} {vp.size}">',
             f'<rect width="{vp.size}" height="{vp.size}" fill="white"/>',
             _circle(vp, 1.0, "black")]
    if isinstance(domain, Annulus):
        lines.append(_circle(vp, domain.r, "black"))
    for radius in background or ():
        lines.append(_circle(vp, float(radius), "gray", dash="4,3"))
    count = len(planar)
    for k, (pts, closed) in enumerate(planar):
        last = k == count - 1
        opacity = 1.0 if last else 0.15 + 0.5 * k / max(count - 1, 1)
        lines.append(_polyline(vp, pts, closed, "#1f4e9c" if last else "#8aa4cf",
                               2.0 if last else 1.0, opacity))
    for m in markers or ():
        x, y = vp.to_px(complex(m))
        lines.append(f'<circle cx="{_fmt(float(x))}" cy="{_fmt(float(y))}" r="3" fill="#c0392b"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
