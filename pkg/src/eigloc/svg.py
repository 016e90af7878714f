"""Standalone SVG 1.1 pictures of localization regions."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .regions import Region, imag_bound

__all__ = ["Canvas", "render_svg"]


@dataclass(frozen=True)
class Canvas:
    """Pixel size and optional data window ``xlim``/``ylim``.

    Missing limits are fitted to the region and the overlay points.
    """

    width: int = 640
    height: int = 480
    xlim: tuple | None = None
    ylim: tuple | None = None
    margin: float = 0.08
    samples: int = 400


def _window(region, pts, canvas):
    xs, ys = [], []
    support = region.real_support() if region.families else []
    if support:
        xs += [support[0][0], support[-1][1]]
        h = imag_bound(region)
        ys += [-h, h]
    if len(pts):
        xs += [pts.real.min(), pts.real.max()]
        ys += [pts.imag.min(), pts.imag.max()]
    xs += [0.0]
    ys += [0.0]
    xlo, xhi = canvas.xlim or (min(xs), max(xs))
    ylo, yhi = canvas.ylim or (min(ys), max(ys))
    if xhi - xlo <= 0:
        xlo, xhi = xlo - 1.0, xhi + 1.0
    if yhi - ylo <= 0:
        ylo, yhi = ylo - 1.0, yhi + 1.0
    if canvas.xlim is None:
        pad = canvas.margin * (xhi - xlo)
        xlo, xhi = xlo - pad, xhi + pad
    if canvas.ylim is None:
        pad = canvas.margin * (yhi - ylo)
        ylo, yhi = ylo - pad, yhi + pad
    return xlo, xhi, ylo, yhi


def render_svg(region: Region, overlay=(), canvas: Canvas | None = None) -> str:
    """Draw ``region`` filled gray with eigenvalue markers on top.

    The outline is traced from the exact slice half-height ``H(x)`` on
    each connected piece of the real support, so the polygon matches
    :meth:`Region.contains` up to the sampling of the curved boundary.
    """
    canvas = canvas or Canvas()
    if canvas.width <= 0 or canvas.height <= 0:
        raise ValueError(f"canvas must have positive size, got {canvas.width}x{canvas.height}")
    pts = np.atleast_1d(np.asarray(overlay, dtype=complex))
    xlo, xhi, ylo, yhi = _window(region, pts, canvas)
    W, H = canvas.width, canvas.height

    def px(x):
        return (np.asarray(x) - xlo) / (xhi - xlo) * W

    def py(y):
        return H - (np.asarray(y) - ylo) / (yhi - ylo) * H

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
    ]
    if region.families:
        cand = region._candidates()
        for a, b in region.real_support():
            xs = np.linspace(a, b, canvas.samples)
            xs = np.unique(np.concatenate([xs, cand[(cand >= a) & (cand <= b)]]))
            h = np.maximum(region.half_height(xs), 0.0)
            upper = [f"{px(x):.3f},{py(y):.3f}" for x, y in zip(xs, h)]
            lower = [f"{px(x):.3f},{py(-y):.3f}" for x, y in zip(xs[::-1], h[::-1])]
            d = "M " + " L ".join(upper + lower) + " Z"
            out.append(f'<path class="region" d="{d}" fill="#b0b0b0" stroke="#606060" stroke-width="1"/>')
    # axes
    if xlo <= 0 <= xhi:
        out.append(f'<line class="axis" x1="{px(0):.3f}" y1="0" x2="{px(0):.3f}" y2="{H}" stroke="black" stroke-width="1"/>')
    if ylo <= 0 <= yhi:
        out.append(f'<line class="axis" x1="0" y1="{py(0):.3f}" x2="{W}" y2="{py(0):.3f}" stroke="black" stroke-width="1"/>')
    label = escape(f"Re [{xlo:.3g}, {xhi:.3g}]  Im [{ylo:.3g}, {yhi:.3g}]")
    out.append(f'<text x="4" y="{H - 4}" font-size="11" font-family="sans-serif">{label}</text>')
    for z in pts:
        out.append(f'<circle class="marker" cx="{px(z.real):.3f}" cy="{py(z.imag):.3f}" r="3" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
