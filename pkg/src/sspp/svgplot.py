"""Deterministic SVG plotting with hand-built primitives.

No plotting library: every figure is lines, polygons, circles and
text with fixed 6-significant-digit coordinates, so identical inputs
produce byte-identical files.
"""

import math


def _f(v):
    if not math.isfinite(v):
        v = 0.0
    s = format(float(v), ".6g")
    return s


class Frame:
    """Maps data coordinates into a fixed pixel viewport."""

    def __init__(self, x_range, y_range, width=420.0, height=300.0, margin=45.0):
        self.x0, self.x1 = x_range
        self.y0, self.y1 = y_range
        if self.x1 <= self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 <= self.y0:
            self.y1 = self.y0 + 1.0
        self.width = width
        self.height = height
        self.margin = margin

    def px(self, x):
        return self.margin + (x - self.x0) / (self.x1 - self.x0) * (self.width - 2 * self.margin)

    def py(self, y):
        return self.height - self.margin - (y - self.y0) / (self.y1 - self.y0) * (
            self.height - 2 * self.margin
        )


def _polyline(frame, xs, ys, stroke, width="1.5", dash=None):
    pts = " ".join(f"{_f(frame.px(x))},{_f(frame.py(y))}" for x, y in zip(xs, ys))
    dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
    return (
        f'<polyline fill="none" stroke="{stroke}" stroke-width="{width}"{dash_attr} '
        f'points="{pts}"/>'
    )


def _band(frame, xs, lower, upper, fill="#cccccc"):
    fwd = [f"{_f(frame.px(x))},{_f(frame.py(y))}" for x, y in zip(xs, upper)]
    back = [f"{_f(frame.px(x))},{_f(frame.py(y))}" for x, y in zip(reversed(list(xs)), reversed(list(lower)))]
    return f'<polygon fill="{fill}" stroke="none" points="{" ".join(fwd + back)}"/>'


def _axes(frame, title, xlabel, ylabel):
    x0p, x1p = frame.px(frame.x0), frame.px(frame.x1)
    y0p, y1p = frame.py(frame.y0), frame.py(frame.y1)
    parts = [
        f'<rect x="{_f(x0p)}" y="{_f(y1p)}" width="{_f(x1p - x0p)}" '
        f'height="{_f(y0p - y1p)}" fill="none" stroke="#000000" stroke-width="1"/>',
        f'<text x="{_f((x0p + x1p) / 2)}" y="16" text-anchor="middle" '
        f'font-size="13" font-family="sans-serif">{title}</text>',
        f'<text x="{_f((x0p + x1p) / 2)}" y="{_f(frame.height - 8)}" text-anchor="middle" '
        f'font-size="11" font-family="sans-serif">{xlabel}</text>',
        f'<text x="12" y="{_f((y0p + y1p) / 2)}" text-anchor="middle" font-size="11" '
        f'font-family="sans-serif" transform="rotate(-90 12 {_f((y0p + y1p) / 2)})">{ylabel}</text>',
        f'<text x="{_f(x0p)}" y="{_f(y0p + 14)}" text-anchor="middle" font-size="10" '
        f'font-family="sans-serif">{_f(frame.x0)}</text>',
        f'<text x="{_f(x1p)}" y="{_f(y0p + 14)}" text-anchor="middle" font-size="10" '
        f'font-family="sans-serif">{_f(frame.x1)}</text>',
        f'<text x="{_f(x0p - 6)}" y="{_f(y0p + 4)}" text-anchor="end" font-size="10" '
        f'font-family="sans-serif">{_f(frame.y0)}</text>',
        f'<text x="{_f(x0p - 6)}" y="{_f(y1p + 4)}" text-anchor="end" font-size="10" '
        f'font-family="sans-serif">{_f(frame.y1)}</text>',
    ]
    return parts


def _document(body, width, height):
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" '
        f'height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _panel(xs, ys, title, xlabel, ylabel, band=None, zero_line=False,
           width=420.0, height=300.0, offset=(0.0, 0.0)):
    ys_all = list(ys)
    if band is not None:
        ys_all += list(band[0]) + list(band[1])
    lo, hi = min(ys_all), max(ys_all)
    if zero_line:
        lo, hi = min(lo, 0.0), max(hi, 0.0)
    pad = 0.05 * (hi - lo) if hi > lo else 1.0
    frame = Frame((min(xs), max(xs)), (lo - pad, hi + pad), width, height)
    parts = []
    if band is not None:
        parts.append(_band(frame, xs, band[0], band[1]))
    if zero_line:
        parts.append(_polyline(frame, [frame.x0, frame.x1], [0.0, 0.0], "#888888", "1", dash="4,3"))
    parts.append(_polyline(frame, xs, ys, "#000000"))
    parts.extend(_axes(frame, title, xlabel, ylabel))
    ox, oy = offset
    if ox or oy:
        return [f'<g transform="translate({_f(ox)} {_f(oy)})">'] + parts + ["</g>"]
    return parts


def curve_svg(path, curve, title, band=None):
    """Single summary curve, optionally with a grey envelope band."""
    body = _panel(
        curve.index, curve.values, title, "index", curve.statistic_kind,
        band=band,
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_document(body, 420.0, 300.0))


def panel_svg(path, curves, bands=None, title=""):
    """2 x 2 panel of the four summary statistics."""
    body = []
    positions = [(0.0, 0.0), (420.0, 0.0), (0.0, 300.0), (420.0, 300.0)]
    for (kind, curve), offset in zip(curves.items(), positions):
        band = None
        if bands is not None and kind in bands:
            band = (bands[kind].lower, bands[kind].upper)
        body.extend(
            _panel(curve.index, curve.values, kind, "index", "value",
                   band=band, offset=offset)
        )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_document(body, 840.0, 600.0))


def pattern_svg(path, seq, title="point pattern", disc_radii=None):
    """Point pattern in its window; optional display discs (e.g. 2xDBH)."""
    w = seq.window
    size = 420.0
    frame = Frame((w.xmin, w.xmax), (w.ymin, w.ymax), size, size, margin=30.0)
    scale = (size - 2 * frame.margin) / (w.xmax - w.xmin)
    parts = []
    if disc_radii is not None:
        for (x, y), r in zip(seq.points, disc_radii):
            parts.append(
                f'<circle cx="{_f(frame.px(x))}" cy="{_f(frame.py(y))}" '
                f'r="{_f(r * scale)}" fill="#dddddd" stroke="#999999" stroke-width="0.5"/>'
            )
    for x, y in seq.points:
        parts.append(
            f'<circle cx="{_f(frame.px(x))}" cy="{_f(frame.py(y))}" r="2" fill="#000000"/>'
        )
    parts.extend(_axes(frame, title, "x", "y"))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_document(parts, size, size))


def lcurve_svg(path, result, title="centered L-function"):
    """Data curve, global envelope band and zero reference."""
    body = _panel(
        result.data_curve.r_grid, result.data_curve.values, title, "r", "L(r) - r",
        band=(result.lower, result.upper), zero_line=True,
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_document(body, 420.0, 300.0))


def surface_svg(path, surface, title="log-likelihood surface"):
    """Heatmap of the (theta, r) grid, light = high."""
    import numpy as np

    surface = np.asarray(surface)
    thetas = np.unique(surface[:, 0])
    rs = np.unique(surface[:, 1])
    lls = surface[:, 2]
    finite = lls[np.isfinite(lls)]
    lo, hi = float(finite.min()), float(finite.max())
    span = hi - lo if hi > lo else 1.0
    frame = Frame((thetas.min(), thetas.max()), (rs.min(), rs.max()))
    cw = (frame.px(frame.x1) - frame.px(frame.x0)) / max(len(thetas), 1)
    ch = (frame.py(frame.y0) - frame.py(frame.y1)) / max(len(rs), 1)
    parts = []
    lookup = {(round(t, 12), round(r, 12)): v for t, r, v in surface}
    for i, t in enumerate(thetas):
        for j, r in enumerate(rs):
            v = lookup[(round(float(t), 12), round(float(r), 12))]
            shade = int(255 * (v - lo) / span) if math.isfinite(v) else 0
            color = f"#{shade:02x}{shade:02x}{shade:02x}"
            x = frame.px(frame.x0) + i * cw
            y = frame.py(frame.y1) + (len(rs) - 1 - j) * ch
            parts.append(
                f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(cw)}" height="{_f(ch)}" '
                f'fill="{color}" stroke="none"/>'
            )
    parts.extend(_axes(frame, title, "theta", "r"))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_document(parts, 420.0, 300.0))
