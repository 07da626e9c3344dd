"""Pure-numpy implementations of the hot kernels.

Signature-compatible with the compiled extension in ``_core.pyx``;
the backend is selected once at import time in ``__init__``.
"""

import numpy as np

BACKEND = "python"


def add_disc(covered, mx, my, wx, wy, cx, cy, r, i0, i1, j0, j1):
    """Mark all cells with midpoint within r of (cx, cy) as covered.

    Only the index box [j0:j1, i0:i1] is touched. Returns
    (newly covered area, newly covered cell count).
    """
    if i0 >= i1 or j0 >= j1:
        return 0.0, 0
    dx2 = (mx[i0:i1] - cx) ** 2
    dy2 = (my[j0:j1] - cy) ** 2
    inside = dy2[:, None] + dx2[None, :] <= r * r
    sub = covered[j0:j1, i0:i1]
    new = inside & (sub == 0)
    count = int(np.count_nonzero(new))
    if count == 0:
        return 0.0, 0
    area = float((wy[j0:j1, None] * wx[None, i0:i1])[new].sum())
    sub[new] = 1
    return area, count


def ball_area(mx, my, wx, wy, cx, cy, r, i0, i1, j0, j1):
    """Rasterized area of the disc B((cx,cy), r) clipped to the window."""
    if i0 >= i1 or j0 >= j1:
        return 0.0
    dx2 = (mx[i0:i1] - cx) ** 2
    dy2 = (my[j0:j1] - cy) ** 2
    inside = dy2[:, None] + dx2[None, :] <= r * r
    return float((wy[j0:j1, None] * wx[None, i0:i1])[inside].sum())


def count_within(xs, ys, px, py, r):
    """Number of points (xs, ys) within distance r of (px, py)."""
    d2 = (xs - px) ** 2 + (ys - py) ** 2
    return int(np.count_nonzero(d2 <= r * r))


def any_within(xs, ys, px, py, r):
    """True if any point of (xs, ys) lies within distance r of (px, py)."""
    d2 = (xs - px) ** 2 + (ys - py) ** 2
    return bool((d2 <= r * r).any())


def min_dist(xs, ys, px, py):
    """Minimum Euclidean distance from (px, py) to the points (xs, ys)."""
    d2 = (xs - px) ** 2 + (ys - py) ** 2
    return float(np.sqrt(d2.min()))
