"""Rectangular windows, points, and rasterized disc-union areas.

The coverage raster discretizes the window with the midpoint rule:
a cell counts as covered iff its midpoint lies inside some disc.
Boundary cells are clipped so the cell areas sum exactly to the
window area.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import InvalidDiscretizationError, InvalidParameterError


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Window:
    """Axis-aligned rectangular observation window."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise InvalidParameterError(
                f"degenerate window: ({self.xmin},{self.ymin},{self.xmax},{self.ymax})"
            )

    @property
    def width(self):
        return self.xmax - self.xmin

    @property
    def height(self):
        return self.ymax - self.ymin

    @property
    def shorter_side(self):
        return min(self.width, self.height)

    def area(self):
        return self.width * self.height

    def contains(self, x, y):
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax


def distance(a, b):
    """Euclidean distance between two points."""
    return math.hypot(a[0] - b[0], a[1] - b[1])


def default_cell_size(window):
    """Default raster resolution: shorter window side / 200."""
    return window.shorter_side / 200.0


def _axis(lo, hi, h):
    """Clipped cell edges, midpoints and widths along one axis."""
    n = math.ceil((hi - lo) / h)
    edges = lo + h * np.arange(n + 1)
    edges[-1] = hi
    mids = 0.5 * (edges[:-1] + edges[1:])
    widths = np.diff(edges)
    return mids, widths


class CoverageRaster:
    """Discretized indicator of a union of discs clipped to a window.

    Cells are covered/uncovered flags; covered area is maintained
    incrementally as discs are added.
    """

    def __init__(self, window, cell_size):
        if cell_size <= 0 or cell_size >= window.shorter_side:
            raise InvalidDiscretizationError(
                f"cell_size {cell_size} invalid for window sides "
                f"{window.width} x {window.height}"
            )
        self.window = window
        self.cell_size = cell_size
        self.mx, self.wx = _axis(window.xmin, window.xmax, cell_size)
        self.my, self.wy = _axis(window.ymin, window.ymax, cell_size)
        self.cells = np.zeros((self.my.size, self.mx.size), dtype=np.uint8)
        self.covered_count = 0
        self._covered_area = 0.0

    @property
    def shape(self):
        return self.cells.shape

    def covered_area(self):
        return self._covered_area

    def _bounds(self, cx, cy, radius):
        i0 = int(np.searchsorted(self.mx, cx - radius, side="left"))
        i1 = int(np.searchsorted(self.mx, cx + radius, side="right"))
        j0 = int(np.searchsorted(self.my, cy - radius, side="left"))
        j1 = int(np.searchsorted(self.my, cy + radius, side="right"))
        return i0, i1, j0, j1

    def add_disc(self, center, radius):
        """Cover all cells within `radius` of `center`; return newly covered area.

        Centers outside the window are fine: only the in-window part
        is rasterized. Adding the same disc twice yields 0.
        """
        if radius <= 0:
            raise InvalidParameterError(f"disc radius must be positive, got {radius}")
        i0, i1, j0, j1 = self._bounds(center[0], center[1], radius)
        delta, count = _kernels.add_disc(
            self.cells, self.mx, self.my, self.wx, self.wy,
            center[0], center[1], radius, i0, i1, j0, j1,
        )
        self.covered_count += count
        self._covered_area += delta
        return delta

    def ball_area(self, center, radius):
        """Rasterized area of one disc clipped to the window (coverage-independent)."""
        if radius <= 0:
            raise InvalidParameterError(f"disc radius must be positive, got {radius}")
        i0, i1, j0, j1 = self._bounds(center[0], center[1], radius)
        return _kernels.ball_area(
            self.mx, self.my, self.wx, self.wy,
            center[0], center[1], radius, i0, i1, j0, j1,
        )

    def copy(self):
        other = CoverageRaster.__new__(CoverageRaster)
        other.window = self.window
        other.cell_size = self.cell_size
        other.mx, other.wx = self.mx, self.wx
        other.my, other.wy = self.my, self.wy
        other.cells = self.cells.copy()
        other.covered_count = self.covered_count
        other._covered_area = self._covered_area
        return other


def union_disc_area(points, radius, window, cell_size=None):
    """Area of the union of discs of given radius around `points`, clipped to `window`."""
    if cell_size is None:
        cell_size = default_cell_size(window)
    raster = CoverageRaster(window, cell_size)
    for p in points:
        raster.add_disc(p, radius)
    return raster.covered_area()
