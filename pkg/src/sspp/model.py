"""The self-interactive sequential point process model.

Each new point is reweighted by a two-valued interaction function:
probability mass theta inside the union of r-balls around the earlier
points, 1 - theta outside. Conditional densities are normalized over
the window through the rasterized covered area.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .errors import DomainError, InvalidParameterError
from .geometry import CoverageRaster, Window, default_cell_size


@dataclass(frozen=True)
class ModelParams:
    """Self-interaction parameters (theta, r) on a given window."""

    theta: float
    r: float
    window: Window

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise InvalidParameterError(
                f"theta must be in the open interval (0,1), got {self.theta}"
            )
        if self.r <= 0:
            raise InvalidParameterError(f"r must be positive, got {self.r}")


class PointSequence:
    """Ordered locations in a window, optionally carrying marks (e.g. DBH in cm).

    The order is part of the value: it is fixed at construction and
    stands in for time.
    """

    def __init__(self, points, window, marks=None):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise InvalidParameterError(f"points must be (n, 2), got {pts.shape}")
        if not np.isfinite(pts).all():
            raise InvalidParameterError("points contain non-finite coordinates")
        inside = (
            (pts[:, 0] >= window.xmin) & (pts[:, 0] <= window.xmax)
            & (pts[:, 1] >= window.ymin) & (pts[:, 1] <= window.ymax)
        )
        if not inside.all():
            bad = int(np.flatnonzero(~inside)[0])
            raise DomainError(f"point {bad} at {tuple(pts[bad])} lies outside the window")
        if len(np.unique(pts, axis=0)) != len(pts):
            raise InvalidParameterError("points must be distinct")
        if marks is not None:
            marks = np.asarray(marks, dtype=float)
            if marks.shape != (len(pts),):
                raise InvalidParameterError("marks length must match points")
        self.points = pts
        self.points.setflags(write=False)
        self.window = window
        self.marks = marks
        # split coordinate views for the distance kernels
        self.xs = np.ascontiguousarray(pts[:, 0])
        self.ys = np.ascontiguousarray(pts[:, 1])

    def __len__(self):
        return len(self.points)

    def prefix_xy(self, k):
        return self.xs[:k], self.ys[:k]


def lagged_clustering(past_points, y, r):
    """Number of earlier points whose r-ball contains y (closed balls).

    `past_points` is an (k, 2) array-like; empty past gives 0.
    """
    if r <= 0:
        raise InvalidParameterError(f"r must be positive, got {r}")
    pts = np.asarray(past_points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return 0
    return _kernels.count_within(
        np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1]),
        float(y[0]), float(y[1]), r,
    )


def self_interaction(s, theta):
    """Two-valued reweighting: theta if s >= 1 (inside some earlier ball), else 1 - theta."""
    if s < 0:
        raise InvalidParameterError(f"count must be non-negative, got {s}")
    return theta if s >= 1 else 1.0 - theta


def normalizer(params, covered_area):
    """Normalizing constant given the covered area of the past ball union.

    The integrand is two-valued on covered/uncovered regions, so the
    integral collapses to theta*A + (1-theta)*(|W| - A).
    """
    area = params.window.area()
    return params.theta * covered_area + (1.0 - params.theta) * (area - covered_area)


def conditional_log_density(past_points, y, params, raster):
    """Log density of the next point at y given the past, on the raster's coverage state.

    `raster` must currently rasterize the union of r-balls around
    `past_points` intersected with the window.
    """
    if not params.window.contains(y[0], y[1]):
        raise DomainError(f"evaluation point {tuple(y)} lies outside the window")
    s = lagged_clustering(past_points, y, params.r)
    alpha = normalizer(params, raster.covered_area())
    return math.log(self_interaction(s, params.theta)) - math.log(alpha)


def first_point_log_density(x1, window):
    """Log density of the first point: uniform on the window."""
    if not window.contains(x1[0], x1[1]):
        raise DomainError(f"first point {tuple(x1)} lies outside the window")
    return -math.log(window.area())


@dataclass(frozen=True)
class PiOfRReport:
    """Piecewise-constant interaction probability as a function of the radius.

    Zero below the stem scale (stems cannot overlap), theta from there
    up to the fitted radius, 1 - theta beyond. `stem_radius` is
    max-DBH/200 m (the value used as the lower fitting bound);
    `first_knot` is the diameter max-DBH/100 m (the knot used in the
    reported piecewise function).
    """

    theta: float
    r_hat: float
    stem_radius: float
    first_knot: float
    segments: tuple = field(default=())  # ((lo, hi, value), ...)


def pi_of_r_report(params, mark_max):
    """Describe the interaction probability across radius ranges for a fitted model.

    `mark_max` is the maximum DBH in cm.
    """
    if mark_max <= 0:
        raise InvalidParameterError(f"mark_max must be positive, got {mark_max}")
    stem_radius = mark_max / 200.0
    first_knot = mark_max / 100.0
    segments = (
        (0.0, first_knot, 0.0),
        (first_knot, params.r, params.theta),
        (params.r, math.inf, 1.0 - params.theta),
    )
    return PiOfRReport(
        theta=params.theta,
        r_hat=params.r,
        stem_radius=stem_radius,
        first_knot=first_knot,
        segments=segments,
    )


def sequence_raster(seq, r, cell_size=None, upto=None):
    """Raster covering the union of r-balls around the first `upto` points of `seq`."""
    if cell_size is None:
        cell_size = default_cell_size(seq.window)
    raster = CoverageRaster(seq.window, cell_size)
    n = len(seq) if upto is None else upto
    for i in range(n):
        raster.add_disc(seq.points[i], r)
    return raster
