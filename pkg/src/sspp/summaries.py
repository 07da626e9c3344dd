"""Order-aware functional summary statistics and Monte-Carlo envelopes.

Four statistics per sequence: lagged clustering counts, first contact
distances, proper-zone fractions and ball-union coverage. Proper zone
and coverage share one incremental raster pass; envelopes simulate the
fitted model with the data's first two points fixed.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import ConfigError, DegenerateInputError, InvalidParameterError
from .geometry import CoverageRaster, default_cell_size
from .sampler import SimulationConfig, simulate, stream_rng

KINDS = ("lagged_clustering", "first_contact", "proper_zone", "ball_coverage")


@dataclass
class SummaryCurve:
    statistic_kind: str
    index: np.ndarray  # 1-based sequence positions
    values: np.ndarray
    cumulative: bool
    r_used: Optional[float] = None
    cell_size: Optional[float] = None


@dataclass
class EnvelopeBand:
    statistic_kind: str
    index: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    level: float
    n_replicates: int
    data_curve: SummaryCurve
    outside: np.ndarray  # per-index flag: data curve escapes the band
    n_outside: int


def lagged_clustering_curve(seq, r, cumulative=False):
    """Counts of earlier points within r of each new point; defined from index 2."""
    if r <= 0:
        raise InvalidParameterError(f"r must be positive, got {r}")
    n = len(seq)
    vals = np.empty(max(n - 1, 0))
    for k in range(1, n):
        vals[k - 1] = _kernels.count_within(seq.xs[:k], seq.ys[:k], seq.xs[k], seq.ys[k], r)
    if cumulative:
        vals = np.cumsum(vals)
    return SummaryCurve("lagged_clustering", np.arange(2, n + 1), vals, cumulative, r_used=r)


def first_contact_curve(seq, cumulative=False):
    """Distance from each new point to its nearest predecessor; from index 2."""
    n = len(seq)
    if n < 2:
        raise DegenerateInputError("first contact needs at least 2 points")
    vals = np.empty(n - 1)
    for k in range(1, n):
        vals[k - 1] = _kernels.min_dist(seq.xs[:k], seq.ys[:k], seq.xs[k], seq.ys[k])
    if cumulative:
        vals = np.cumsum(vals)
    return SummaryCurve("first_contact", np.arange(2, n + 1), vals, cumulative)


def _raster_pass(seq, r, cell_size):
    """Shared incremental pass: per-index newly covered area, own-ball area, coverage."""
    if cell_size is None:
        cell_size = default_cell_size(seq.window)
    raster = CoverageRaster(seq.window, cell_size)
    n = len(seq)
    deltas = np.empty(n)
    ball_areas = np.empty(n)
    coverage = np.empty(n)
    for k in range(n):
        center = (seq.xs[k], seq.ys[k])
        ball_areas[k] = raster.ball_area(center, r)
        deltas[k] = raster.add_disc(center, r)
        coverage[k] = raster.covered_area()
    return deltas, ball_areas, coverage, cell_size


def proper_zone_curve(seq, r, cell_size=None, cumulative=False):
    """Fraction of each new point's in-window ball not covered by earlier balls; from index 1."""
    if r <= 0:
        raise InvalidParameterError(f"r must be positive, got {r}")
    deltas, ball_areas, _, cell_size = _raster_pass(seq, r, cell_size)
    vals = np.where(ball_areas > 0, deltas / ball_areas, 0.0)
    if cumulative:
        vals = np.cumsum(vals)
    return SummaryCurve(
        "proper_zone", np.arange(1, len(seq) + 1), vals, cumulative,
        r_used=r, cell_size=cell_size,
    )


def ball_coverage_curve(seq, r, cell_size=None):
    """Window fraction covered by the union of balls up to each index; from index 1."""
    if r <= 0:
        raise InvalidParameterError(f"r must be positive, got {r}")
    _, _, coverage, cell_size = _raster_pass(seq, r, cell_size)
    vals = coverage / seq.window.area()
    return SummaryCurve(
        "ball_coverage", np.arange(1, len(seq) + 1), vals, False,
        r_used=r, cell_size=cell_size,
    )


def compute_curve(seq, kind, r, cell_size=None, cumulative=False):
    if kind == "lagged_clustering":
        return lagged_clustering_curve(seq, r, cumulative)
    if kind == "first_contact":
        return first_contact_curve(seq, cumulative)
    if kind == "proper_zone":
        return proper_zone_curve(seq, r, cell_size, cumulative)
    if kind == "ball_coverage":
        return ball_coverage_curve(seq, r, cell_size)
    raise ConfigError(f"unknown statistic kind {kind!r}")


def _all_curves(seq, kinds, r, cell_size, cumulative):
    out = {}
    if "proper_zone" in kinds or "ball_coverage" in kinds:
        deltas, ball_areas, coverage, cs = _raster_pass(seq, r, cell_size)
        if "proper_zone" in kinds:
            vals = np.where(ball_areas > 0, deltas / ball_areas, 0.0)
            if cumulative:
                vals = np.cumsum(vals)
            out["proper_zone"] = SummaryCurve(
                "proper_zone", np.arange(1, len(seq) + 1), vals, cumulative,
                r_used=r, cell_size=cs,
            )
        if "ball_coverage" in kinds:
            out["ball_coverage"] = SummaryCurve(
                "ball_coverage", np.arange(1, len(seq) + 1),
                coverage / seq.window.area(), False, r_used=r, cell_size=cs,
            )
    if "lagged_clustering" in kinds:
        out["lagged_clustering"] = lagged_clustering_curve(seq, r, cumulative)
    if "first_contact" in kinds:
        out["first_contact"] = first_contact_curve(seq, cumulative)
    return out


def _band_indices(m, level):
    """1-based order-statistic indices (lo, hi) for a pointwise level-band of m curves."""
    alpha = (1.0 - level) / 2.0
    i_lo = max(int(math.ceil(alpha * m)), 1)
    i_hi = m + 1 - i_lo
    return i_lo, i_hi


def _replicate_job(args):
    config, j, kinds, r, cell_size, cumulative = args
    seq = simulate(config, rng=stream_rng(config.seed, j))
    curves = _all_curves(seq, kinds, r, cell_size, cumulative)
    return {k: c.values for k, c in curves.items()}


def envelopes(data, params, kinds, replicates, level=0.95, seed=0,
              cell_size=None, cumulative=True, processes=1):
    """Pointwise Monte-Carlo bands for several statistics from one simulation batch.

    Replicates fix the data's first two points and match its length.
    Returns {kind: EnvelopeBand}.
    """
    if not 0.0 < level <= 1.0:
        raise ConfigError(f"level must be in (0,1], got {level}")
    if level < 1.0 and replicates < math.ceil(1.0 / (1.0 - level)) - 1:
        raise ConfigError(
            f"{replicates} replicates are too few for a level-{level} band"
        )
    kinds = tuple(kinds)
    for kind in kinds:
        if kind not in KINDS:
            raise ConfigError(f"unknown statistic kind {kind!r}")
    config = SimulationConfig(
        params=params,
        n_points=len(data),
        start_points=tuple(map(tuple, data.points[:2])) if len(data) >= 2 else None,
        seed=seed,
    )
    jobs = [(config, j, kinds, params.r, cell_size, cumulative) for j in range(replicates)]
    if processes and processes > 1:
        with ProcessPoolExecutor(max_workers=processes) as pool:
            results = list(pool.map(_replicate_job, jobs, chunksize=8))
    else:
        results = [_replicate_job(job) for job in jobs]

    data_curves = _all_curves(data, kinds, params.r, cell_size, cumulative)
    i_lo, i_hi = _band_indices(replicates, level)
    bands = {}
    for kind in kinds:
        mat = np.sort(np.stack([res[kind] for res in results]), axis=0)
        lower, upper = mat[i_lo - 1], mat[i_hi - 1]
        curve = data_curves[kind]
        outside = (curve.values < lower) | (curve.values > upper)
        bands[kind] = EnvelopeBand(
            statistic_kind=kind,
            index=curve.index,
            lower=lower,
            upper=upper,
            level=level,
            n_replicates=replicates,
            data_curve=curve,
            outside=outside,
            n_outside=int(outside.sum()),
        )
    return bands


def envelope(data, params, statistic_kind, replicates, level=0.95, seed=0,
             cell_size=None, cumulative=True, processes=1):
    """Pointwise Monte-Carlo band for one statistic (see `envelopes`)."""
    return envelopes(
        data, params, (statistic_kind,), replicates, level, seed,
        cell_size, cumulative, processes,
    )[statistic_kind]
