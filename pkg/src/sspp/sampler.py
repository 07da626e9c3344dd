"""Sequential accept-reject simulation with reproducible RNG streams.

Proposals are uniform on the window; a proposal y is accepted with
probability pi(y) / max(theta, 1-theta), which yields exactly the
model's conditional density. Replicate streams come from a
counter-based generator keyed on (seed, replicate index), so batches
are reproducible and independent of execution order.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .errors import InvalidParameterError, SimulationStallError
from .model import ModelParams, PointSequence


@dataclass(frozen=True)
class SimulationConfig:
    params: ModelParams
    n_points: int
    start_points: Optional[tuple] = None
    seed: int = 0
    max_rejects_per_point: int = 1_000_000

    def __post_init__(self):
        if self.n_points < 1:
            raise InvalidParameterError(f"n_points must be >= 1, got {self.n_points}")
        if self.max_rejects_per_point < 1:
            raise InvalidParameterError("max_rejects_per_point must be >= 1")
        if self.start_points is not None:
            pts = [tuple(map(float, p)) for p in self.start_points]
            w = self.params.window
            for p in pts:
                if not w.contains(p[0], p[1]):
                    raise InvalidParameterError(f"start point {p} lies outside the window")
            if len(set(pts)) != len(pts):
                raise InvalidParameterError("start points must be distinct")
            if len(pts) > self.n_points:
                raise InvalidParameterError("more start points than n_points")
            object.__setattr__(self, "start_points", tuple(pts))


def stream_rng(seed, *key):
    """Independent reproducible generator for (seed, key...): Philox, counter-based."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=key))
    )


def simulate(config, rng=None):
    """Draw one realization of the model; deterministic given (config.seed)."""
    if rng is None:
        rng = stream_rng(config.seed)
    params = config.params
    w = params.window
    theta, r = params.theta, params.r
    envelope = max(theta, 1.0 - theta)
    n = config.n_points

    xs = np.empty(n)
    ys = np.empty(n)
    k = 0
    if config.start_points:
        for p in config.start_points:
            xs[k], ys[k] = p
            k += 1

    while k < n:
        if k == 0:
            # first point: uniform on W, no interaction yet
            xs[0] = w.xmin + w.width * rng.random()
            ys[0] = w.ymin + w.height * rng.random()
            k = 1
            continue
        accepted = False
        for _ in range(config.max_rejects_per_point):
            px = w.xmin + w.width * rng.random()
            py = w.ymin + w.height * rng.random()
            inside = _kernels.any_within(xs[:k], ys[:k], px, py, r)
            pi = theta if inside else 1.0 - theta
            if rng.random() * envelope <= pi:
                xs[k], ys[k] = px, py
                k += 1
                accepted = True
                break
        if not accepted:
            raise SimulationStallError(
                f"accept-reject exceeded {config.max_rejects_per_point} proposals "
                f"at point {k + 1} (theta={theta}, r={r}, {k} points placed)"
            )

    return PointSequence(np.column_stack([xs, ys]), w)


def _simulate_replicate(args):
    config, j = args
    try:
        return simulate(config, rng=stream_rng(config.seed, j))
    except SimulationStallError as exc:
        raise SimulationStallError(f"replicate {j}: {exc}") from exc


def simulate_batch(config, replicates, processes=1):
    """Simulate `replicates` independent realizations.

    Replicate j uses the stream (seed, j); the output list is ordered
    by replicate index regardless of scheduling, so serial and
    parallel runs agree bit for bit.
    """
    if replicates < 1:
        raise InvalidParameterError(f"replicates must be >= 1, got {replicates}")
    jobs = [(config, j) for j in range(replicates)]
    if processes and processes > 1:
        with ProcessPoolExecutor(max_workers=processes) as pool:
            return list(pool.map(_simulate_replicate, jobs, chunksize=8))
    return [_simulate_replicate(job) for job in jobs]
