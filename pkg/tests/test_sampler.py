import math

import numpy as np
import pytest
from scipy.stats import chisquare

from sspp.errors import InvalidParameterError, SimulationStallError
from sspp.geometry import Window
from sspp.model import ModelParams
from sspp.sampler import SimulationConfig, simulate, simulate_batch, stream_rng

UNIT = Window(0, 0, 1, 1)


def make_config(theta=0.5, r=0.1, n=100, seed=0, **kw):
    return SimulationConfig(
        params=ModelParams(theta, r, UNIT), n_points=n, seed=seed, **kw
    )


class TestConfigValidation:
    def test_bad_n(self):
        with pytest.raises(InvalidParameterError):
            make_config(n=0)

    def test_start_outside_window(self):
        with pytest.raises(InvalidParameterError):
            make_config(start_points=((2.0, 0.5),))

    def test_duplicate_starts(self):
        with pytest.raises(InvalidParameterError):
            make_config(start_points=((0.5, 0.5), (0.5, 0.5)))


def test_start_points_verbatim():
    starts = ((0.90, 0.50), (0.60, 0.92))
    seq = simulate(make_config(theta=0.95, n=20, start_points=starts, seed=3))
    assert tuple(seq.points[0]) == starts[0]
    assert tuple(seq.points[1]) == starts[1]


def test_determinism():
    a = simulate(make_config(theta=0.2, seed=42))
    b = simulate(make_config(theta=0.2, seed=42))
    np.testing.assert_array_equal(a.points, b.points)
    c = simulate(make_config(theta=0.2, seed=43))
    assert not np.array_equal(a.points, c.points)


def test_all_points_inside_window():
    seq = simulate(make_config(theta=0.95, n=200, seed=9))
    assert (seq.points >= 0).all() and (seq.points <= 1).all()


def test_theta_half_is_uniform():
    # the conditional density collapses to uniform; 4x4 bin chi-square
    seq = simulate(make_config(theta=0.5, r=0.2, n=1000, seed=7))
    binned, _, _ = np.histogram2d(
        seq.points[:, 0], seq.points[:, 1], bins=4, range=[[0, 1], [0, 1]]
    )
    _, p = chisquare(binned.ravel())
    assert p > 0.001


@pytest.mark.parametrize("theta,r", [(0.2, 0.1), (0.8, 0.1), (0.5, 0.3)])
def test_next_point_law_single_past_point(theta, r):
    # analytic acceptance-probability oracle for the inside-ball frequency
    past = (0.5, 0.5)
    config = SimulationConfig(
        params=ModelParams(theta, r, UNIT), n_points=2, start_points=(past,), seed=0
    )
    rng = stream_rng(1234)
    n_draws = 20_000
    inside_count = 0
    for _ in range(n_draws):
        x, y = simulate(config, rng=rng).points[1]
        inside_count += (x - past[0]) ** 2 + (y - past[1]) ** 2 <= r * r
    ball = math.pi * r * r
    p_expected = theta * ball / (theta * ball + (1 - theta) * (1 - ball))
    se = math.sqrt(p_expected * (1 - p_expected) / n_draws)
    assert abs(inside_count / n_draws - p_expected) <= 3 * se


def test_stall_error_reports_state():
    config = make_config(theta=0.95, n=10, seed=5, max_rejects_per_point=1,
                         start_points=((0.5, 0.5),))
    with pytest.raises(SimulationStallError, match="theta=0.95"):
        simulate(config)


class TestBatch:
    def test_deterministic(self):
        config = make_config(theta=0.3, n=30, seed=11)
        a = simulate_batch(config, 5)
        b = simulate_batch(config, 5)
        for sa, sb in zip(a, b):
            np.testing.assert_array_equal(sa.points, sb.points)

    def test_replicates_differ(self):
        batch = simulate_batch(make_config(theta=0.3, n=30, seed=11), 3)
        assert not np.array_equal(batch[0].points, batch[1].points)

    def test_parallel_matches_serial(self):
        config = make_config(theta=0.7, n=25, seed=2)
        serial = simulate_batch(config, 6, processes=1)
        parallel = simulate_batch(config, 6, processes=2)
        for s, p in zip(serial, parallel):
            np.testing.assert_array_equal(s.points, p.points)

    def test_prefix_stability(self):
        # replicate j is the same regardless of how many replicates run
        config = make_config(theta=0.3, n=20, seed=4)
        short = simulate_batch(config, 3)
        long = simulate_batch(config, 8)
        for s, l in zip(short, long):
            np.testing.assert_array_equal(s.points, l.points)
