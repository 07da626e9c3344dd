import math

import numpy as np
import pytest

from sspp.csr import (
    centered_l,
    default_r_grid,
    erl_global_test,
    erl_order_keys,
    k_estimate,
)
from sspp.errors import ConfigError, DegenerateInputError
from sspp.geometry import Window

UNIT = Window(0, 0, 1, 1)


class TestKEstimate:
    def test_two_points_below_distance(self):
        pts = [(0.2, 0.2), (0.2, 0.6)]
        k = k_estimate(pts, UNIT, [0.1, 0.3])
        np.testing.assert_array_equal(k, [0.0, 0.0])

    def test_two_points_at_distance(self):
        pts = [(0.2, 0.2), (0.2, 0.6)]
        k = k_estimate(pts, UNIT, [0.4, 0.45])
        # indicator sum is 2 ordered pairs: |W| * 2 / (2 * 1)
        np.testing.assert_allclose(k, [1.0, 1.0])

    def test_monotone(self):
        rng = np.random.default_rng(2)
        pts = rng.random((60, 2))
        k = k_estimate(pts, UNIT, np.linspace(0, 0.5, 50))
        assert (np.diff(k) >= 0).all()

    def test_degenerate(self):
        with pytest.raises(DegenerateInputError):
            k_estimate([(0.5, 0.5)], UNIT, [0.1])

    def test_r_max_beyond_half_side(self):
        with pytest.raises(ConfigError):
            k_estimate([(0.1, 0.1), (0.9, 0.9)], UNIT, [0.8])

    def test_csr_mean_matches_pi_r_squared_at_small_r(self):
        # Monte-Carlo oracle: without edge correction the bias is small at small r
        rng = np.random.default_rng(55)
        r_grid = np.array([0.02, 0.05])
        acc = np.zeros_like(r_grid)
        reps = 400
        for _ in range(reps):
            pts = rng.random((500, 2))
            acc += k_estimate(pts, UNIT, r_grid)
        mean_k = acc / reps
        np.testing.assert_allclose(mean_k, math.pi * r_grid**2, rtol=0.12)


class TestCenteredL:
    def test_zero_under_exact_poisson_k(self):
        # K = pi r^2 exactly -> centered L is 0: check the algebra directly
        r = np.linspace(0.01, 0.4, 10)
        assert np.allclose(np.sqrt((math.pi * r**2) / math.pi) - r, 0.0)

    def test_clustered_direction(self):
        r = 0.2
        assert np.sqrt((4 * math.pi * r**2) / math.pi) - r == pytest.approx(r)

    def test_curve_starts_at_zero(self):
        rng = np.random.default_rng(1)
        curve = centered_l(rng.random((50, 2)), UNIT, default_r_grid(0.4, 65))
        assert curve.values[0] == 0.0


class TestErlOrdering:
    def test_grid_permutation_invariant_keys(self):
        rng = np.random.default_rng(3)
        curves = rng.normal(size=(20, 30))
        keys = erl_order_keys(curves)
        perm = rng.permutation(30)
        keys_perm = erl_order_keys(curves[:, perm])
        np.testing.assert_array_equal(keys, keys_perm)

    def test_monotone_rescaling_invariant(self):
        rng = np.random.default_rng(13)
        curves = rng.normal(size=(15, 25))
        np.testing.assert_array_equal(
            erl_order_keys(curves), erl_order_keys(2.0 * curves + 5.0)
        )


class TestGlobalTest:
    def test_p_value_is_multiple_of_attainable_resolution(self):
        rng = np.random.default_rng(10)
        pts = rng.random((40, 2))
        res = erl_global_test(pts, UNIT, n_sim=99, r_grid=default_r_grid(0.4, 33), seed=1)
        assert (res.p_value * 100) == pytest.approx(round(res.p_value * 100))
        assert 0 < res.p_value <= 1

    def test_blatant_cluster_is_most_extreme(self):
        # all points crowded in one corner: minimum attainable p-value
        pts = np.column_stack([
            np.linspace(0.01, 0.05, 30),
            np.linspace(0.01, 0.05, 30) ** 2 + 0.01,
        ])
        res = erl_global_test(pts, UNIT, n_sim=99, r_grid=default_r_grid(0.4, 33), seed=2)
        assert res.p_value == pytest.approx(1 / 100)

    def test_band_contains_central_curves(self):
        rng = np.random.default_rng(30)
        pts = rng.random((40, 2))
        res = erl_global_test(pts, UNIT, n_sim=199, r_grid=default_r_grid(0.4, 33), seed=3)
        assert (res.lower <= res.upper).all()

    def test_deterministic(self):
        rng = np.random.default_rng(6)
        pts = rng.random((30, 2))
        a = erl_global_test(pts, UNIT, n_sim=99, r_grid=default_r_grid(0.3, 17), seed=9)
        b = erl_global_test(pts, UNIT, n_sim=99, r_grid=default_r_grid(0.3, 17), seed=9)
        assert a.p_value == b.p_value
        np.testing.assert_array_equal(a.lower, b.lower)

    def test_too_few_sims_rejected(self):
        rng = np.random.default_rng(6)
        with pytest.raises(ConfigError):
            erl_global_test(rng.random((30, 2)), UNIT, n_sim=50)
