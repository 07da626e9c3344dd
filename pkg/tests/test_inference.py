import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from sspp.errors import ConfigError, DegenerateInputError
from sspp.geometry import Window
from sspp.inference import (
    FitConfig,
    bootstrap_ci,
    default_r_lower,
    fit,
    log_likelihood,
    loglik_from_profile,
    profile_data,
)
from sspp.model import ModelParams, PointSequence
from sspp.sampler import SimulationConfig, simulate
from tests.test_model import brute_normalizer

UNIT = Window(0, 0, 1, 1)


def test_too_few_points():
    seq = PointSequence([(0.5, 0.5)], UNIT)
    with pytest.raises(DegenerateInputError):
        log_likelihood(seq, ModelParams(0.3, 0.1, UNIT))


def test_theta_half_closed_form():
    rng = np.random.default_rng(1)
    w = Window(0, 0, 3, 2)
    seq = PointSequence(rng.random((12, 2)) * [3, 2], w)
    expected = -(len(seq) - 1) * math.log(w.area())
    for r in (0.05, 0.3, 1.0):
        got = log_likelihood(seq, ModelParams(0.5, r, w))
        assert got == pytest.approx(expected, rel=1e-12)


def test_theta_half_permutation_invariant():
    rng = np.random.default_rng(2)
    pts = rng.random((10, 2))
    base = log_likelihood(PointSequence(pts, UNIT), ModelParams(0.5, 0.2, UNIT))
    for _ in range(5):
        perm = rng.permutation(10)
        got = log_likelihood(PointSequence(pts[perm], UNIT), ModelParams(0.5, 0.2, UNIT))
        assert got == pytest.approx(base, rel=1e-12)


def test_brute_force_normalizer_oracle():
    # recompute every alpha_k by full-grid summation of the two-valued integrand
    pts = [(0.2, 0.3), (0.7, 0.6), (0.45, 0.85)]
    theta, r = 0.3, 0.2
    seq = PointSequence(pts, UNIT)
    got = log_likelihood(seq, ModelParams(theta, r, UNIT))

    expected = 0.0
    for k in range(1, len(pts)):
        y = pts[k]
        s = sum(1 for p in pts[:k] if math.hypot(p[0] - y[0], p[1] - y[1]) <= r)
        pi = theta if s >= 1 else 1 - theta
        alpha = brute_normalizer(pts[:k], theta, r, UNIT, n_grid=1000)
        expected += math.log(pi) - math.log(alpha)
    assert abs(got - expected) < 1e-2


def test_marks_do_not_affect_likelihood():
    rng = np.random.default_rng(3)
    pts = rng.random((8, 2))
    params = ModelParams(0.3, 0.15, UNIT)
    a = log_likelihood(PointSequence(pts, UNIT), params)
    b = log_likelihood(PointSequence(pts, UNIT, marks=np.arange(8.0) + 1), params)
    assert a == b


def test_default_r_lower():
    pts = [(0.1, 0.1), (0.6, 0.7)]
    marked = PointSequence(pts, UNIT, marks=[4.10, 23.15])
    assert default_r_lower(marked) == pytest.approx(0.11575)
    unmarked = PointSequence(pts, UNIT)
    assert default_r_lower(unmarked) == pytest.approx(1e-3)


def test_theta_profile_concave_matches_golden_section():
    # 1-D oracle on the theta profile at fixed r
    seq = simulate(SimulationConfig(
        params=ModelParams(0.25, 0.15, UNIT), n_points=60, seed=21,
    ))
    r = 0.15
    n_in, areas = profile_data(seq, r)

    def neg_profile(theta):
        return -loglik_from_profile(theta, n_in, areas, 1.0)

    oracle = minimize_scalar(neg_profile, bounds=(1e-6, 1 - 1e-6), method="bounded",
                             options={"xatol": 1e-10})
    config = FitConfig(r_grid=(r, r, 0.1), refine=True)
    result = fit(seq, config)
    assert result.r_hat == pytest.approx(r)
    assert result.theta_hat == pytest.approx(oracle.x, abs=1e-3)

    # concavity along the theta grid
    thetas = np.linspace(0.05, 0.95, 41)
    vals = np.array([-neg_profile(t) for t in thetas])
    second_diff = vals[:-2] - 2 * vals[1:-1] + vals[2:]
    assert (second_diff <= 1e-9).all()


def test_fit_surface_shape_and_argmax_consistency():
    seq = simulate(SimulationConfig(
        params=ModelParams(0.7, 0.12, UNIT), n_points=50, seed=5,
    ))
    config = FitConfig(theta_grid=(0.1, 0.9, 0.2), r_grid=(0.05, 0.25, 0.05),
                      refine=False)
    result = fit(seq, config)
    assert result.surface.shape == (5 * 5, 3)
    best_row = result.surface[np.argmax(result.surface[:, 2])]
    assert result.max_loglik == pytest.approx(best_row[2])
    assert result.theta_hat == result.grid_theta_hat
    assert result.diagnostics["raster_refinement_delta"] >= 0.0


def test_refine_never_worse_than_grid():
    seq = simulate(SimulationConfig(
        params=ModelParams(0.3, 0.15, UNIT), n_points=60, seed=13,
    ))
    config = FitConfig(theta_grid=(0.1, 0.9, 0.1), r_grid=(0.05, 0.3, 0.05))
    result = fit(seq, config)
    assert result.max_loglik >= result.grid_max_loglik
    assert 0.0 < result.theta_hat < 1.0
    assert 0.05 <= result.r_hat <= 0.3


def test_fit_deterministic():
    seq = simulate(SimulationConfig(
        params=ModelParams(0.3, 0.15, UNIT), n_points=40, seed=1,
    ))
    config = FitConfig(theta_grid=(0.1, 0.9, 0.2), r_grid=(0.05, 0.25, 0.1))
    a, b = fit(seq, config), fit(seq, config)
    assert a.theta_hat == b.theta_hat and a.r_hat == b.r_hat
    np.testing.assert_array_equal(a.surface, b.surface)


def test_fit_parallel_matches_serial():
    seq = simulate(SimulationConfig(
        params=ModelParams(0.3, 0.15, UNIT), n_points=40, seed=1,
    ))
    serial = fit(seq, FitConfig(theta_grid=(0.1, 0.9, 0.2), r_grid=(0.05, 0.25, 0.1),
                                refine=False, processes=1))
    parallel = fit(seq, FitConfig(theta_grid=(0.1, 0.9, 0.2), r_grid=(0.05, 0.25, 0.1),
                                  refine=False, processes=2))
    np.testing.assert_array_equal(serial.surface, parallel.surface)


def test_invalid_grids_rejected():
    with pytest.raises(ConfigError):
        FitConfig(theta_grid=(0.0, 0.9, 0.1))
    with pytest.raises(ConfigError):
        FitConfig(r_grid=(0.5, 0.2, 0.1))
    with pytest.raises(ConfigError):
        FitConfig(theta_grid=(0.1, 0.9, -0.1))


def test_bootstrap_ci_quantiles_and_determinism():
    seq = simulate(SimulationConfig(
        params=ModelParams(0.25, 0.15, UNIT), n_points=50, seed=30,
    ))
    config = FitConfig(theta_grid=(0.1, 0.9, 0.2), r_grid=(0.1, 0.2, 0.05),
                      refine=False, bootstrap_replicates=12, seed=99)
    result = fit(seq, config)
    theta_ci, r_ci = bootstrap_ci(seq, result, config)
    assert theta_ci[0] <= theta_ci[1]
    assert r_ci[0] <= r_ci[1]
    result2 = fit(seq, config)
    theta_ci2, r_ci2 = bootstrap_ci(seq, result2, config)
    assert theta_ci == theta_ci2 and r_ci == r_ci2


def test_degenerate_quantiles_zero_width():
    # identical replicate estimates collapse to a zero-width interval
    est = np.full(20, 0.42)
    lo, hi = np.quantile(est, [0.025, 0.975])
    assert lo == hi == 0.42
