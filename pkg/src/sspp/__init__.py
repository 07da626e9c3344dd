"""Self-interactive sequential spatial point process models.

Ordered point sequences with a two-valued self-interaction density:
exact sequential likelihood, grid + Nelder-Mead fitting, accept-reject
simulation, order-aware summary statistics with Monte-Carlo envelopes,
and a CSR pre-test via the centered L-function with ERL global
envelopes.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .geometry import CoverageRaster, Point, Window, distance, union_disc_area
from .inference import FitConfig, FitResult, bootstrap_ci, fit, log_likelihood
from .model import (
    ModelParams,
    PointSequence,
    conditional_log_density,
    first_point_log_density,
    lagged_clustering,
    normalizer,
    pi_of_r_report,
    self_interaction,
)
from .sampler import SimulationConfig, simulate, simulate_batch
from .summaries import (
    EnvelopeBand,
    SummaryCurve,
    ball_coverage_curve,
    envelope,
    envelopes,
    first_contact_curve,
    lagged_clustering_curve,
    proper_zone_curve,
)
from .csr import GlobalEnvelopeResult, LCurve, centered_l, erl_global_test, k_estimate

__all__ = [
    "KERNEL_BACKEND",
    "CoverageRaster", "Point", "Window", "distance", "union_disc_area",
    "FitConfig", "FitResult", "bootstrap_ci", "fit", "log_likelihood",
    "ModelParams", "PointSequence", "conditional_log_density",
    "first_point_log_density", "lagged_clustering", "normalizer",
    "pi_of_r_report", "self_interaction",
    "SimulationConfig", "simulate", "simulate_batch",
    "EnvelopeBand", "SummaryCurve", "ball_coverage_curve", "envelope",
    "envelopes", "first_contact_curve", "lagged_clustering_curve",
    "proper_zone_curve",
    "GlobalEnvelopeResult", "LCurve", "centered_l", "erl_global_test", "k_estimate",
]
