"""Occupation times and cumulative Parisian ruin for Cramer-Lundberg and Brownian surplus processes."""

from .levy_models import BrownianParams, CramerLundbergParams, lundberg_roots, phi, psi
from .cl_ruin import (
    classical_ruin_prob_cl,
    cum_parisian_prob_cl,
    exp_parisian_prob_cl,
    k_correction,
    occ_distribution_x,
    occ_distribution_zero,
    survival_x,
    survival_zero,
)
from .brownian_ruin import cum_parisian_prob_bm, occ_distribution_bm, ruin_prob_bm
from .laplace_check import closed_dlt_x, closed_dlt_zero, numeric_dlt
from .occupation import OccupationDistribution
from .special_fn import QuadratureError

__version__ = "0.1.0"

__all__ = [
    "BrownianParams", "CramerLundbergParams", "OccupationDistribution", "QuadratureError",
    "classical_ruin_prob_cl", "closed_dlt_x", "closed_dlt_zero", "cum_parisian_prob_bm",
    "cum_parisian_prob_cl", "exp_parisian_prob_cl", "k_correction", "lundberg_roots",
    "numeric_dlt", "occ_distribution_bm", "occ_distribution_x", "occ_distribution_zero",
    "phi", "psi", "ruin_prob_bm", "survival_x", "survival_zero",
]
