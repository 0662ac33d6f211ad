import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cumparisian.brownian_ruin import (cum_parisian_prob_bm, occ_density_bm, occ_distribution_bm,
                                       occupation_tail_bm, ruin_prob_bm, ruin_time_density_bm)
from cumparisian.levy_models import BrownianParams
from cumparisian.special_fn import adaptive_integrate, normal_tail

# Frozen library outputs at c = sigma = 1, t = 1, r = 0.1; cross-checked against
# 10^6-path grid Monte Carlo in the acceptance suite.
CUM_PARISIAN_X0 = 0.5510130149843696
CUM_PARISIAN_X05 = 0.16243194109250028

bm = st.builds(BrownianParams, c=st.floats(0.05, 3.0), sigma=st.floats(0.3, 3.0))


def ruin_cdf_closed(p, x, t):
    """Inverse-Gaussian CDF for the first passage of x + ct + sigma B below zero."""
    st_ = p.sigma * math.sqrt(t)
    return (normal_tail((x + p.c * t) / st_)
            + math.exp(-2 * p.c * x / p.sigma**2) * normal_tail((x - p.c * t) / st_))


def test_frozen_values(bm_ref):
    assert cum_parisian_prob_bm(bm_ref, 0.0, 0.1, 1.0) == pytest.approx(CUM_PARISIAN_X0, abs=1e-10)
    assert cum_parisian_prob_bm(bm_ref, 0.5, 0.1, 1.0) == pytest.approx(CUM_PARISIAN_X05, abs=1e-10)


@given(bm, st.floats(0.01, 3.0), st.floats(0.05, 10.0))
def test_ruin_probability_closed_form(p, x, t):
    assert ruin_prob_bm(p, x, t) == pytest.approx(ruin_cdf_closed(p, x, t), abs=1e-10)


@given(bm, st.floats(0.01, 3.0))
def test_first_passage_total_mass(p, x):
    assert ruin_prob_bm(p, x, math.inf) == pytest.approx(math.exp(-2 * p.c * x / p.sigma**2), abs=1e-10)


def test_first_passage_density_positive(bm_ref):
    u = np.geomspace(1e-3, 10, 30)
    assert np.all(ruin_time_density_bm(bm_ref, 0.5, u) > 0)
    with pytest.raises(ValueError):
        ruin_time_density_bm(bm_ref, 0.0, 1.0)


@pytest.mark.parametrize("c,sigma", [(1.0, 1.0), (0.5, 2.0)])
@pytest.mark.parametrize("t", [0.5, 1.0, 5.0])
def test_normalization(c, sigma, t):
    assert abs(occ_distribution_bm(BrownianParams(c, sigma), t).mass() - 1.0) <= 1e-6


def test_arcsine_limit():
    # tiny drift: P(occupation <= t/2) -> 1/2 and the density tends to the arcsine law
    p = BrownianParams(1e-6, 1.0)
    dist = occ_distribution_bm(p, 2.0)
    assert dist.cdf(1.0) == pytest.approx(0.5, abs=1e-5)
    s = 0.3
    assert occ_density_bm(p, 2.0, s) == pytest.approx(1 / (math.pi * math.sqrt(s * (2.0 - s))), rel=1e-5)


def test_density_domain(bm_ref):
    with pytest.raises(ValueError):
        occ_density_bm(bm_ref, 1.0, 1.0)
    with pytest.raises(ValueError):
        occ_density_bm(bm_ref, 1.0, 0.0)


def test_tail_helper_matches_distribution(bm_ref):
    taus = np.array([0.05, 0.3, 1.0, 2.5])
    tails = occupation_tail_bm(bm_ref, 0.1, taus)
    assert tails[0] == 0.0
    for tau, v in zip(taus[1:], tails[1:]):
        assert v == pytest.approx(occ_distribution_bm(bm_ref, tau).tail(0.1), abs=1e-12)


def test_x_zero_is_tail_of_occupation_law(bm_ref):
    assert cum_parisian_prob_bm(bm_ref, 0.0, 0.25, 1.0) == pytest.approx(
        1.0 - occ_distribution_bm(bm_ref, 1.0).cdf(0.25), abs=1e-10)


def test_small_capital_is_continuous(bm_ref):
    at0 = cum_parisian_prob_bm(bm_ref, 0.0, 0.1, 1.0)
    for x in (1e-12, 1e-8, 1e-5):
        assert cum_parisian_prob_bm(bm_ref, x, 0.1, 1.0) == pytest.approx(at0, abs=10 * x + 1e-9)


def test_convolution_by_brute_force(bm_ref):
    # integrate first-passage density x occupation tail directly on a plain grid
    x, r, t = 0.5, 0.1, 1.0
    f = lambda u: ruin_time_density_bm(bm_ref, x, u) * occupation_tail_bm(bm_ref, r, t - u)
    brute = adaptive_integrate(f, 1e-9, t - r, rel_tol=1e-8)
    assert cum_parisian_prob_bm(bm_ref, x, r, t) == pytest.approx(brute, abs=1e-8)


def test_r_beyond_horizon(bm_ref):
    assert cum_parisian_prob_bm(bm_ref, 0.5, 1.0, 1.0) == 0.0


@given(st.floats(0.0, 2.0), st.floats(0.05, 0.9))
def test_monotone_in_r_and_x(x, r):
    p = BrownianParams(1.0, 1.0)
    base = cum_parisian_prob_bm(p, x, r, 1.0)
    assert cum_parisian_prob_bm(p, x, min(r * 1.3, 0.99), 1.0) <= base + 1e-10
    assert cum_parisian_prob_bm(p, x + 0.2, r, 1.0) <= base + 1e-10
    assert cum_parisian_prob_bm(p, x, r, 1.5) >= base - 1e-10
    assert base <= ruin_prob_bm(p, x, 1.0) + 1e-10
