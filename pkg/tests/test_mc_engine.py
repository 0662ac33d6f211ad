import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cumparisian import mc_engine
from cumparisian.brownian_ruin import occ_distribution_bm, ruin_prob_bm
from cumparisian.cl_ruin import exp_parisian_prob_cl
from cumparisian.levy_models import BrownianParams, CramerLundbergParams
from cumparisian.mc_engine import (Estimate, PathSample, engine_path, estimate_kappa_q,
                                   estimate_sigma_r, estimate_tau0, estimate_tau_r, simulate,
                                   simulate_bm, simulate_bm_occupation, simulate_cl_path)


def test_single_jump_crossing_algebra():
    # one claim at 0.3 taking the level from 0.6 + 0.3 c to -0.4: back after 0.4 / c
    path = PathSample(x=0.6, horizon=1.0, c=2.0, jump_times=np.array([0.3]), jump_sizes=np.array([1.6]))
    assert path.excursions == [(0.3, 0.5, False)]
    assert path.occupation_time == pytest.approx(0.2, abs=1e-15)


def test_truncated_excursion():
    path = PathSample(x=0.0, horizon=1.0, c=1.0, jump_times=np.array([0.5]), jump_sizes=np.array([5.0]))
    assert path.excursions == [(0.5, 1.0, True)]
    assert path.longest_excursion == 0.5


def test_no_claims_no_occupation():
    rng = np.random.default_rng(0)
    m = CramerLundbergParams(c=1.0, lam=1e-9, alpha=1.0)
    assert all(simulate_cl_path(m, 0.0, 1.0, rng).occupation_time == 0.0 for _ in range(100))


def test_jump_count_is_poisson(cl_ref):
    rng = np.random.default_rng(1)
    counts = np.array([simulate_cl_path(cl_ref, 1.0, 3.0, rng).jump_times.size for _ in range(20000)])
    assert abs(counts.mean() - 3.0) < 4 * math.sqrt(3.0 / counts.size)
    assert abs(counts.var() - 3.0) < 0.15


def test_exactness_audit(cl_ref):
    """Brute-force fine-grid occupation agrees with segment algebra to 2 dt on 100 paths."""
    dt = 1e-6
    grid = (np.arange(int(round(1.0 / dt))) + 0.5) * dt
    for i in range(100):
        path, kernel = engine_path(cl_ref, 0.0, 1.0, seed=3, index=i, q=2.0)
        brute = dt * np.count_nonzero(path.level_at(grid) < 0)
        assert abs(brute - path.occupation_time) <= 2 * dt
        assert kernel["occupation"] == pytest.approx(path.occupation_time, abs=1e-12)
        assert kernel["ruined"] == path.ruined
        assert kernel["longest"] == pytest.approx(path.longest_excursion, abs=1e-12)


def test_path_invariants(cl_ref):
    rng = np.random.default_rng(2)
    for _ in range(200):
        p = simulate_cl_path(cl_ref, 0.3, 2.0, rng)
        assert np.all(np.diff(p.jump_times) > 0)
        assert np.all(p.jump_sizes > 0)
        assert 0.0 <= p.occupation_time <= p.horizon
        for s, e, _ in p.excursions:
            assert 0 < s < e <= p.horizon


def test_estimate_standard_error():
    est = Estimate.from_indicator(np.array([1, 0, 0, 1, 1], dtype=bool), 1, "demo")
    assert est.estimate == 0.6
    assert est.std_error == pytest.approx(math.sqrt(0.6 * 0.4 / 5))


def test_sigma_r_beyond_horizon(cl_ref):
    est = estimate_sigma_r(cl_ref, 1.0, 1.0, 1.0, 1000, 4)
    assert est.estimate == 0.0 and est.std_error == 0.0


def test_deterministic_and_thread_independent(cl_ref):
    a = simulate(cl_ref, 1.0, 1.0, 50_000, 11, q=2.0)
    b = simulate(cl_ref, 1.0, 1.0, 50_000, 11, q=2.0, chunk=777)
    np.testing.assert_array_equal(a.occupation, b.occupation)
    np.testing.assert_array_equal(a.kappa, b.kappa)
    # a prefix of a bigger run is the same set of paths
    c = simulate(cl_ref, 1.0, 1.0, 10_000, 11, q=2.0)
    np.testing.assert_array_equal(a.occupation[:10_000], c.occupation)
    assert simulate(cl_ref, 1.0, 1.0, 10_000, 12).occupation.tolist() != c.occupation.tolist()


def test_threads_from_python(cl_ref):
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(4) as pool:
        outs = list(pool.map(lambda s: simulate(cl_ref, 1.0, 1.0, 20_000, s).tau0().estimate, [5, 5, 6, 6]))
    assert outs[0] == outs[1] and outs[2] == outs[3]


@given(st.floats(0.0, 2.0), st.floats(0.01, 0.9), st.integers(0, 2**63))
def test_pathwise_orderings(x, r, seed):
    m = CramerLundbergParams(c=1.5, lam=1.0, alpha=1.0)
    res = simulate(m, x, 1.0, 2000, seed, q=1.0)
    assert not np.any(res.tau_r_hits(r) & ~res.sigma_r_hits(r))
    assert not np.any(res.sigma_r_hits(r) & ~res.ruined)
    assert not np.any(res.kappa & ~res.ruined)
    assert np.all(res.occupation >= res.longest)


def test_estimators_share_paths(cl_ref):
    args = (cl_ref, 1.0)
    assert estimate_tau0(*args, 1.0, 10_000, 8).estimate >= estimate_tau_r(*args, 0.2, 1.0, 10_000, 8).estimate
    with pytest.raises(ValueError):
        estimate_kappa_q(*args, 0.0, 1.0, 100, 8)
    with pytest.raises(ValueError):
        simulate(cl_ref, 1.0, 1.0, 0, 8)


def test_kappa_against_formula(cl_ref):
    est = estimate_kappa_q(cl_ref, 1.0, 2.0, 1.0, 400_000, 21)
    assert est.within(exp_parisian_prob_cl(cl_ref, 1.0, 2.0, 1.0))


def test_brownian_large_drift_never_negative():
    occ = simulate_bm_occupation(BrownianParams(100.0, 1.0), 1.0, 1.0, 1e-3, 2000, 1)
    assert occ.positive().estimate == 0.0
    assert occ.zeros == 2000


def test_brownian_small_drift_half():
    occ = simulate_bm_occupation(BrownianParams(0.01, 1.0), 0.0, 1.0, 1e-3, 20_000, 2)
    assert occ.cdf(0.5).estimate == pytest.approx(0.5, abs=0.03)
    assert occ.counts.sum() + occ.zeros == 20_000


def test_brownian_grid_against_formulas(bm_ref):
    dt = 1e-3
    res0, res5 = simulate_bm(bm_ref, [0.0, 0.5], 1.0, dt, 100_000, 3)
    allow = 2 * math.sqrt(dt)
    est = res0.occupation_cdf(0.3)
    assert est.within(occ_distribution_bm(bm_ref, 1.0).cdf(0.3), allowance=allow)
    est = res5.tau0()
    assert est.within(ruin_prob_bm(bm_ref, 0.5, 1.0), allowance=allow)


def test_brownian_dt_must_divide_horizon(bm_ref):
    with pytest.raises(ValueError):
        simulate_bm(bm_ref, [0.0], 1.0, 0.3, 10, 1)
